# splforge: incremental software product line builder
# Main package initialization

__version__ = "0.1.0"
__author__ = "splforge developers"
