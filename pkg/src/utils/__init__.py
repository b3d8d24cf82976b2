# Utils package

from src.utils.logger import setup_logging, get_logger, LoggerMixin, log_error
from src.utils.config import Settings, load_settings

__all__ = ['setup_logging', 'get_logger', 'LoggerMixin', 'log_error', 'Settings', 'load_settings']
