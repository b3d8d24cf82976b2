"""Runtime settings, read from the environment (and an optional .env file)"""
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_SOURCE_SUFFIX = ".java"
DEFAULT_INDENT = 4


@dataclass(frozen=True)
class Settings:
    """Optional knobs; every path stays an explicit command-line argument"""
    log_level: str = DEFAULT_LOG_LEVEL
    source_suffix: str = DEFAULT_SOURCE_SUFFIX
    indent: int = DEFAULT_INDENT

    @property
    def logging_level(self) -> int:
        return getattr(logging, self.log_level.upper(), logging.INFO)


def load_settings(dotenv_path: str = None) -> Settings:
    """Load settings from SPLFORGE_* variables, falling back to defaults"""
    load_dotenv(dotenv_path)
    try:
        indent = int(os.getenv('SPLFORGE_INDENT', DEFAULT_INDENT))
    except ValueError:
        indent = DEFAULT_INDENT
    return Settings(
        log_level=os.getenv('SPLFORGE_LOG_LEVEL', DEFAULT_LOG_LEVEL),
        source_suffix=os.getenv('SPLFORGE_SOURCE_SUFFIX', DEFAULT_SOURCE_SUFFIX),
        indent=max(1, indent),
    )
