"""Logging configuration for Curriculum Forge Lab."""

import logging
import logging.config
import os
from typing import Any, Dict, Optional

import structlog


def setup_logging(
    log_level: str = "INFO", log_format: str = "console", log_file: Optional[str] = None
) -> None:
    """
    Setup logging configuration.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Log format (json or console)
        log_file: Optional log file path
    """
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            (
                structlog.processors.JSONRenderer()
                if log_format == "json"
                else structlog.dev.ConsoleRenderer(colors=False)
            ),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    logging.config.dictConfig(create_logging_config(log_level, log_file))
    logging.getLogger().setLevel(getattr(logging, log_level.upper()))


def create_logging_config(
    log_level: str = "INFO", log_file: Optional[str] = None
) -> Dict[str, Any]:
    """
    Create logging configuration dictionary.

    structlog renders the final message, so the stdlib formatter only passes it through.

    Args:
        log_level: Logging level
        log_file: Optional log file path

    Returns:
        Dict[str, Any]: Logging configuration
    """
    handlers: Dict[str, Any] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": log_level.upper(),
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        }
    }

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": log_level.upper(),
            "formatter": "plain",
            "filename": log_file,
            "maxBytes": 10485760,  # 10MB
            "backupCount": 3,
            "encoding": "utf8",
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"plain": {"format": "%(message)s"}},
        "handlers": handlers,
        "loggers": {
            "": {
                "level": log_level.upper(),
                "handlers": list(handlers.keys()),
                "propagate": False,
            },
            "matplotlib": {"level": "WARNING", "handlers": ["console"], "propagate": False},
        },
    }
