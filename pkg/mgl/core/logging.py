"""
Logger configuration for the ``mgl`` package.
"""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "WARNING") -> logging.Logger:
    """
    Attach a single stderr handler to the package logger.

    Calling it again only updates the level.

    Args:
        level: Logging level name ('DEBUG', 'INFO', ...)

    Returns:
        The configured ``mgl`` logger
    """
    logger = logging.getLogger("mgl")
    logger.setLevel(level.upper())

    if not any(getattr(h, "_mgl_handler", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._mgl_handler = True
        logger.addHandler(handler)

    return logger
