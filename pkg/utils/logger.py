import logging
import sys

from config import Config

def setup_logger(name: str = "hql", level: int = None) -> logging.Logger:
    """Setup and configure logger"""
    logger = logging.getLogger(name)
    if level is None:
        level = logging.getLevelName(Config.LOG_LEVEL.upper())
    logger.setLevel(logging.DEBUG if Config.LOG_FILE else level)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    # Console handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)

    # Formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler, only when HQL_LOG_FILE is set
    if Config.LOG_FILE:
        file_handler = logging.FileHandler(Config.LOG_FILE)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
