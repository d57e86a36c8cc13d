import logging
import os
import sys
from datetime import datetime
from app.config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _daily_log_file() -> str:
    os.makedirs(Config.LOGS_PATH, exist_ok=True)
    stamp = datetime.now().strftime('%Y%m%d')
    return os.path.join(Config.LOGS_PATH, f"{Config.LOGGER_NAME}_{stamp}.log")


def setup_logger(name: str) -> logging.Logger:
    """
    Setup module logger

    Args:
        name: Logger name (usually __name__)

    Returns:
        Logger writing to the daily log file and to stderr; stdout stays
        reserved for command results
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(Config.LOG_LEVEL)
    formatter = logging.Formatter(LOG_FORMAT)

    handlers = []
    if Config.LOGS_PATH:
        file_handler = logging.FileHandler(_daily_log_file())
        file_handler.setLevel(Config.LOG_LEVEL)
        handlers.append(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(Config.CONSOLE_LOG_LEVEL)
    handlers.append(console_handler)

    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    logger.propagate = False

    return logger
