import logging
import sys
from logging.handlers import RotatingFileHandler
from config import LOG_FILE, LOG_LEVEL

_FORMAT = "[%(asctime)s] %(levelname)s in %(module)s:%(lineno)d: %(message)s"
_configured = set()


def get_logger(name="lonely_runner", log_file=LOG_FILE):
    logger = logging.getLogger(name)
    if not logger.handlers:
        # stderr keeps CLI stdout clean for fractions and JSON
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(console_handler)

        if log_file:
            file_handler = RotatingFileHandler(log_file, maxBytes=5*1024*1024, backupCount=3, encoding="utf-8")
            file_handler.setFormatter(logging.Formatter(_FORMAT))
            logger.addHandler(file_handler)

        level = getattr(logging, LOG_LEVEL.upper(), logging.INFO)
        logger.setLevel(level)
        logger.propagate = False
        _configured.add(name)
    return logger


def set_level(level):
    """Change the level of every logger handed out so far (used by --quiet / --verbose)."""
    for name in _configured:
        logging.getLogger(name).setLevel(level)


logger = get_logger()
