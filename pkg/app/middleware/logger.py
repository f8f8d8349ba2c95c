import os
import sys
import logging
from logging.handlers import RotatingFileHandler

from app.config.config import settings


def setup_logger():
    root = logging.getLogger()
    # configured once per process
    if root.handlers:
        return

    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_DIR:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        log_path = os.path.join(settings.LOG_DIR, "m2ols.log")
        handlers.append(RotatingFileHandler(log_path, maxBytes=10*1024*1024, backupCount=5))

    level = getattr(logging, settings.LOG_LEVEL.upper()) if settings.ENABLE_LOGGING else logging.CRITICAL + 1
    logging.basicConfig(
        level=level,
        format='%(asctime)s | %(levelname)-8s | %(module)s:%(funcName)s:%(lineno)d - %(message)s',
        handlers=handlers
    )
