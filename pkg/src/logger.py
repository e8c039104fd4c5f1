import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def logger(func):
    from functools import wraps

    @wraps(func)
    def wrapper(*args, **kwargs):
        logger = logging.getLogger(func.__name__)
        logger.info("About to run %s" % func.__name__)
        out = func(*args, **kwargs)
        logger.info("Done running %s" % func.__name__)
        return out

    return wrapper


def set_verbose(verbosity: int = 0) -> None:
    """Configure the root logger: -1 quiet, 0 warnings, 1 info, 2 debug."""
    if verbosity < 0:
        level = logging.ERROR
    elif verbosity == 0:
        level = logging.WARNING
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
