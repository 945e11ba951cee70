import sys
import logging

__loggers = {}
__level = None


class Colors:
    ENDC = '\033[0m'
    BOLD = '\033[1m'
    # escape codes only make sense on a terminal
    enabled = sys.stderr.isatty()

    @classmethod
    def wrap(cls, fmt):
        if not cls.enabled:
            return fmt
        return '{}{}{}'.format(cls.BOLD, fmt, cls.ENDC)


def getLogger(name):
    """Returns logger 'name' with the console handler attached exactly once."""
    if name in __loggers:
        return __loggers[name]
    logger = logging.getLogger('jidf.' + name)
    logger.propagate = False
    if __level is not None:
        logger.setLevel(__level)
    console = logging.StreamHandler()
    fmt = logging.Formatter(Colors.wrap('[%(levelname)s] %(name)s (%(asctime)s) : %(message)s'))
    console.setFormatter(fmt)
    logger.addHandler(console)
    __loggers[name] = logger
    return logger


def setLevel(level):
    global __level

    __level = level
    for logger in __loggers.values():
        logger.setLevel(level)


def getLevel():
    return __level if __level is not None else logging.WARNING


def verbosity_to_level(count):
    """Maps number of -v flags to a level: WARNING -> INFO -> DEBUG."""
    return max(logging.DEBUG, logging.WARNING - count * (logging.INFO - logging.DEBUG))
