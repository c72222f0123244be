import logging
import os

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def configure_logging(level=None):
    if level is None:
        level = os.environ.get("SCISPACE_LOG_LEVEL", "WARNING")
    if isinstance(level, str):
        name, level = level, getattr(logging, level.upper(), None)
        if not isinstance(level, int):
            raise ValueError("Unknown log level {!r}".format(name))

    root = logging.getLogger("scispace")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    return root
