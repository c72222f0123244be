import logging
import os
import socket
import time
from . import LOCK_FILE, LOCK_STALE_S
from ..utils.errors import LockHeld, IoFailure

logger = logging.getLogger(__name__)


def default_holder() -> str:
    return "{}:{:d}".format(socket.gethostname(), os.getpid())


class MeuLock:
    """Single-instance lock on a backend root.

    The lock file holds one line `<holder> <timestamp_ms>`; a lock older than
    `stale_s` seconds is taken over.
    """

    def __init__(self, backend_root: str, holder: str = None, stale_s: float = LOCK_STALE_S):
        self.path = os.path.join(backend_root, *LOCK_FILE.split("/"))
        self.holder = holder or default_holder()
        self.stale_s = stale_s
        self.held = False

    def _read(self):
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                holder, _, stamp = f.read().strip().rpartition(" ")
            return holder, int(stamp)
        except (OSError, ValueError):
            pass
        # half-written lock: age it by the file itself
        try:
            return "unknown", int(os.path.getmtime(self.path) * 1000)
        except OSError:
            return "unknown", int(time.time() * 1000)

    def _create(self) -> bool:
        os.makedirs(os.path.dirname(self.path), exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o644)
        except FileExistsError:
            return False
        except OSError as e:
            raise IoFailure("Creating lock {} failed: {}".format(self.path, e)) from e
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write("{} {:d}\n".format(self.holder, int(time.time() * 1000)))
        return True

    def acquire(self):
        if self._create():
            self.held = True
            return self
        holder, stamp = self._read()
        age_s = time.time() - stamp / 1000.0
        if age_s <= self.stale_s:
            raise LockHeld(self.path, holder, age_s)
        logger.warning("Taking over stale export lock %s held by %s for %.0f s", self.path, holder, age_s)
        try:
            os.remove(self.path)
        except FileNotFoundError:
            pass
        if not self._create():
            holder, stamp = self._read()
            raise LockHeld(self.path, holder, time.time() - stamp / 1000.0)
        self.held = True
        return self

    def release(self):
        if not self.held:
            return
        self.held = False
        holder, _ = self._read()
        if holder != self.holder:
            logger.warning("Export lock %s was taken over by %s", self.path, holder)
            return
        try:
            os.remove(self.path)
        except FileNotFoundError:
            pass

    def __enter__(self):
        return self.acquire()

    def __exit__(self, *exc):
        self.release()
