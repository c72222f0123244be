import logging
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, FrozenSet, Optional
from . import FLUSH_COUNT, FLUSH_MS, FLUSH_BYTES, QUEUE_BOUND
from .extraction import extract_attributes
from ..utils.errors import QueueFull, NotFound, IoFailure, ScispaceError, ShardUnavailable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Thresholds:
    flush_count: int = FLUSH_COUNT
    flush_ms: int = FLUSH_MS
    flush_bytes: int = FLUSH_BYTES

    def __post_init__(self):
        if self.flush_count < 1 or self.flush_ms < 1 or self.flush_bytes < 1:
            raise ValueError("Flush thresholds should be positive, got {}".format(self))


@dataclass
class QueueEntry:
    size: int
    specs: Optional[FrozenSet]
    enqueued_at: float
    generation: int


class IndexQueue:
    """Coalescing FIFO of files waiting for extraction (many producers, one drainer)."""

    def __init__(self, thresholds: Thresholds = Thresholds(), bound: int = QUEUE_BOUND):
        self.thresholds = thresholds
        self.bound = bound
        self._pending = OrderedDict()
        self._bytes = 0
        self._generation = 0
        self.cond = threading.Condition()

    def __len__(self):
        with self.cond:
            return len(self._pending)

    @property
    def pending_bytes(self) -> int:
        with self.cond:
            return self._bytes

    def pending(self):
        with self.cond:
            return list(self._pending)

    def enqueue(self, path: str, size: int = 0, specs=None):
        with self.cond:
            self._generation += 1
            current = self._pending.get(path)
            if current is None:
                if len(self._pending) >= self.bound:
                    raise QueueFull("Index queue holds {:d} entries".format(self.bound))
                self._pending[path] = QueueEntry(size, specs, time.monotonic(), self._generation)
            else:
                # keeps its place in line, latest content wins at drain time
                self._bytes -= current.size
                current.size = size
                current.specs = specs
                current.generation = self._generation
            self._bytes += size
            self.cond.notify_all()

    def peek(self, n: int):
        with self.cond:
            return [(path, QueueEntry(e.size, e.specs, e.enqueued_at, e.generation)) for path, e in list(self._pending.items())[:n]]

    def discard(self, path: str, generation: int):
        """Remove an entry unless it was re-enqueued after `generation`."""
        with self.cond:
            current = self._pending.get(path)
            if current is not None and current.generation == generation:
                del self._pending[path]
                self._bytes -= current.size
                self.cond.notify_all()

    def oldest_age_ms(self, now: Optional[float] = None) -> float:
        with self.cond:
            if not self._pending:
                return 0.0
            first = next(iter(self._pending.values()))
        return ((now or time.monotonic()) - first.enqueued_at) * 1000.0

    def should_flush(self, now: Optional[float] = None) -> bool:
        with self.cond:
            n, n_bytes = len(self._pending), self._bytes
        if n == 0:
            return False
        t = self.thresholds
        return n >= t.flush_count or n_bytes >= t.flush_bytes or self.oldest_age_ms(now) >= t.flush_ms


def drain_step(queue: IndexQueue, shard, specs, read_file: Callable) -> int:
    """Extract and store up to flush_count queued files; returns how many were indexed.

    `read_file(path)` returns (bytes, stat) and raises NotFound for vanished files.
    If the shard cannot store the batch, the entries stay queued.
    """
    batch = queue.peek(queue.thresholds.flush_count)
    if not batch:
        return 0
    groups = {}
    for path, entry in batch:
        try:
            data, stat = read_file(path)
            groups[path] = extract_attributes(path, data, entry.specs if entry.specs is not None else specs, stat)
        except NotFound:
            logger.warning("Dropping queued %s: file vanished before indexing", path)
        except ScispaceError as e:
            logger.warning("Dropping queued %s: %s", path, e)
    try:
        shard.replace_extracted(groups)
    except IoFailure as e:
        raise ShardUnavailable("Discovery shard rejected the batch: {}".format(e)) from e
    for path, entry in batch:
        queue.discard(path, entry.generation)
    return len(groups)


def drain_all(queue: IndexQueue, shard, specs, read_file: Callable) -> int:
    total = 0
    while len(queue):
        total += drain_step(queue, shard, specs, read_file)
    return total


class DrainWorker(threading.Thread):
    """Background consumer: drains whenever a time, size or count threshold fires."""

    def __init__(self, queue: IndexQueue, shard, specs, read_file: Callable):
        super().__init__(daemon=True, name="scispace-drain")
        self.queue = queue
        self.shard = shard
        self.specs = specs
        self.read_file = read_file
        self._stop_event = threading.Event()

    def stop(self, timeout: float = 5.0):
        self._stop_event.set()
        with self.queue.cond:
            self.queue.cond.notify_all()
        self.join(timeout)

    def _wait_time(self) -> float:
        t = self.queue.thresholds
        if len(self.queue) == 0:
            return t.flush_ms / 1000.0
        remaining = t.flush_ms - self.queue.oldest_age_ms()
        return max(remaining / 1000.0, 0.001)

    def run(self):
        while not self._stop_event.is_set():
            with self.queue.cond:
                self.queue.cond.wait(self._wait_time())
            if self._stop_event.is_set():
                return
            while self.queue.should_flush() and not self._stop_event.is_set():
                crashed = False
                with self.shard.maintenance:
                    try:
                        drain_step(self.queue, self.shard, self.specs, self.read_file)
                    except ShardUnavailable as e:
                        logger.warning("Drain step failed, will retry: %s", e)
                        break
                    except Exception:
                        logger.exception("Drain step crashed, will retry")
                        crashed = True
                if crashed:
                    self._stop_event.wait(self.queue.thresholds.flush_ms / 1000.0)
                    break
