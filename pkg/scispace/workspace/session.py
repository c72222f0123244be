import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence
from . import FANOUT_WORKERS
from ..backend import MODE_MARKER
from ..backend.flags import SyncFlagStore
from ..core.records import DtnDescriptor
from ..protocol.transport import ShardLink, LoopbackLink, TcpShardClient
from ..sds import MODES, MODE_INLINE_SYNC
from ..utils.errors import ShardUnavailable

logger = logging.getLogger(__name__)


class WorkspaceSession:
    """One collaborator's connections to every DTN of a collaboration."""

    def __init__(
        self,
        collaborator: str,
        dtns: Sequence[DtnDescriptor],
        links: Sequence[ShardLink],
        mode: str = MODE_INLINE_SYNC,
        specs=frozenset(),
        flag_mode: str = MODE_MARKER,
    ):
        if not dtns:
            raise ValueError("A session needs at least one DTN")
        if [d.index for d in dtns] != list(range(len(dtns))):
            raise ValueError("DTN indices should be dense, got {}".format([d.index for d in dtns]))
        if len(links) != len(dtns):
            raise ValueError("Expected {:d} shard links, got {:d}".format(len(dtns), len(links)))
        if mode not in MODES:
            raise ValueError("Unknown indexing mode {!r}, expected one of {}".format(mode, MODES))
        self.collaborator = collaborator
        self.dtns = list(dtns)
        self.links = list(links)
        self.mode = mode
        self.specs = frozenset(specs)
        self.flags = [SyncFlagStore(d.backend_root, flag_mode) for d in self.dtns]
        self._pool = None

    @classmethod
    def loopback(cls, collaborator: str, services, observer: Optional[Callable] = None, **kwargs):
        dtns = [s.dtn for s in services]
        links = [LoopbackLink(s, observer) for s in services]
        return cls(collaborator, dtns, links, **kwargs)

    @classmethod
    def tcp(cls, collaborator: str, dtns: Sequence[DtnDescriptor], observer: Optional[Callable] = None, **kwargs):
        links = [TcpShardClient(d.host, d.port, observer) for d in dtns]
        return cls(collaborator, dtns, links, **kwargs)

    @property
    def dtn_count(self) -> int:
        return len(self.dtns)

    def root(self, dtn_index: int) -> str:
        return self.dtns[dtn_index].backend_root

    def dtn_of_root(self, backend_root: str) -> int:
        wanted = os.path.realpath(backend_root)
        for dtn in self.dtns:
            if os.path.realpath(dtn.backend_root) == wanted:
                return dtn.index
        raise ValueError("{} is not the backend of any DTN in this session".format(backend_root))

    def call(self, dtn_index: int, msg_type: int, payload: bytes):
        try:
            return self.links[dtn_index].call(msg_type, payload)
        except ConnectionError as e:
            raise ShardUnavailable("Shard {:d} unreachable: {}".format(dtn_index, e)) from e

    def fanout(self, msg_type: int, payload: bytes) -> List:
        """Send one request to every shard concurrently; any failure fails the whole call."""
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=min(FANOUT_WORKERS, self.dtn_count))
        futures = [self._pool.submit(self.call, idx, msg_type, payload) for idx in range(self.dtn_count)]
        results, first_error = [], None
        for future in futures:
            try:
                results.append(future.result())
            except Exception as e:
                if first_error is None:
                    first_error = e
        if first_error is not None:
            raise first_error
        return results

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None
        for link in self.links:
            link.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
