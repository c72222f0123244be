import logging
import os
from collections import Counter
from typing import List, Sequence, Set
from .session import WorkspaceSession
from ..backend import MODE_MARKER
from ..core.records import DtnDescriptor, index_dtns
from ..metashard import SNAPSHOT_EVERY
from ..metashard.service import ShardService
from ..sds import MODE_INLINE_SYNC, FS_MTIME
from ..sds.queue import Thresholds

logger = logging.getLogger(__name__)


class LocalCluster:
    """Every shard service of a collaboration, running in this process."""

    def __init__(
        self,
        dtns: Sequence[DtnDescriptor],
        specs=frozenset(),
        thresholds: Thresholds = Thresholds(),
        fsync: bool = True,
        snapshot_every: int = SNAPSHOT_EVERY,
        drain_worker: bool = True,
    ):
        self.dtns = list(dtns)
        self.specs = frozenset(specs)
        self.thresholds = thresholds
        self.fsync = fsync
        self.snapshot_every = snapshot_every
        self.drain_worker = drain_worker
        self.services: List[ShardService] = [self._start(d) for d in self.dtns]
        self._sessions: List[WorkspaceSession] = []

    @classmethod
    def in_directory(cls, base_dir: str, n_dtns: int, **kwargs):
        if n_dtns < 1:
            raise ValueError("A collaboration needs at least one DTN, got {:d}".format(n_dtns))
        entries = [{"id": "dtn{:02d}".format(k), "backend_root": os.path.join(base_dir, "dtn{:02d}".format(k))} for k in range(n_dtns)]
        return cls(index_dtns(entries), **kwargs)

    def _start(self, dtn: DtnDescriptor) -> ShardService:
        service = ShardService(
            dtn, len(self.dtns), self.fsync, self.snapshot_every, self.thresholds, self.specs
        )
        return service.start(self.drain_worker)

    @property
    def roots(self) -> List[str]:
        return [d.backend_root for d in self.dtns]

    def session(
        self,
        collaborator: str,
        mode: str = MODE_INLINE_SYNC,
        specs=None,
        observer=None,
        flag_mode: str = MODE_MARKER,
    ) -> WorkspaceSession:
        session = WorkspaceSession.loopback(
            collaborator,
            self.services,
            observer,
            mode=mode,
            specs=self.specs if specs is None else specs,
            flag_mode=flag_mode,
        )
        self._sessions.append(session)
        return session

    def restart(self, index: int) -> ShardService:
        """Stop one service and bring it back from its persisted state.

        Sessions opened before the restart keep talking to the stopped service.
        """
        self.services[index].stop()
        self.services[index] = self._start(self.dtns[index])
        return self.services[index]

    def triple_set(self, exclude=(FS_MTIME,)) -> Set[tuple]:
        keys = set()
        for service in self.services:
            keys.update(k for k in service.discovery.triple_set() if k[0] not in exclude)
        return keys

    def audit_disjoint(self) -> List[str]:
        """Paths recorded by more than one shard."""
        counts = Counter()
        for service in self.services:
            counts.update(service.audit_records())
        return sorted(display for display, n in counts.items() if n > 1)

    def close(self):
        for session in self._sessions:
            session.close()
        self._sessions = []
        for service in self.services:
            if service.running:
                service.stop()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
