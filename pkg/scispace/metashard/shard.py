import logging
import threading
from typing import Dict, Iterable, List, Optional
from . import METADATA_LOG, SNAPSHOT_EVERY
from .persistence import ShardLog
from ..core.paths import WorkspacePath
from ..core.placement import place
from ..core.records import FileRecord, NamespaceTemplate, PUBLIC_NAMESPACE, visible_to
from ..protocol.fields import FieldReader, encode_fields, pack_u8, pack_text
from ..protocol.messages import pack_record, unpack_record, pack_namespace, unpack_namespace
from ..utils.errors import WrongShard, UnknownNamespace, NotFound, Conflict, ProtocolError, ConfigError

logger = logging.getLogger(__name__)

OP_PUT = 1
OP_BATCH = 2
OP_NAMESPACE = 3
OP_DROP = 4

E_OP = 1
E_RECORD = 2
E_NAMESPACE = 3
E_PATH = 4


class MetadataShard:
    """File-mapping shard and namespace registry of one DTN."""

    def __init__(
        self,
        dtn_index: int,
        dtn_count: int,
        directory: Optional[str] = None,
        fsync: bool = True,
        snapshot_every: int = SNAPSHOT_EVERY,
    ):
        self.dtn_index = dtn_index
        self.dtn_count = dtn_count
        self.snapshot_every = snapshot_every
        self.files: Dict[str, FileRecord] = {}
        self.namespaces: Dict[str, NamespaceTemplate] = {PUBLIC_NAMESPACE.name: PUBLIC_NAMESPACE}
        self._lock = threading.RLock()
        self.log = ShardLog(directory, METADATA_LOG, fsync) if directory else None
        if self.log is not None:
            self._recover()

    # ---------------- persistence ----------------

    def _recover(self):
        snapshot, entries = self.log.replay()
        if snapshot is not None:
            r = FieldReader.parse(snapshot)
            for raw in r.all(E_NAMESPACE):
                template = unpack_namespace(raw)
                self.namespaces[template.name] = template
            for raw in r.all(E_RECORD):
                record = unpack_record(raw)
                self.files[record.path.display] = record
        for entry in entries:
            self._apply(FieldReader.parse(entry))
        # membership is frozen for the life of a collaboration
        moved = [d for d, rec in self.files.items() if place(rec.path, self.dtn_count) != self.dtn_index]
        if moved:
            raise ConfigError(
                "Shard {:d} holds {:d} records placed elsewhere with {:d} DTNs; the DTN set changed".format(
                    self.dtn_index, len(moved), self.dtn_count
                )
            )
        logger.info(
            "Shard %d recovered %d records and %d namespaces",
            self.dtn_index,
            len(self.files),
            len(self.namespaces),
        )

    def _apply(self, r: FieldReader):
        op = r.uint(E_OP)
        if op in (OP_PUT, OP_BATCH):
            for raw in r.all(E_RECORD):
                self._upsert(unpack_record(raw))
        elif op == OP_NAMESPACE:
            template = unpack_namespace(r.require(E_NAMESPACE))
            self.namespaces[template.name] = template
        elif op == OP_DROP:
            self.files.pop(r.text(E_PATH), None)
        else:
            raise ProtocolError("Unknown log operation {!r}".format(op))

    def _commit(self, fields):
        payload = encode_fields(fields)
        if self.log is not None:
            self.log.append(payload)
        self._apply(FieldReader.parse(payload))
        if self.log is not None and self.log.n_entries >= self.snapshot_every:
            self.snapshot()

    def snapshot(self):
        with self._lock:
            if self.log is None:
                return
            fields = [(E_NAMESPACE, pack_namespace(t)) for _, t in sorted(self.namespaces.items())]
            fields += [(E_RECORD, pack_record(r)) for _, r in sorted(self.files.items())]
            self.log.write_snapshot(encode_fields(fields))

    def close(self):
        if self.log is not None:
            self.log.close()

    # ---------------- operations ----------------

    def _upsert(self, record: FileRecord):
        current = self.files.get(record.path.display)
        # last writer wins by mtime, ties by arrival order
        if current is not None and current.mtime > record.mtime:
            return
        self.files[record.path.display] = record

    def _check(self, record: FileRecord):
        if record.dtn_index != self.dtn_index or place(record.path, self.dtn_count) != self.dtn_index:
            raise WrongShard(
                "Record {} belongs to DTN {:d}, not to shard {:d}".format(
                    record.path.display, place(record.path, self.dtn_count), self.dtn_index
                )
            )
        if record.namespace not in self.namespaces:
            raise UnknownNamespace(
                "Namespace {!r} of {} is not registered".format(record.namespace, record.path.display)
            )

    def put_file_record(self, record: FileRecord):
        with self._lock:
            self._check(record)
            self._commit([(E_OP, pack_u8(OP_PUT)), (E_RECORD, pack_record(record))])

    def get_file_record(self, path: WorkspacePath, requester: Optional[str] = None) -> FileRecord:
        with self._lock:
            record = self.files.get(path.display)
        if record is None or (not record.synced and record.owner != requester):
            raise NotFound("No record for {}".format(path.display))
        return record

    def list_visible(self, requester: str, prefix: Optional[WorkspacePath] = None) -> List[FileRecord]:
        with self._lock:
            records = list(self.files.values())
            namespaces = dict(self.namespaces)
        out = []
        for record in records:
            template = namespaces.get(record.namespace)
            if template is None or not visible_to(record, template, requester):
                continue
            if prefix is not None and not record.path.is_within(prefix):
                continue
            out.append(record)
        out.sort(key=lambda r: r.path.display)
        return out

    def batch_export(self, records: Iterable[FileRecord]) -> int:
        records = [r.with_sync(True) for r in records]
        with self._lock:
            for record in records:
                self._check(record)
            if not records:
                return 0
            self._commit([(E_OP, pack_u8(OP_BATCH))] + [(E_RECORD, pack_record(r)) for r in records])
        return len(records)

    def register_namespace(self, template: NamespaceTemplate):
        with self._lock:
            current = self.namespaces.get(template.name)
            if current is not None:
                if current != template:
                    raise Conflict(
                        "Namespace {!r} is registered as ({}, {})".format(
                            template.name, current.owner, current.scope
                        )
                    )
                return
            self._commit([(E_OP, pack_u8(OP_NAMESPACE)), (E_NAMESPACE, pack_namespace(template))])

    def resolve_namespace(self, path: WorkspacePath) -> NamespaceTemplate:
        with self._lock:
            template = self.namespaces.get(path.namespace)
        if template is None:
            raise UnknownNamespace("Namespace {!r} is not registered".format(path.namespace))
        return template

    def drop_record(self, path: WorkspacePath):
        """Maintenance only: remote collaborators have no removal surface."""
        with self._lock:
            if path.display in self.files:
                self._commit([(E_OP, pack_u8(OP_DROP)), (E_PATH, pack_text(path.display))])

    def state(self):
        with self._lock:
            return dict(self.files), dict(self.namespaces)

    def filter_visible(self, displays: Iterable[str], requester: str) -> List[str]:
        """Keep the paths whose records the requester may see."""
        out = []
        with self._lock:
            for display in displays:
                record = self.files.get(display)
                if record is None:
                    continue
                template = self.namespaces.get(record.namespace)
                if template is not None and visible_to(record, template, requester):
                    out.append(display)
        out.sort()
        return out

    def has_record(self, display: str) -> bool:
        with self._lock:
            return display in self.files
