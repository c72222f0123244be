import logging
import os
from typing import Iterable, List, Optional
from . import SHARD_DIR, SNAPSHOT_EVERY
from .shard import MetadataShard
from ..backend.storage import bk_get, bk_stat, bk_exists, clean_rel
from ..core import KIND_FILE
from ..core.paths import normalize_path
from ..core.placement import place
from ..core.records import DtnDescriptor
from ..protocol import (
    PUT_FILE,
    GET_FILE,
    LIST_VISIBLE,
    BATCH_EXPORT,
    ENQUEUE_INDEX,
    QUERY,
    TAG,
    REGISTER_NS,
    RESULT,
    ERROR,
    INDEX_ENQUEUE,
    INDEX_NOW,
    INDEX_OFFLINE,
    INDEX_FLUSH,
)
from ..protocol.fields import FieldReader, encode_fields, pack_u32, pack_u64, pack_text
from ..protocol.framing import Frame
from ..protocol import messages as m
from ..queryql.predicate import Clause, Predicate
from ..sds.discovery import DiscoveryShard
from ..sds.indexing import index_sync, index_offline, tag_manual
from ..sds.queue import IndexQueue, Thresholds, DrainWorker, drain_all
from ..sds.specs import parse_spec_line, spec_set
from ..utils.errors import ScispaceError, UnsupportedMessage, INTERNAL

logger = logging.getLogger(__name__)


class ShardService:
    """Metadata and discovery shards of one DTN behind the frame protocol."""

    def __init__(
        self,
        dtn: DtnDescriptor,
        dtn_count: int,
        fsync: bool = True,
        snapshot_every: int = SNAPSHOT_EVERY,
        thresholds: Thresholds = Thresholds(),
        specs=frozenset(),
    ):
        self.dtn = dtn
        self.dtn_index = dtn.index
        self.dtn_count = dtn_count
        self.backend_root = dtn.backend_root
        self.specs = frozenset(specs)
        os.makedirs(self.backend_root, exist_ok=True)
        directory = os.path.join(self.backend_root, *SHARD_DIR.split("/"))
        self.metadata = MetadataShard(dtn.index, dtn_count, directory, fsync, snapshot_every)
        self.discovery = DiscoveryShard(directory, fsync, snapshot_every)
        self.queue = IndexQueue(thresholds)
        self.worker: Optional[DrainWorker] = None
        self.running = False
        self._handlers = {
            PUT_FILE: self._put_file,
            GET_FILE: self._get_file,
            LIST_VISIBLE: self._list_visible,
            BATCH_EXPORT: self._batch_export,
            ENQUEUE_INDEX: self._enqueue_index,
            QUERY: self._query,
            TAG: self._tag,
            REGISTER_NS: self._register_ns,
        }

    def start(self, drain_worker: bool = True):
        self.running = True
        if drain_worker and self.worker is None:
            self.worker = DrainWorker(self.queue, self.discovery, self.specs, self.read_file)
            self.worker.start()
        return self

    def stop(self):
        self.running = False
        if self.worker is not None:
            self.worker.stop()
            self.worker = None
        self.metadata.close()
        self.discovery.close()

    def read_file(self, display: str):
        rel = clean_rel(display)
        return bk_get(self.backend_root, rel), bk_stat(self.backend_root, rel)

    # ---------------- dispatch ----------------

    def handle_frame(self, frame: Frame) -> Frame:
        handler = self._handlers.get(frame.msg_type)
        try:
            if handler is None:
                raise UnsupportedMessage("Unknown message type {:d}".format(frame.msg_type))
            reader = FieldReader.parse(frame.payload)
            fields = handler(reader, reader.text(m.F_REQUESTER, ""))
            return Frame(RESULT, frame.request_id, encode_fields(fields))
        except ScispaceError as e:
            logger.debug("Shard %d answers %s with %s", self.dtn_index, frame.name, e)
            return Frame(ERROR, frame.request_id, m.error_payload(e.code, str(e), type(e).__name__))
        except Exception as e:
            logger.exception("Shard %d failed on %s", self.dtn_index, frame.name)
            return Frame(ERROR, frame.request_id, m.error_payload(INTERNAL, str(e)))

    # ---------------- handlers ----------------

    def _put_file(self, r, requester):
        self.metadata.put_file_record(m.unpack_record(r.require(m.F_RECORD)))
        return [(m.F_RES_COUNT, pack_u32(1))]

    def _get_file(self, r, requester):
        path = normalize_path(r.text(m.F_PATH, ""))
        template = self.metadata.resolve_namespace(path)
        record = self.metadata.get_file_record(path, requester)
        return [(m.F_RES_RECORD, m.pack_record(record)), (m.F_RES_SCOPE, m.pack_scope(template.scope))]

    def _list_visible(self, r, requester):
        prefix = r.text(m.F_PREFIX)
        records = self.metadata.list_visible(requester, normalize_path(prefix) if prefix else None)
        return [(m.F_RES_RECORD, m.pack_record(rec)) for rec in records]

    def _batch_export(self, r, requester):
        count = self.metadata.batch_export(m.records_of(r, m.F_RECORD))
        logger.info("Shard %d accepted %d exported records from %s", self.dtn_index, count, requester)
        return [(m.F_RES_COUNT, pack_u32(count))]

    def _specs_of(self, r):
        lines = [raw.decode("utf-8") for raw in r.all(m.F_SPEC)]
        return spec_set(parse_spec_line(line) for line in lines) if lines else self.specs

    def _enqueue_index(self, r, requester):
        mode = r.uint(m.F_INDEX_MODE, INDEX_ENQUEUE)
        specs = self._specs_of(r)
        if mode == INDEX_ENQUEUE:
            path = normalize_path(r.text(m.F_PATH, "")).display
            self.queue.enqueue(path, r.uint(m.F_SIZE, 0), specs)
            return [(m.F_RES_COUNT, pack_u32(len(self.queue)))]
        if mode == INDEX_NOW:
            path = normalize_path(r.text(m.F_PATH, "")).display
            data, stat = self.read_file(path)
            return [(m.F_RES_COUNT, pack_u32(index_sync(path, data, specs, self.discovery, stat)))]
        if mode == INDEX_OFFLINE:
            selector = r.text(m.F_PATH, "")
            if not bk_exists(self.backend_root, clean_rel(selector)):
                # the subtree may live on another DTN only
                return [(m.F_RES_COUNT, pack_u32(0)), (m.F_RES_TRIPLES_WRITTEN, pack_u64(0))]
            report = index_offline(self.backend_root, selector, specs, self.discovery, accept=self._placed_here)
            return [
                (m.F_RES_COUNT, pack_u32(report.files_indexed)),
                (m.F_RES_TRIPLES_WRITTEN, pack_u64(report.triples_written)),
            ]
        if mode == INDEX_FLUSH:
            with self.discovery.maintenance:
                count = drain_all(self.queue, self.discovery, specs, self.read_file)
            return [(m.F_RES_COUNT, pack_u32(count))]
        raise UnsupportedMessage("Unknown indexing mode {!r}".format(mode))

    def _placed_here(self, display: str) -> bool:
        return place(normalize_path(display), self.dtn_count) == self.dtn_index

    def _query(self, r, requester):
        clauses = [Clause(*m.unpack_clause(raw)) for raw in r.all(m.F_CLAUSE)]
        hits = self.discovery.evaluate(Predicate(tuple(clauses)))
        visible = self.metadata.filter_visible(hits, requester)
        return [(m.F_RES_PATH, pack_text(f)) for f in visible]

    def _tag(self, r, requester):
        path = normalize_path(r.text(m.F_PATH, ""))
        known = self.metadata.has_record(path.display) or bk_exists(self.backend_root, path.backend_rel)
        tag_manual(self.discovery, path.display, r.text(m.F_ATTRIBUTE, ""), m.unpack_value(r.require(m.F_VALUE)), known)
        return [(m.F_RES_COUNT, pack_u32(1))]

    def _register_ns(self, r, requester):
        self.metadata.register_namespace(m.unpack_namespace(r.require(m.F_NAMESPACE)))
        return [(m.F_RES_COUNT, pack_u32(1))]

    # ---------------- maintenance ----------------

    def scrub(self) -> List[str]:
        """Drop file records whose bytes are gone from the backend."""
        files, _ = self.metadata.state()
        dropped = []
        for display, record in sorted(files.items()):
            if record.kind != KIND_FILE or bk_exists(self.backend_root, record.path.backend_rel):
                continue
            self.metadata.drop_record(record.path)
            self.discovery.drop_file(display)
            dropped.append(display)
        if dropped:
            logger.warning("Scrub of shard %d dropped %d stale records", self.dtn_index, len(dropped))
        return dropped

    def audit_records(self) -> Iterable[str]:
        return list(self.metadata.state()[0])
