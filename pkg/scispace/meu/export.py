"""Scan-and-commit of locally written entries."""
import logging
import os
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional
from .lock import MeuLock
from ..backend.flags import SyncFlagStore
from ..backend.storage import BackendEntry, bk_scan_entries, bk_list_children, clean_rel, resolve
from ..core.paths import from_backend_rel
from ..core.placement import place
from ..core.records import FileRecord
from ..protocol import BATCH_EXPORT, ENQUEUE_INDEX, INDEX_OFFLINE
from ..protocol import messages as m
from ..protocol.fields import pack_text, pack_u8
from ..sds.specs import spec_lines
from ..utils.errors import MalformedPath, NotFound, ShardUnavailable

logger = logging.getLogger(__name__)


@dataclass
class ScanReport:
    dirs_visited: int = 0
    dirs_skipped: int = 0
    files_unsynced: List[str] = field(default_factory=list)
    elapsed_ms: float = 0.0
    entries: List[BackendEntry] = field(default_factory=list)
    visited_dirs: List[str] = field(default_factory=list)

    @property
    def dirs_encountered(self) -> int:
        return self.dirs_visited + self.dirs_skipped


@dataclass
class ExportReport:
    exported: int = 0
    per_shard: Dict[int, int] = field(default_factory=dict)
    partial: bool = False
    failed_shards: List[int] = field(default_factory=list)
    misplaced: List[str] = field(default_factory=list)
    indexed: int = 0
    scan: Optional[ScanReport] = None


def _scan(root: str, start: str, flags: SyncFlagStore) -> ScanReport:
    report = ScanReport()
    t0 = time.perf_counter()
    start_full = resolve(root, start)
    if not os.path.lexists(start_full):
        raise NotFound("Nothing to scan at {!r} under {}".format(start, root))
    if os.path.isdir(start_full):
        if flags.get(start, is_directory=True):
            report.dirs_skipped = 1
            report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
            return report
        report.dirs_visited = 1
        report.visited_dirs.append(start)

    def prune(entry: BackendEntry) -> bool:
        if flags.get(entry.rel_path, is_directory=True):
            report.dirs_skipped += 1
            return True
        report.dirs_visited += 1
        report.visited_dirs.append(entry.rel_path)
        return False

    for entry in bk_scan_entries(root, start, prune):
        if entry.is_directory:
            continue
        if not flags.get(entry.rel_path, is_directory=False):
            report.files_unsynced.append(entry.rel_path)
            report.entries.append(entry)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return report


def meu_scan(backend_root: str, start_rel: str, flags: SyncFlagStore, lock: Optional[MeuLock] = None) -> ScanReport:
    """Depth-first walk that never descends into a directory whose flag is set.

    Without a held `lock`, one is taken for the duration of the scan.
    """
    start = clean_rel(start_rel)
    if lock is not None and lock.held:
        return _scan(backend_root, start, flags)
    with MeuLock(backend_root):
        return _scan(backend_root, start, flags)


def _seal_directories(flags: SyncFlagStore, visited_dirs: List[str]):
    # visited_dirs is in pre-order, so reversed it meets children before parents
    for rel_dir in reversed(visited_dirs):
        children = bk_list_children(flags.root, rel_dir)
        prefix = rel_dir + "/" if rel_dir else ""
        if all(flags.get(prefix + name, is_directory=is_dir) for name, is_dir in children):
            flags.set(rel_dir, True, is_directory=True)


def meu_export(backend_root: str, start_rel: str, session, index: bool = False) -> ExportReport:
    """Commit every unsynced file below start_rel with one BATCH_EXPORT per shard."""
    dtn = session.dtn_of_root(backend_root)
    flags = session.flags[dtn]
    report = ExportReport()
    with MeuLock(backend_root, holder=session.collaborator) as lock:
        scan = meu_scan(backend_root, start_rel, flags, lock)
        report.scan = scan

        groups = defaultdict(list)
        for entry in scan.entries:
            try:
                path = from_backend_rel(entry.rel_path)
            except MalformedPath:
                path = None
            if path is None or not path.rel:
                logger.warning("Skipping %s: files must live inside a namespace directory", entry.rel_path)
                report.misplaced.append(entry.rel_path)
                continue
            target = place(path, session.dtn_count)
            if target != dtn:
                logger.warning("Skipping %s: it places to DTN %d, not DTN %d", path.display, target, dtn)
                report.misplaced.append(entry.rel_path)
                continue
            groups[target].append(FileRecord(path, entry.size, session.collaborator, entry.mtime, target, True))

        for target, records in sorted(groups.items()):
            payload = m.request_payload(
                session.collaborator, *[(m.F_RECORD, m.pack_record(r)) for r in records]
            )
            try:
                reply = session.call(target, BATCH_EXPORT, payload)
            except ShardUnavailable as e:
                logger.error("Export of %d records to shard %d failed: %s", len(records), target, e)
                report.partial = True
                report.failed_shards.append(target)
                continue
            for record in records:
                flags.set(record.path.backend_rel, True, is_directory=False)
            count = reply.uint(m.F_RES_COUNT, len(records))
            report.per_shard[target] = count
            report.exported += count

        if not report.partial:
            _seal_directories(flags, scan.visited_dirs)

        if index and report.exported:
            fields = [(m.F_INDEX_MODE, pack_u8(INDEX_OFFLINE)), (m.F_PATH, pack_text(clean_rel(start_rel)))]
            fields += [(m.F_SPEC, pack_text(line)) for line in spec_lines(session.specs)]
            reply = session.call(dtn, ENQUEUE_INDEX, m.request_payload(session.collaborator, *fields))
            report.indexed = reply.uint(m.F_RES_COUNT, 0)

    logger.info(
        "Exported %d records from %s (%d dirs visited, %d skipped)",
        report.exported,
        backend_root,
        scan.dirs_visited,
        scan.dirs_skipped,
    )
    return report
