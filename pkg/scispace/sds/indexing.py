import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional
from . import SOURCE_MANUAL
from .discovery import AttributeTriple, DiscoveryShard
from .extraction import extract_attributes
from ..backend.storage import bk_scan_entries, bk_get, clean_rel
from ..sdf import SDF_SUFFIX
from ..sdf.values import AttributeValue
from ..utils.errors import IoFailure, ShardUnavailable, NotFound

logger = logging.getLogger(__name__)


@dataclass
class IndexReport:
    files_seen: int = 0
    files_indexed: int = 0
    triples_written: int = 0
    scan_ms: float = 0.0
    extract_ms: float = 0.0
    store_ms: float = 0.0

    @property
    def elapsed_ms(self) -> float:
        return self.scan_ms + self.extract_ms + self.store_ms


def index_sync(path: str, file_bytes: bytes, specs, shard: DiscoveryShard, stat=None) -> int:
    """Extract and store before returning; the write that triggered it waits on this."""
    triples = extract_attributes(path, file_bytes, specs, stat)
    try:
        shard.replace_extracted({path: triples})
    except IoFailure as e:
        raise ShardUnavailable("Discovery shard rejected {}: {}".format(path, e)) from e
    return len(triples)


def index_offline(
    backend_root: str,
    selector: str,
    specs,
    shard: DiscoveryShard,
    accept: Optional[Callable[[str], bool]] = None,
) -> IndexReport:
    """Scan a backend subtree and index every `.sdf` file found there.

    `accept(path_display)` can veto files, e.g. those that place to another DTN.
    """
    report = IndexReport()
    start = clean_rel(selector)
    with shard.maintenance:
        t0 = time.perf_counter()
        entries = [e for e in bk_scan_entries(backend_root, start) if not e.is_directory]
        t1 = time.perf_counter()
        report.scan_ms = (t1 - t0) * 1000.0

        groups = {}
        for entry in entries:
            report.files_seen += 1
            display = "/" + entry.rel_path
            if not entry.rel_path.lower().endswith(SDF_SUFFIX):
                continue
            if accept is not None and not accept(display):
                continue
            try:
                data = bk_get(backend_root, entry.rel_path)
            except NotFound:
                logger.warning("%s vanished during offline indexing", display)
                continue
            groups[display] = extract_attributes(display, data, specs, entry)
        t2 = time.perf_counter()
        report.extract_ms = (t2 - t1) * 1000.0

        try:
            shard.replace_extracted(groups)
        except IoFailure as e:
            raise ShardUnavailable("Discovery shard rejected the offline batch: {}".format(e)) from e
        report.store_ms = (time.perf_counter() - t2) * 1000.0

    report.files_indexed = len(groups)
    report.triples_written = sum(len(t) for t in groups.values())
    logger.info(
        "Offline indexing of %s/%s: %d seen, %d indexed, %d triples",
        backend_root,
        start,
        report.files_seen,
        report.files_indexed,
        report.triples_written,
    )
    return report


def tag_manual(shard: DiscoveryShard, path: str, name: str, value: AttributeValue, known: bool = True):
    if not known:
        raise NotFound("Cannot tag {}: no such file".format(path))
    shard.tag(AttributeTriple(name, path, value, SOURCE_MANUAL))
