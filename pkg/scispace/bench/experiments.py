"""Experiment drivers. Each one builds throwaway in-process collaborations and
returns a BenchReport; nothing here asserts on the numbers."""
import contextlib
import logging
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence
import numpy as np
from scipy.stats import linregress
from . import (
    DEFAULT_SEED,
    MEU_COUNTS,
    MEU_FILES_PER_DIR,
    MODES_ATTR_COUNTS,
    MODES_FILES,
    MODES_FILE_SIZE,
    MODES_REPS,
    HIT_RATIOS,
    HIT_FILES,
    HIT_QUERIES,
    IO_BLOCK_SIZES,
    IO_TOTAL_BYTES,
    COLLAB_SESSIONS,
    COLLAB_FILES,
    COLLAB_FILE_SIZE,
)
from .corpus import BASE_SPECS, HIT_QUERIES as HIT_QUERY_TEXT, make_specs, generate_corpus, hitratio_corpus
from .report import BenchReport
from ..backend.storage import bk_get
from ..core.paths import normalize_path
from ..core.placement import place
from ..meu.export import meu_export
from ..queryql.executor import execute_query
from ..queryql.parser import parse_query
from ..sds import MODES, MODE_INLINE_SYNC, MODE_INLINE_ASYNC, MODE_LW_OFFLINE
from ..sds.extraction import extract_attributes
from ..sds.specs import spec_set
from ..workspace.cluster import LocalCluster
from ..workspace.local_writes import lw_write
from ..workspace.ops import ws_write, ws_read, ws_readdir, ws_flush, ws_index_offline, audit_routing

logger = logging.getLogger(__name__)


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


@contextlib.contextmanager
def _cluster(base_dir: Optional[str], n_dtns: int, **kwargs):
    with tempfile.TemporaryDirectory(prefix="scispace-bench-", dir=base_dir) as work:
        with LocalCluster.in_directory(work, n_dtns, **kwargs) as cluster:
            yield cluster


def run_bench_meu(
    file_counts: Sequence[int] = MEU_COUNTS,
    seed: int = DEFAULT_SEED,
    base_dir: Optional[str] = None,
    rerun: bool = True,
) -> BenchReport:
    """Export time of freshly local-written zero-size files, with a linear fit over counts."""
    report = BenchReport("meu")
    rng = np.random.default_rng(seed)
    counts, elapsed = [], []
    for count in file_counts:
        with _cluster(base_dir, 1, fsync=False) as cluster:
            session = cluster.session("bench")
            root, flags = cluster.roots[0], session.flags[0]
            n_dirs = max(1, -(-count // MEU_FILES_PER_DIR))
            for i in rng.permutation(count).tolist():
                lw_write(root, flags, "public/meu/d{:04d}/f{:07d}".format(i % n_dirs, i), b"")

            t0 = time.perf_counter()
            result = meu_export(root, "", session)
            export_ms = _ms(t0)
            params = {"files": count}
            report.add(params, "exported", result.exported)
            report.add(params, "elapsed_ms", export_ms)
            report.add(params, "dirs_visited", result.scan.dirs_visited)
            if rerun:
                t0 = time.perf_counter()
                again = meu_export(root, "", session)
                report.add(params, "rerun_exported", again.exported)
                report.add(params, "rerun_elapsed_ms", _ms(t0))
        counts.append(count)
        elapsed.append(export_ms)
        logger.info("MEU bench: %d files exported in %.1f ms", count, export_ms)

    if len(set(counts)) >= 2:
        fit = linregress(np.asarray(counts, dtype=np.float64), np.asarray(elapsed, dtype=np.float64))
        params = {"counts": ",".join(str(c) for c in counts)}
        report.add(params, "fit.r2", float(fit.rvalue ** 2))
        report.add(params, "fit.slope_ms_per_file", float(fit.slope))
        report.add(params, "fit.intercept_ms", float(fit.intercept))
    return report


def _ingest(cluster: LocalCluster, mode: str, corpus):
    session = cluster.session("bench", mode=mode)
    acks = []
    t_start = time.perf_counter()
    for path, data in corpus:
        t0 = time.perf_counter()
        ws_write(session, path, data)
        acks.append(_ms(t0))
    ingest_ms = _ms(t_start)
    if mode == MODE_INLINE_ASYNC:
        ws_flush(session)
    elif mode == MODE_LW_OFFLINE:
        ws_index_offline(session)
    return acks, ingest_ms, _ms(t_start)


def run_bench_modes(
    attr_counts: Sequence[int] = MODES_ATTR_COUNTS,
    seed: int = DEFAULT_SEED,
    n_files: int = MODES_FILES,
    file_size: int = MODES_FILE_SIZE,
    reps: int = MODES_REPS,
    n_dtns: int = 2,
    base_dir: Optional[str] = None,
) -> BenchReport:
    """Ingest-plus-index cost of the three extraction modes.

    Write-ack latency is per ws_write call; end-to-end runs until the last
    file is indexed (queue drained, or offline scan finished).
    """
    report = BenchReport("modes")
    for n_attrs in attr_counts:
        specs = make_specs(n_attrs)
        corpus = generate_corpus(seed, n_files, specs, file_size)

        t0 = time.perf_counter()
        for path, data in corpus:
            extract_attributes(path, data, specs)
        extraction_ms = _ms(t0)

        acks = {mode: [] for mode in MODES}
        ingest = {mode: [] for mode in MODES}
        e2e = {mode: [] for mode in MODES}
        triples = {}
        for rep in range(reps):
            for mode in MODES:
                with _cluster(base_dir, n_dtns, specs=specs, fsync=False) as cluster:
                    mode_acks, ingest_ms, e2e_ms = _ingest(cluster, mode, corpus)
                    if rep == 0:
                        triples[mode] = cluster.triple_set()
                acks[mode].extend(mode_acks)
                ingest[mode].append(ingest_ms)
                e2e[mode].append(e2e_ms)

        for mode in MODES:
            params = {"attrs": n_attrs, "mode": mode}
            report.add_stats(params, "write_ack_ms", acks[mode])
            report.add_stats(params, "ingest_ms", ingest[mode])
            report.add_stats(params, "end_to_end_ms", e2e[mode])
            report.add(params, "triples", len(triples[mode]))

        params = {"attrs": n_attrs}
        sync_e2e = float(np.median(e2e[MODE_INLINE_SYNC]))
        storage_ms = float(np.median(ingest[MODE_LW_OFFLINE]))
        report.add(params, "phase.storage_ms", storage_ms)
        report.add(params, "phase.extraction_ms", extraction_ms)
        report.add(params, "phase.store_index_ms", max(0.0, sync_e2e - storage_ms - extraction_ms))
        for mode in (MODE_INLINE_ASYNC, MODE_LW_OFFLINE):
            gain = 100.0 * (sync_e2e - float(np.median(e2e[mode]))) / sync_e2e if sync_e2e > 0 else 0.0
            report.add({"attrs": n_attrs, "mode": mode}, "improvement_pct", gain)
        same = triples[MODE_INLINE_SYNC] == triples[MODE_INLINE_ASYNC] == triples[MODE_LW_OFFLINE]
        report.add(params, "modes_equivalent", int(same))
        if not same:
            logger.warning("Extraction modes disagree at %d attributes", n_attrs)
    return report


def run_bench_hitratio(
    ratios: Sequence[float] = HIT_RATIOS,
    seed: int = DEFAULT_SEED,
    n_files: int = HIT_FILES,
    queries: int = HIT_QUERIES,
    n_dtns: int = 2,
    base_dir: Optional[str] = None,
) -> BenchReport:
    """Query latency against the share of an attribute's tuples that match."""
    report = BenchReport("hitratio")
    specs = spec_set(BASE_SPECS)
    preds = {attribute: parse_query(q) for attribute, q in HIT_QUERY_TEXT.items()}
    for ratio in ratios:
        corpus, n_hits = hitratio_corpus(seed, n_files, ratio)
        with _cluster(base_dir, n_dtns, specs=specs, fsync=False) as cluster:
            session = cluster.session("bench", mode=MODE_INLINE_SYNC)
            for path, data in corpus:
                ws_write(session, path, data)
            for attribute, pred in preds.items():
                latencies = []
                hits = []
                for _ in range(queries):
                    hits, elapsed_ms = execute_query(session, pred)
                    latencies.append(elapsed_ms)
                params = {"attribute": attribute, "ratio": ratio}
                report.add(params, "tuples", n_files)
                report.add(params, "expected", n_hits)
                report.add(params, "matches", len(hits))
                report.add_stats(params, "latency_ms", latencies)
    return report


def run_bench_io(
    block_sizes: Sequence[int] = IO_BLOCK_SIZES,
    seed: int = DEFAULT_SEED,
    total_bytes: int = IO_TOTAL_BYTES,
    n_dtns: int = 1,
    base_dir: Optional[str] = None,
) -> BenchReport:
    """Sequential write/read throughput, one file per block, workspace path against local writes."""
    report = BenchReport("io")
    rng = np.random.default_rng(seed)
    for block in block_sizes:
        n_blocks = max(1, total_bytes // block)
        data = rng.integers(0, 256, size=block, dtype=np.uint8).tobytes()
        moved_mb = n_blocks * block / 1e6
        with _cluster(base_dir, n_dtns, fsync=False) as cluster:
            session = cluster.session("bench", mode=MODE_LW_OFFLINE)
            ws_paths = ["/public/io/ws{:d}/b{:06d}.dat".format(block, i) for i in range(n_blocks)]
            t0 = time.perf_counter()
            for path in ws_paths:
                ws_write(session, path, data)
            ws_write_s = max(time.perf_counter() - t0, 1e-9)
            t0 = time.perf_counter()
            for path in ws_paths:
                ws_read(session, path)
            ws_read_s = max(time.perf_counter() - t0, 1e-9)

            lw_paths = [normalize_path("/public/io/lw{:d}/b{:06d}.dat".format(block, i)) for i in range(n_blocks)]
            targets = [place(p, n_dtns) for p in lw_paths]
            t0 = time.perf_counter()
            for path, dtn in zip(lw_paths, targets):
                lw_write(session.root(dtn), session.flags[dtn], path.backend_rel, data)
            lw_write_s = max(time.perf_counter() - t0, 1e-9)
            t0 = time.perf_counter()
            for path, dtn in zip(lw_paths, targets):
                bk_get(session.root(dtn), path.backend_rel)
            lw_read_s = max(time.perf_counter() - t0, 1e-9)

        for path_kind, write_s, read_s in (("workspace", ws_write_s, ws_read_s), ("local", lw_write_s, lw_read_s)):
            params = {"block": block, "path": path_kind}
            report.add(params, "write_mb_s", moved_mb / write_s)
            report.add(params, "read_mb_s", moved_mb / read_s)
    return report


def run_bench_collab(
    session_counts: Sequence[int] = COLLAB_SESSIONS,
    seed: int = DEFAULT_SEED,
    files_per_session: int = COLLAB_FILES,
    file_size: int = COLLAB_FILE_SIZE,
    n_dtns: int = 2,
    base_dir: Optional[str] = None,
) -> BenchReport:
    """M collaborators writing concurrently; every session must then see every file."""
    report = BenchReport("collab")
    rng = np.random.default_rng(seed)
    for n_sessions in session_counts:
        names = ["c{:02d}".format(k) for k in range(n_sessions)]
        payload = rng.integers(0, 256, size=file_size, dtype=np.uint8).tobytes()
        expected = ["f{:05d}.dat".format(i) for i in range(files_per_session)]
        with _cluster(base_dir, n_dtns, fsync=False) as cluster:
            sessions = [cluster.session(name, mode=MODE_LW_OFFLINE) for name in names]

            def work(session):
                for file_name in expected:
                    ws_write(session, "/public/collab/{}/{}".format(session.collaborator, file_name), payload)

            t0 = time.perf_counter()
            with ThreadPoolExecutor(max_workers=n_sessions) as pool:
                list(pool.map(work, sessions))
            elapsed_s = max(time.perf_counter() - t0, 1e-9)

            violations = 0
            for session in sessions:
                if ws_readdir(session, "/public/collab") != names:
                    violations += 1
                for name in names:
                    if ws_readdir(session, "/public/collab/" + name) != expected:
                        violations += 1
            violations += len(audit_routing(sessions[0]))

        params = {"sessions": n_sessions}
        report.add(params, "files", n_sessions * files_per_session)
        report.add(params, "throughput_files_s", n_sessions * files_per_session / elapsed_s)
        report.add(params, "violations", violations)
    return report


RUNNERS = {
    "meu": run_bench_meu,
    "modes": run_bench_modes,
    "hitratio": run_bench_hitratio,
    "io": run_bench_io,
    "collab": run_bench_collab,
}


def run_experiment(name: str, **kwargs) -> BenchReport:
    if name not in RUNNERS:
        raise ValueError("Unknown experiment {!r}, expected one of {}".format(name, sorted(RUNNERS)))
    return RUNNERS[name](**kwargs)
