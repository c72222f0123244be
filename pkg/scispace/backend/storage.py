import logging
import os
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple
from . import INTERNAL_DIR
from ..core import KIND_FILE, KIND_DIRECTORY
from ..utils.errors import EscapesRoot, NotFound, IoFailure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BackendEntry:
    rel_path: str
    kind: str
    size: int
    mtime: int

    @property
    def is_directory(self) -> bool:
        return self.kind == KIND_DIRECTORY


def clean_rel(rel_path: str) -> str:
    """Canonical relative form: no leading/trailing or repeated slashes, no traversal."""
    if "\x00" in rel_path:
        raise EscapesRoot(rel_path)
    parts = [p for p in rel_path.replace(os.sep, "/").split("/") if p not in ("", ".")]
    if any(p == ".." for p in parts):
        raise EscapesRoot(rel_path)
    return "/".join(parts)


def resolve(root: str, rel_path: str) -> str:
    rel = clean_rel(rel_path)
    full = os.path.join(root, *rel.split("/")) if rel else root
    real_root = os.path.realpath(root)
    real_full = os.path.realpath(full)
    if real_full != real_root and not real_full.startswith(real_root + os.sep):
        raise EscapesRoot(rel_path)
    return full


def ms_mtime(st) -> int:
    return st.st_mtime_ns // 1_000_000


def _entry(rel: str, st, kind: str) -> BackendEntry:
    return BackendEntry(rel, kind, 0 if kind == KIND_DIRECTORY else st.st_size, ms_mtime(st))


def missing_dirs(root: str, rel_dir: str) -> List[str]:
    """Directories along rel_dir that do not exist yet, shallowest first."""
    rel = clean_rel(rel_dir)
    if not rel:
        return []
    parts = rel.split("/")
    missing = []
    for depth in range(1, len(parts) + 1):
        sub = "/".join(parts[:depth])
        if missing or not os.path.isdir(resolve(root, sub)):
            missing.append(sub)
    return missing


def bk_put(root: str, rel_path: str, data: bytes) -> BackendEntry:
    rel = clean_rel(rel_path)
    if not rel:
        raise EscapesRoot(rel_path)
    full = resolve(root, rel)
    try:
        os.makedirs(os.path.dirname(full), exist_ok=True)
        with open(full, "wb") as f:
            f.write(data)
        st = os.stat(full)
    except OSError as e:
        raise IoFailure("Writing {} failed: {}".format(rel, e)) from e
    return _entry(rel, st, KIND_FILE)


def bk_mkdir(root: str, rel_path: str) -> BackendEntry:
    rel = clean_rel(rel_path)
    full = resolve(root, rel)
    try:
        os.makedirs(full, exist_ok=True)
        st = os.stat(full)
    except OSError as e:
        raise IoFailure("Creating directory {} failed: {}".format(rel, e)) from e
    return _entry(rel, st, KIND_DIRECTORY)


def bk_get(root: str, rel_path: str) -> bytes:
    full = resolve(root, rel_path)
    try:
        with open(full, "rb") as f:
            return f.read()
    except (FileNotFoundError, IsADirectoryError, NotADirectoryError):
        raise NotFound("No file {!r} under {}".format(rel_path, root))
    except OSError as e:
        raise IoFailure("Reading {} failed: {}".format(rel_path, e)) from e


def bk_stat(root: str, rel_path: str) -> BackendEntry:
    rel = clean_rel(rel_path)
    full = resolve(root, rel)
    try:
        st = os.stat(full)
    except FileNotFoundError:
        raise NotFound("No entry {!r} under {}".format(rel_path, root))
    except OSError as e:
        raise IoFailure("Stat of {} failed: {}".format(rel_path, e)) from e
    return _entry(rel, st, KIND_DIRECTORY if os.path.isdir(full) else KIND_FILE)


def bk_exists(root: str, rel_path: str) -> bool:
    return os.path.lexists(resolve(root, rel_path))


def _sorted_children(full: str):
    with os.scandir(full) as it:
        children = list(it)
    children.sort(key=lambda e: os.fsencode(e.name))
    return children


def bk_list_children(root: str, rel_dir: str) -> List[Tuple[str, bool]]:
    """(name, is_directory) for the direct children of a directory, internals excluded."""
    rel = clean_rel(rel_dir)
    out = []
    for child in _sorted_children(resolve(root, rel)):
        if not rel and child.name == INTERNAL_DIR:
            continue
        if child.is_symlink():
            continue
        out.append((child.name, child.is_dir(follow_symlinks=False)))
    return out


def bk_scan_entries(
    root: str, start_rel: str = "", prune: Optional[Callable[[BackendEntry], bool]] = None
) -> Iterator[BackendEntry]:
    """Depth-first walk, directories before their contents, siblings in byte order.

    A directory for which prune returns True is yielded but not descended into.
    """
    start = clean_rel(start_rel)
    start_full = resolve(root, start)
    if not os.path.isdir(start_full):
        if os.path.isfile(start_full):
            yield _entry(start, os.stat(start_full), KIND_FILE)
            return
        raise NotFound("No directory {!r} under {}".format(start_rel, root))

    yield from _walk(root, start, prune)


def _walk(root, rel_dir, prune):
    try:
        children = _sorted_children(resolve(root, rel_dir))
    except FileNotFoundError:
        logger.warning("Directory %s vanished during scan of %s", rel_dir, root)
        return
    for child in children:
        if not rel_dir and child.name == INTERNAL_DIR:
            continue
        child_rel = child.name if not rel_dir else rel_dir + "/" + child.name
        if child.is_symlink():
            logger.warning("Skipping symbolic link %s under %s", child_rel, root)
            continue
        try:
            st = child.stat(follow_symlinks=False)
        except FileNotFoundError:
            continue
        if child.is_dir(follow_symlinks=False):
            entry = _entry(child_rel, st, KIND_DIRECTORY)
            yield entry
            if prune is None or not prune(entry):
                yield from _walk(root, child_rel, prune)
        else:
            yield _entry(child_rel, st, KIND_FILE)
