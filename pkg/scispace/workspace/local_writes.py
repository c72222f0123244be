"""Writes that bypass the workspace and go straight into a backend.

Each mutation clears the entry's own sync flag and its ancestors' flags
(stopping at the first pre-existing ancestor that is already unsynced), so the
next export scan reaches it. Renamed entries lose their flags.
"""
import os
from ..backend.flags import SyncFlagStore, parent_rel, clear_tree
from ..backend.storage import BackendEntry, bk_put, bk_mkdir, bk_stat, clean_rel, missing_dirs, resolve
from ..utils.errors import NotFound, IoFailure


def lw_write(root: str, flags: SyncFlagStore, rel_path: str, data: bytes) -> BackendEntry:
    rel = clean_rel(rel_path)
    created = missing_dirs(root, parent_rel(rel))
    entry = bk_put(root, rel, data)
    flags.invalidate(rel, created)
    return entry


def lw_mkdir(root: str, flags: SyncFlagStore, rel_dir: str) -> BackendEntry:
    rel = clean_rel(rel_dir)
    created = missing_dirs(root, parent_rel(rel))
    entry = bk_mkdir(root, rel)
    flags.invalidate(rel, created)
    return entry


def lw_rename(root: str, flags: SyncFlagStore, src: str, dst: str) -> BackendEntry:
    src_rel, dst_rel = clean_rel(src), clean_rel(dst)
    if not os.path.lexists(resolve(root, src_rel)):
        raise NotFound("Cannot rename missing entry {!r}".format(src))
    clear_tree(flags, src_rel)
    created = missing_dirs(root, parent_rel(dst_rel))
    try:
        os.makedirs(os.path.dirname(resolve(root, dst_rel)), exist_ok=True)
        os.replace(resolve(root, src_rel), resolve(root, dst_rel))
    except OSError as e:
        raise IoFailure("Renaming {} to {} failed: {}".format(src, dst, e)) from e
    flags.invalidate(dst_rel, created)
    flags.invalidate(parent_rel(src_rel))
    return bk_stat(root, dst_rel)


def lw_unlink(root: str, flags: SyncFlagStore, rel_path: str):
    """Local removal by the owner; the shard record goes stale until a scrub."""
    rel = clean_rel(rel_path)
    full = resolve(root, rel)
    if not os.path.isfile(full):
        raise NotFound("Cannot unlink missing file {!r}".format(rel_path))
    flags.drop(rel)
    try:
        os.remove(full)
    except OSError as e:
        raise IoFailure("Unlinking {} failed: {}".format(rel, e)) from e
    flags.invalidate(parent_rel(rel))
