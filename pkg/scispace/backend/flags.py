import errno
import logging
import os
import shutil
from typing import Iterable
from . import SYNC_DIR, FILE_MARK_SUFFIX, DIR_MARK_SUFFIX, XATTR_NAME, MODE_XATTR, MODE_MARKER
from .storage import resolve, clean_rel
from ..utils.errors import NotFound, IoFailure

logger = logging.getLogger(__name__)


def native_xattr_supported(root: str) -> bool:
    if not hasattr(os, "setxattr"):
        return False
    scratch = os.path.join(root, ".scispace-xattr-scratch")
    try:
        with open(scratch, "wb"):
            pass
        os.setxattr(scratch, XATTR_NAME, b"1")
        return os.getxattr(scratch, XATTR_NAME) == b"1"
    except OSError:
        return False
    finally:
        if os.path.exists(scratch):
            os.remove(scratch)


def parent_rel(rel: str) -> str:
    return rel.rpartition("/")[0]


class SyncFlagStore:
    """Per-entry `sync` flag, either as an extended attribute or as marker files.

    Marker-tree layout: under `<root>/.scispace/sync/`, a file flag is the
    zero-byte file `<rel_path>.mark`, a directory flag is `<rel_path>.dmark`.
    The backend root itself uses `.scispace/sync/.dmark`.
    """

    def __init__(self, root: str, mode: str = MODE_MARKER):
        if mode not in (MODE_XATTR, MODE_MARKER):
            raise ValueError("Unknown flag store mode {!r}".format(mode))
        self.root = root
        self.mode = mode

    @classmethod
    def auto(cls, root: str):
        return cls(root, MODE_XATTR if native_xattr_supported(root) else MODE_MARKER)

    def marker_path(self, rel_path: str, is_directory: bool) -> str:
        rel = clean_rel(rel_path)
        suffix = DIR_MARK_SUFFIX if is_directory else FILE_MARK_SUFFIX
        base = os.path.join(self.root, *SYNC_DIR.split("/"))
        if not rel:
            return os.path.join(base, suffix)
        return os.path.join(base, *rel.split("/")) + suffix

    def get(self, rel_path: str, is_directory: bool = None) -> bool:
        full = resolve(self.root, rel_path)
        if self.mode == MODE_XATTR:
            try:
                return os.getxattr(full, XATTR_NAME) == b"1"
            except OSError as e:
                if e.errno in (errno.ENODATA, errno.ENOENT, getattr(errno, "ENOATTR", errno.ENODATA)):
                    return False
                raise IoFailure("Reading flag of {} failed: {}".format(rel_path, e)) from e
        if is_directory is None:
            is_directory = os.path.isdir(full)
        return os.path.exists(self.marker_path(rel_path, is_directory))

    def set(self, rel_path: str, value: bool, is_directory: bool = None):
        full = resolve(self.root, rel_path)
        if not os.path.lexists(full):
            raise NotFound("Cannot flag missing entry {!r}".format(rel_path))
        if is_directory is None:
            is_directory = os.path.isdir(full)
        try:
            if self.mode == MODE_XATTR:
                if value:
                    os.setxattr(full, XATTR_NAME, b"1")
                else:
                    try:
                        os.removexattr(full, XATTR_NAME)
                    except OSError as e:
                        if e.errno not in (errno.ENODATA, getattr(errno, "ENOATTR", errno.ENODATA)):
                            raise
                return
            marker = self.marker_path(rel_path, is_directory)
            if value:
                os.makedirs(os.path.dirname(marker), exist_ok=True)
                with open(marker, "wb"):
                    pass
            elif os.path.exists(marker):
                os.remove(marker)
        except OSError as e:
            raise IoFailure("Setting flag of {} failed: {}".format(rel_path, e)) from e

    def drop(self, rel_path: str):
        """Forget any flag stored for a path that may no longer exist."""
        if self.mode == MODE_MARKER:
            for is_directory in (False, True):
                marker = self.marker_path(rel_path, is_directory)
                if os.path.exists(marker):
                    os.remove(marker)
        elif os.path.lexists(resolve(self.root, rel_path)):
            self.set(rel_path, False)

    def invalidate(self, rel_path: str, created: Iterable[str] = ()):
        """Mark an entry unsynced and clear ancestor flags.

        The walk stops at the first pre-existing ancestor that is already
        unsynced; directories listed in `created` are always passed through.
        """
        rel = clean_rel(rel_path)
        created = set(clean_rel(c) for c in created)
        self.set(rel, False)
        current = rel
        while current:
            current = parent_rel(current)
            if current in created:
                continue
            if not self.get(current, is_directory=True):
                return
            self.set(current, False, is_directory=True)


def clear_tree(store: SyncFlagStore, rel_path: str):
    """Forget the flags of an entry and everything below it."""
    rel = clean_rel(rel_path)
    full = resolve(store.root, rel)
    if store.mode == MODE_MARKER:
        store.drop(rel)
        marker_dir = os.path.join(store.root, *SYNC_DIR.split("/"), *rel.split("/")) if rel else None
        if marker_dir and os.path.isdir(marker_dir):
            shutil.rmtree(marker_dir)
        return
    if not os.path.lexists(full):
        return
    store.set(rel, False)
    if os.path.isdir(full):
        for dirpath, dirnames, filenames in os.walk(full):
            for name in dirnames + filenames:
                child = os.path.relpath(os.path.join(dirpath, name), store.root).replace(os.sep, "/")
                store.set(child, False)
