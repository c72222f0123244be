"""Append-only log plus snapshot, one pair of files per shard store.

Log layout: a sequence of entries, each `len u32 BE` followed by a payload in
the protocol field codec. A torn final entry (crash mid-append) is dropped on
replay. A snapshot is written to a temporary file and renamed over the old
one, after which the log restarts empty.
"""
import logging
import os
import struct
import threading
from typing import List, Optional, Tuple
from . import LOG_SUFFIX, SNAPSHOT_SUFFIX
from ..utils.errors import IoFailure

logger = logging.getLogger(__name__)

_LEN = struct.Struct(">I")


class ShardLog:
    def __init__(self, directory: str, name: str, fsync: bool = True):
        self.directory = directory
        self.name = name
        self.fsync = fsync
        self.n_entries = 0
        self._lock = threading.Lock()
        self._fh = None
        os.makedirs(directory, exist_ok=True)

    @property
    def log_path(self) -> str:
        return os.path.join(self.directory, self.name + LOG_SUFFIX)

    @property
    def snapshot_path(self) -> str:
        return os.path.join(self.directory, self.name + SNAPSHOT_SUFFIX)

    def replay(self) -> Tuple[Optional[bytes], List[bytes]]:
        snapshot = None
        if os.path.exists(self.snapshot_path):
            with open(self.snapshot_path, "rb") as f:
                snapshot = f.read()

        entries = []
        good_end = 0
        if os.path.exists(self.log_path):
            with open(self.log_path, "rb") as f:
                data = f.read()
            offset = 0
            while offset + _LEN.size <= len(data):
                (length,) = _LEN.unpack_from(data, offset)
                if offset + _LEN.size + length > len(data):
                    break
                entries.append(data[offset + _LEN.size : offset + _LEN.size + length])
                offset += _LEN.size + length
            good_end = offset
            if good_end != len(data):
                logger.warning(
                    "Dropping torn tail of %d bytes from %s", len(data) - good_end, self.log_path
                )
                with open(self.log_path, "r+b") as f:
                    f.truncate(good_end)
        self.n_entries = len(entries)
        return snapshot, entries

    def _handle(self):
        if self._fh is None:
            self._fh = open(self.log_path, "ab")
        return self._fh

    def append(self, payload: bytes):
        with self._lock:
            try:
                fh = self._handle()
                fh.write(_LEN.pack(len(payload)) + payload)
                fh.flush()
                if self.fsync:
                    os.fsync(fh.fileno())
            except OSError as e:
                raise IoFailure("Appending to {} failed: {}".format(self.log_path, e)) from e
            self.n_entries += 1

    def write_snapshot(self, payload: bytes):
        tmp = self.snapshot_path + ".tmp"
        with self._lock:
            try:
                with open(tmp, "wb") as f:
                    f.write(payload)
                    f.flush()
                    if self.fsync:
                        os.fsync(f.fileno())
                os.replace(tmp, self.snapshot_path)
                if self._fh is not None:
                    self._fh.close()
                    self._fh = None
                with open(self.log_path, "wb"):
                    pass
            except OSError as e:
                raise IoFailure("Writing snapshot {} failed: {}".format(self.snapshot_path, e)) from e
            self.n_entries = 0

    def close(self):
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None
