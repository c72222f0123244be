import numpy as np
from numba import njit
from typing import Iterable
from . import FNV_OFFSET_BASIS, FNV_PRIME
from .paths import WorkspacePath
from ..utils.errors import ZeroDtnCount

_OFFSET = np.uint64(FNV_OFFSET_BASIS)
_PRIME = np.uint64(FNV_PRIME)


@njit(error_model="numpy")
def _fnv1a64_kernel(data):
    h = _OFFSET
    for i in range(data.shape[0]):
        h = (h ^ np.uint64(data[i])) * _PRIME
    return h


def fnv1a64(data: bytes) -> int:
    return int(_fnv1a64_kernel(np.frombuffer(bytes(data), dtype=np.uint8)))


def place(path: WorkspacePath, dtn_count: int) -> int:
    if dtn_count < 1:
        raise ZeroDtnCount()
    return fnv1a64(path.display.encode("utf-8")) % dtn_count


def place_many(paths: Iterable[WorkspacePath], dtn_count: int):
    if dtn_count < 1:
        raise ZeroDtnCount()
    hashes = np.fromiter(
        (fnv1a64(p.display.encode("utf-8")) for p in paths), dtype=np.uint64
    )
    return (hashes % np.uint64(dtn_count)).astype(np.int64)


def bucket_shares(paths, dtn_count: int):
    """Fraction of paths landing on each DTN index."""
    indices = place_many(paths, dtn_count)
    if indices.size == 0:
        return np.zeros(dtn_count)
    return np.bincount(indices, minlength=dtn_count) / indices.size
