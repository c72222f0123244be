from dataclasses import dataclass
from typing import Tuple
from ..utils.errors import MalformedPath


def check_segment(segment: str) -> bool:
    return segment not in ("", ".", "..") and "/" not in segment and "\x00" not in segment


@dataclass(frozen=True, order=True)
class WorkspacePath:
    namespace: str
    rel: Tuple[str, ...] = ()

    def __post_init__(self):
        for segment in (self.namespace,) + tuple(self.rel):
            if not check_segment(segment):
                raise MalformedPath(segment, "invalid segment")
        object.__setattr__(self, "rel", tuple(self.rel))

    @property
    def display(self) -> str:
        return "/" + "/".join((self.namespace,) + self.rel)

    @property
    def backend_rel(self) -> str:
        # <namespace>/<rel...> under a backend root
        return "/".join((self.namespace,) + self.rel)

    @property
    def name(self) -> str:
        return self.rel[-1] if self.rel else self.namespace

    @property
    def parent(self):
        if not self.rel:
            return None
        return WorkspacePath(self.namespace, self.rel[:-1])

    def child(self, name: str):
        return WorkspacePath(self.namespace, self.rel + (name,))

    def is_within(self, other) -> bool:
        """True when self equals other or lies below it."""
        if self.namespace != other.namespace or len(self.rel) < len(other.rel):
            return False
        return self.rel[: len(other.rel)] == other.rel

    def __str__(self):
        return self.display


def normalize_path(raw: str) -> WorkspacePath:
    if not isinstance(raw, str) or raw == "":
        raise MalformedPath(raw, "empty input")
    if "\x00" in raw:
        raise MalformedPath(raw, "NUL byte")

    segments = [seg for seg in raw.split("/") if seg != ""]
    for seg in segments:
        if seg in (".", ".."):
            raise MalformedPath(raw, "traversal segment {!r}".format(seg))
    if not segments:
        raise MalformedPath(raw, "missing namespace segment")
    return WorkspacePath(segments[0], tuple(segments[1:]))


def from_backend_rel(rel_path: str) -> WorkspacePath:
    return normalize_path("/" + rel_path)
