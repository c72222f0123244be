from dataclasses import dataclass, replace
from typing import List, Sequence
from . import DEFAULT_NAMESPACE, SYSTEM_OWNER, SCOPE_LOCAL, SCOPE_GLOBAL, KIND_FILE, KIND_DIRECTORY
from .paths import WorkspacePath, check_segment
from .placement import place
from ..utils.errors import BadName, WrongShard


@dataclass(frozen=True)
class DtnDescriptor:
    index: int
    id: str
    host: str
    port: int
    backend_root: str

    @property
    def endpoint(self):
        return self.host, self.port


def index_dtns(entries: Sequence[dict]) -> List[DtnDescriptor]:
    """Build dense, id-ordered descriptors from unordered config entries."""
    ordered = sorted(entries, key=lambda e: e["id"])
    ids = [e["id"] for e in ordered]
    if len(set(ids)) != len(ids):
        raise ValueError("DTN ids should be unique, got {}".format(ids))
    return [
        DtnDescriptor(idx, e["id"], e.get("host", "127.0.0.1"), int(e.get("port", 0)), e["backend_root"])
        for idx, e in enumerate(ordered)
    ]


@dataclass(frozen=True)
class NamespaceTemplate:
    name: str
    owner: str
    scope: str = SCOPE_GLOBAL

    def __post_init__(self):
        if not check_segment(self.name):
            raise BadName("Namespace name {!r} is not a valid path segment".format(self.name))
        if self.scope not in (SCOPE_LOCAL, SCOPE_GLOBAL):
            raise BadName("Namespace scope should be local or global, got {!r}".format(self.scope))

    @property
    def is_global(self) -> bool:
        return self.scope == SCOPE_GLOBAL


PUBLIC_NAMESPACE = NamespaceTemplate(DEFAULT_NAMESPACE, SYSTEM_OWNER, SCOPE_GLOBAL)


@dataclass(frozen=True)
class FileRecord:
    path: WorkspacePath
    size: int
    owner: str
    mtime: int
    dtn_index: int
    synced: bool = True
    kind: str = KIND_FILE

    @property
    def namespace(self) -> str:
        return self.path.namespace

    @property
    def is_directory(self) -> bool:
        return self.kind == KIND_DIRECTORY

    def with_sync(self, synced: bool):
        return replace(self, synced=synced)

    def check_placement(self, dtn_count: int):
        expected = place(self.path, dtn_count)
        if self.dtn_index != expected:
            raise WrongShard(
                "Record {} carries DTN {:d} but places to DTN {:d}".format(
                    self.path.display, self.dtn_index, expected
                )
            )


def visible_to(record: FileRecord, template: NamespaceTemplate, requester: str) -> bool:
    return record.synced and (template.is_global or record.owner == requester)
