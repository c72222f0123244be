"""Brute-force query answers straight from the backends, for tests and benches."""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional
from .predicate import Predicate, predicate_holds
from ..backend import MODE_MARKER
from ..backend.flags import SyncFlagStore
from ..backend.storage import bk_scan_entries, bk_get
from ..core import DEFAULT_NAMESPACE
from ..core.paths import from_backend_rel
from ..core.records import NamespaceTemplate, PUBLIC_NAMESPACE
from ..sdf.values import AttributeValue
from ..sds.extraction import extract_attributes


@dataclass
class OracleCatalog:
    """What the backends alone cannot tell: namespaces, file owners and manual tags."""

    namespaces: Dict[str, NamespaceTemplate] = field(default_factory=lambda: {DEFAULT_NAMESPACE: PUBLIC_NAMESPACE})
    owners: Dict[str, str] = field(default_factory=dict)
    manual: Dict[str, Dict[str, AttributeValue]] = field(default_factory=dict)

    def register(self, template: NamespaceTemplate):
        self.namespaces[template.name] = template

    def wrote(self, display: str, owner: str):
        self.owners[display] = owner

    def tagged(self, display: str, name: str, value: AttributeValue):
        self.manual.setdefault(display, {})[name] = value


@dataclass
class _OracleFile:
    display: str
    template: NamespaceTemplate
    owner: Optional[str]
    values: Dict[str, AttributeValue]


class OracleSnapshot:
    """One walk of every backend, evaluated in memory for as many queries as needed."""

    def __init__(
        self,
        backend_roots: Iterable[str],
        specs,
        catalog: Optional[OracleCatalog] = None,
        flag_mode: str = MODE_MARKER,
    ):
        catalog = catalog or OracleCatalog()
        self.files: List[_OracleFile] = []
        for root in backend_roots:
            flags = SyncFlagStore(root, flag_mode)
            for entry in bk_scan_entries(root):
                if entry.is_directory or "/" not in entry.rel_path:
                    continue
                path = from_backend_rel(entry.rel_path)
                template = catalog.namespaces.get(path.namespace)
                if template is None or not flags.get(entry.rel_path, is_directory=False):
                    continue
                # non-SDF files still carry the fs.* pseudo-attributes
                data = bk_get(root, entry.rel_path)
                values = {t.attribute: t.value for t in extract_attributes(path.display, data, specs, entry)}
                values.update(catalog.manual.get(path.display, {}))
                self.files.append(_OracleFile(path.display, template, catalog.owners.get(path.display), values))

    def query(self, pred: Predicate, requester: str) -> List[str]:
        hits = set()
        for f in self.files:
            if not f.template.is_global and f.owner != requester:
                continue
            if predicate_holds(f.values, pred):
                hits.add(f.display)
        return sorted(hits)


def oracle_scan(
    backend_roots: Iterable[str],
    specs,
    pred: Predicate,
    requester: str,
    catalog: Optional[OracleCatalog] = None,
    flag_mode: str = MODE_MARKER,
) -> List[str]:
    return OracleSnapshot(backend_roots, specs, catalog, flag_mode).query(pred, requester)
