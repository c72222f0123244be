import logging
import threading
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Set
from . import SOURCE_EXTRACTED, SOURCE_MANUAL
from ..metashard import DISCOVERY_LOG, SNAPSHOT_EVERY
from ..metashard.persistence import ShardLog
from ..protocol.fields import FieldReader, encode_fields, pack_u8, pack_text
from ..protocol.messages import pack_triple, unpack_triple_fields
from ..queryql.predicate import Clause, Predicate, matches
from ..sdf.values import AttributeValue
from ..utils.errors import ProtocolError

logger = logging.getLogger(__name__)

OP_REPLACE = 1
OP_TAG = 2
OP_DROP = 3

E_OP = 1
E_GROUP = 2
E_TRIPLE = 3
E_FILE = 4

G_FILE = 1
G_TRIPLE = 2


@dataclass(frozen=True)
class AttributeTriple:
    attribute: str
    file: str
    value: AttributeValue
    source: str = SOURCE_EXTRACTED

    @property
    def key(self):
        return self.attribute, self.file, self.value


def _unpack_triple(raw: bytes) -> AttributeTriple:
    return AttributeTriple(*unpack_triple_fields(raw))


class DiscoveryShard:
    """Attribute triples of one DTN, indexed by attribute and by file."""

    def __init__(self, directory: Optional[str] = None, fsync: bool = True, snapshot_every: int = SNAPSHOT_EVERY):
        self.snapshot_every = snapshot_every
        self._by_attribute: Dict[str, Dict[str, AttributeTriple]] = {}
        self._by_file: Dict[str, Set[str]] = {}
        self._lock = threading.RLock()
        # index_offline and the drain worker never run together
        self.maintenance = threading.Lock()
        self.log = ShardLog(directory, DISCOVERY_LOG, fsync) if directory else None
        if self.log is not None:
            self._recover()

    # ---------------- persistence ----------------

    def _recover(self):
        snapshot, entries = self.log.replay()
        if snapshot is not None:
            for raw in FieldReader.parse(snapshot).all(E_TRIPLE):
                self._put(_unpack_triple(raw))
        for entry in entries:
            self._apply(FieldReader.parse(entry))

    def _apply(self, r: FieldReader):
        op = r.uint(E_OP)
        if op == OP_REPLACE:
            for raw_group in r.all(E_GROUP):
                g = FieldReader.parse(raw_group)
                self._replace_extracted(g.text(G_FILE), [_unpack_triple(t) for t in g.all(G_TRIPLE)])
        elif op == OP_TAG:
            self._put(_unpack_triple(r.require(E_TRIPLE)))
        elif op == OP_DROP:
            self._drop_file(r.text(E_FILE))
        else:
            raise ProtocolError("Unknown discovery log operation {!r}".format(op))

    def _commit(self, fields):
        payload = encode_fields(fields)
        if self.log is not None:
            self.log.append(payload)
        self._apply(FieldReader.parse(payload))
        if self.log is not None and self.log.n_entries >= self.snapshot_every:
            self.snapshot()

    def snapshot(self):
        with self._lock:
            if self.log is None:
                return
            fields = [(E_TRIPLE, pack_triple(t)) for t in sorted(self.triples(), key=_triple_order)]
            self.log.write_snapshot(encode_fields(fields))

    def close(self):
        if self.log is not None:
            self.log.close()

    # ---------------- in-memory index ----------------

    def _put(self, triple: AttributeTriple):
        self._by_attribute.setdefault(triple.attribute, {})[triple.file] = triple
        self._by_file.setdefault(triple.file, set()).add(triple.attribute)

    def _remove(self, attribute: str, file: str):
        per_file = self._by_attribute.get(attribute)
        if per_file is not None:
            per_file.pop(file, None)
            if not per_file:
                del self._by_attribute[attribute]
        attributes = self._by_file.get(file)
        if attributes is not None:
            attributes.discard(attribute)
            if not attributes:
                del self._by_file[file]

    def _get(self, attribute: str, file: str) -> Optional[AttributeTriple]:
        return self._by_attribute.get(attribute, {}).get(file)

    def _replace_extracted(self, file: str, triples: List[AttributeTriple]):
        for attribute in list(self._by_file.get(file, ())):
            if self._get(attribute, file).source == SOURCE_EXTRACTED:
                self._remove(attribute, file)
        for triple in triples:
            current = self._get(triple.attribute, file)
            if current is not None and current.source == SOURCE_MANUAL:
                continue
            self._put(triple)

    def _drop_file(self, file: str):
        for attribute in list(self._by_file.get(file, ())):
            self._remove(attribute, file)

    # ---------------- operations ----------------

    def replace_extracted(self, groups: Mapping[str, Iterable[AttributeTriple]]):
        """Atomically swap the extracted triples of several files."""
        if not groups:
            return
        fields = [(E_OP, pack_u8(OP_REPLACE))]
        for file, triples in sorted(groups.items()):
            group = [(G_FILE, pack_text(file))]
            group += [(G_TRIPLE, pack_triple(t)) for t in triples if t.source == SOURCE_EXTRACTED]
            fields.append((E_GROUP, encode_fields(group)))
        with self._lock:
            self._commit(fields)

    def tag(self, triple: AttributeTriple):
        with self._lock:
            self._commit([(E_OP, pack_u8(OP_TAG)), (E_TRIPLE, pack_triple(triple))])

    def drop_file(self, file: str):
        with self._lock:
            if file in self._by_file:
                self._commit([(E_OP, pack_u8(OP_DROP)), (E_FILE, pack_text(file))])

    def files_matching(self, clause: Clause) -> Set[str]:
        with self._lock:
            candidates = list(self._by_attribute.get(clause.attribute, {}).values())
        return {t.file for t in candidates if matches(t.value, clause.op, clause.literal)}

    def evaluate(self, pred: Predicate) -> Set[str]:
        result = None
        for clause in pred.clauses:
            hits = self.files_matching(clause)
            result = hits if result is None else result & hits
            if not result:
                return set()
        return result

    def triples(self) -> List[AttributeTriple]:
        with self._lock:
            return [t for per_file in self._by_attribute.values() for t in per_file.values()]

    def triple_set(self) -> Set[tuple]:
        return {t.key for t in self.triples()}

    def triples_of(self, file: str) -> List[AttributeTriple]:
        with self._lock:
            return [self._get(a, file) for a in sorted(self._by_file.get(file, ()))]

    def count(self) -> int:
        with self._lock:
            return sum(len(per_file) for per_file in self._by_attribute.values())


def _triple_order(t: AttributeTriple):
    return t.attribute, t.file
