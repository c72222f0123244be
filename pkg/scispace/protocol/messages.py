"""Field layouts of the shard messages. The tag tables are listed in PROTOCOL.md."""
from typing import List
from .fields import (
    FieldReader,
    encode_fields,
    pack_text,
    pack_u8,
    pack_u16,
    pack_u32,
    pack_u64,
    pack_i64,
)
from ..core import SCOPE_LOCAL, SCOPE_GLOBAL, KIND_FILE, KIND_DIRECTORY
from ..core.paths import normalize_path
from ..core.records import FileRecord, NamespaceTemplate
from ..sdf.values import AttributeValue, encode_value, decode_value
from ..utils.errors import ProtocolError

# request fields shared by every message
F_REQUESTER = 1

# ERROR
F_ERR_CODE = 1
F_ERR_MESSAGE = 2
F_ERR_NAME = 3

# RESULT
F_RES_RECORD = 2
F_RES_SCOPE = 3
F_RES_COUNT = 4
F_RES_PATH = 5
F_RES_TRIPLES_WRITTEN = 7

# PUT_FILE / BATCH_EXPORT
F_RECORD = 2

# GET_FILE / ENQUEUE_INDEX / TAG
F_PATH = 2

# LIST_VISIBLE
F_PREFIX = 2

# ENQUEUE_INDEX
F_INDEX_MODE = 3
F_SIZE = 4
F_SPEC = 5

# QUERY
F_CLAUSE = 2

# TAG
F_ATTRIBUTE = 3
F_VALUE = 4

# REGISTER_NS
F_NAMESPACE = 2

# nested record
R_PATH = 1
R_SIZE = 2
R_OWNER = 3
R_MTIME = 4
R_DTN = 5
R_SYNCED = 7
R_KIND = 8

# nested namespace
N_NAME = 1
N_OWNER = 2
N_SCOPE = 3

# nested clause
C_ATTRIBUTE = 1
C_OP = 2
C_VALUE = 3

# nested triple
T_ATTRIBUTE = 1
T_FILE = 2
T_VALUE = 3
T_SOURCE = 4

_KIND_CODES = {KIND_FILE: 0, KIND_DIRECTORY: 1}
_KINDS = {v: k for k, v in _KIND_CODES.items()}
_SCOPE_CODES = {SCOPE_LOCAL: 0, SCOPE_GLOBAL: 1}
_SCOPES = {v: k for k, v in _SCOPE_CODES.items()}


def pack_record(record: FileRecord) -> bytes:
    return encode_fields(
        [
            (R_PATH, pack_text(record.path.display)),
            (R_SIZE, pack_u64(record.size)),
            (R_OWNER, pack_text(record.owner)),
            (R_MTIME, pack_i64(record.mtime)),
            (R_DTN, pack_u32(record.dtn_index)),
            (R_SYNCED, pack_u8(1 if record.synced else 0)),
            (R_KIND, pack_u8(_KIND_CODES[record.kind])),
        ]
    )


def unpack_record(raw: bytes) -> FileRecord:
    r = FieldReader.parse(raw)
    kind = _KINDS.get(r.uint(R_KIND, 0))
    if kind is None:
        raise ProtocolError("Unknown record kind")
    return FileRecord(
        path=normalize_path(r.text(R_PATH) or ""),
        size=r.uint(R_SIZE, 0),
        owner=r.text(R_OWNER, ""),
        mtime=r.sint(R_MTIME, 0),
        dtn_index=r.uint(R_DTN, 0),
        synced=bool(r.uint(R_SYNCED, 0)),
        kind=kind,
    )


def pack_namespace(template: NamespaceTemplate) -> bytes:
    return encode_fields(
        [
            (N_NAME, pack_text(template.name)),
            (N_OWNER, pack_text(template.owner)),
            (N_SCOPE, pack_u8(_SCOPE_CODES[template.scope])),
        ]
    )


def unpack_namespace(raw: bytes) -> NamespaceTemplate:
    r = FieldReader.parse(raw)
    scope = _SCOPES.get(r.uint(N_SCOPE, 1))
    if scope is None:
        raise ProtocolError("Unknown namespace scope")
    return NamespaceTemplate(r.text(N_NAME, ""), r.text(N_OWNER, ""), scope)


def pack_scope(scope: str) -> bytes:
    return pack_u8(_SCOPE_CODES[scope])


def unpack_scope(raw: bytes) -> str:
    return _SCOPES[raw[0]]


def pack_value(value: AttributeValue) -> bytes:
    return encode_value(value)


def unpack_value(raw: bytes) -> AttributeValue:
    value, offset = decode_value(raw, 0)
    if offset != len(raw):
        raise ProtocolError("Trailing bytes after attribute value")
    return value


def pack_clause(attribute: str, op_code: int, literal: AttributeValue) -> bytes:
    return encode_fields(
        [(C_ATTRIBUTE, pack_text(attribute)), (C_OP, pack_u8(op_code)), (C_VALUE, pack_value(literal))]
    )


def unpack_clause(raw: bytes):
    r = FieldReader.parse(raw)
    return r.text(C_ATTRIBUTE, ""), r.uint(C_OP, 0), unpack_value(r.require(C_VALUE))


def pack_triple(triple) -> bytes:
    return encode_fields(
        [
            (T_ATTRIBUTE, pack_text(triple.attribute)),
            (T_FILE, pack_text(triple.file)),
            (T_VALUE, pack_value(triple.value)),
            (T_SOURCE, pack_text(triple.source)),
        ]
    )


def unpack_triple_fields(raw: bytes):
    r = FieldReader.parse(raw)
    return r.text(T_ATTRIBUTE, ""), r.text(T_FILE, ""), unpack_value(r.require(T_VALUE)), r.text(T_SOURCE, "")


def error_payload(code: int, message: str, name: str = None) -> bytes:
    fields = [(F_ERR_CODE, pack_u16(code)), (F_ERR_MESSAGE, pack_text(message))]
    if name:
        fields.append((F_ERR_NAME, pack_text(name)))
    return encode_fields(fields)


def request_payload(requester: str, *fields) -> bytes:
    return encode_fields([(F_REQUESTER, pack_text(requester))] + [f for f in fields if f is not None])


def records_of(reader: FieldReader, tag: int = F_RES_RECORD) -> List[FileRecord]:
    return [unpack_record(raw) for raw in reader.all(tag)]
