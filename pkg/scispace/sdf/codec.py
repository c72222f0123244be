import struct
from dataclasses import dataclass, field
from typing import List, Tuple
from . import SDF_MAGIC, SDF_VERSION, MAX_U16
from .values import AttributeValue, encode_value, decode_value, take, decode_utf8
from ..utils.errors import (
    BadMagic,
    UnsupportedVersion,
    TrailingBytes,
    TooManyAttributes,
    NameTooLong,
    DuplicateAttribute,
)

_HEADER = struct.Struct(">4sHH")
_U16 = struct.Struct(">H")
_U64 = struct.Struct(">Q")


@dataclass
class SdfDocument:
    attributes: List[Tuple[str, AttributeValue]] = field(default_factory=list)
    payload: bytes = b""
    version: int = SDF_VERSION

    def get(self, name: str):
        for attr_name, value in self.attributes:
            if attr_name == name:
                return value
        return None

    def as_dict(self):
        return dict(self.attributes)


def sdf_encode(doc: SdfDocument) -> bytes:
    if len(doc.attributes) > MAX_U16:
        raise TooManyAttributes(len(doc.attributes))

    parts = [_HEADER.pack(SDF_MAGIC, doc.version, len(doc.attributes))]
    seen = set()
    for name, value in doc.attributes:
        if name in seen:
            raise DuplicateAttribute(name)
        seen.add(name)
        raw_name = name.encode("utf-8")
        if len(raw_name) > MAX_U16:
            raise NameTooLong(len(raw_name))
        parts.append(_U16.pack(len(raw_name)))
        parts.append(raw_name)
        parts.append(encode_value(value))
    payload = bytes(doc.payload)
    parts.append(_U64.pack(len(payload)))
    parts.append(payload)
    return b"".join(parts)


def sdf_decode(buf) -> SdfDocument:
    buf = memoryview(bytes(buf))
    raw_magic, offset = take(buf, 0, 4, "magic")
    if raw_magic != SDF_MAGIC:
        raise BadMagic(raw_magic)
    raw, offset = take(buf, offset, 2, "version")
    (version,) = _U16.unpack(raw)
    if version != SDF_VERSION:
        raise UnsupportedVersion(version)
    raw, offset = take(buf, offset, 2, "attribute count")
    (n_attributes,) = _U16.unpack(raw)

    attributes = []
    seen = set()
    for _ in range(n_attributes):
        raw, offset = take(buf, offset, 2, "name length")
        (name_len,) = _U16.unpack(raw)
        raw_name, offset = take(buf, offset, name_len, "attribute name")
        name = decode_utf8(raw_name, "attribute name")
        if name in seen:
            raise DuplicateAttribute(name)
        seen.add(name)
        value, offset = decode_value(buf, offset)
        attributes.append((name, value))

    raw, offset = take(buf, offset, 8, "payload length")
    (payload_len,) = _U64.unpack(raw)
    # checked against what is left before any allocation
    payload, offset = take(buf, offset, payload_len, "payload")
    if offset != len(buf):
        raise TrailingBytes(len(buf) - offset)
    return SdfDocument(attributes=attributes, payload=payload, version=version)


def looks_like_sdf(buf) -> bool:
    return bytes(buf[:4]) == SDF_MAGIC
