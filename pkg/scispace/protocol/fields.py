"""Tagged length-value payload codec shared by every message.

    field_count u16 BE, then per field: tag u8, len u32 BE, bytes

Tags may repeat (lists); unknown tags are kept in decode order and ignored by
readers that do not know them.
"""
import struct
from typing import Iterable, List, Optional, Tuple
from ..utils.errors import ProtocolError

_COUNT = struct.Struct(">H")
_FIELD = struct.Struct(">BI")
_U8 = struct.Struct(">B")
_U16 = struct.Struct(">H")
_U32 = struct.Struct(">I")
_U64 = struct.Struct(">Q")
_I64 = struct.Struct(">q")


def encode_fields(fields: Iterable[Tuple[int, bytes]]) -> bytes:
    fields = list(fields)
    if len(fields) > 0xFFFF:
        raise ProtocolError("A payload holds at most 65535 fields, got {:d}".format(len(fields)))
    parts = [_COUNT.pack(len(fields))]
    for tag, raw in fields:
        parts.append(_FIELD.pack(tag, len(raw)))
        parts.append(raw)
    return b"".join(parts)


def decode_fields(buf) -> List[Tuple[int, bytes]]:
    buf = memoryview(bytes(buf))
    if len(buf) < 2:
        raise ProtocolError("Payload shorter than its field count")
    (count,) = _COUNT.unpack_from(buf, 0)
    offset = 2
    out = []
    for _ in range(count):
        if offset + _FIELD.size > len(buf):
            raise ProtocolError("Payload truncated in field header")
        tag, length = _FIELD.unpack_from(buf, offset)
        offset += _FIELD.size
        if offset + length > len(buf):
            raise ProtocolError("Payload truncated in field {:d}".format(tag))
        out.append((tag, bytes(buf[offset : offset + length])))
        offset += length
    if offset != len(buf):
        raise ProtocolError("{:d} trailing bytes after payload fields".format(len(buf) - offset))
    return out


class FieldReader:
    def __init__(self, fields: List[Tuple[int, bytes]]):
        self.fields = fields

    @classmethod
    def parse(cls, payload: bytes):
        return cls(decode_fields(payload))

    def all(self, tag: int) -> List[bytes]:
        return [raw for t, raw in self.fields if t == tag]

    def raw(self, tag: int, default: Optional[bytes] = None) -> Optional[bytes]:
        for t, raw in self.fields:
            if t == tag:
                return raw
        return default

    def require(self, tag: int) -> bytes:
        raw = self.raw(tag)
        if raw is None:
            raise ProtocolError("Missing required field {:d}".format(tag))
        return raw

    def text(self, tag: int, default: Optional[str] = None) -> Optional[str]:
        raw = self.raw(tag)
        if raw is None:
            return default
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ProtocolError("Field {:d} is not valid UTF-8".format(tag))

    def uint(self, tag: int, default: Optional[int] = None) -> Optional[int]:
        raw = self.raw(tag)
        if raw is None:
            return default
        return unpack_uint(raw)

    def sint(self, tag: int, default: Optional[int] = None) -> Optional[int]:
        raw = self.raw(tag)
        if raw is None:
            return default
        if len(raw) != 8:
            raise ProtocolError("Field {:d} should be 8 bytes".format(tag))
        return _I64.unpack(raw)[0]


def pack_text(value: str) -> bytes:
    return value.encode("utf-8")


def pack_u8(value: int) -> bytes:
    return _U8.pack(value)


def pack_u16(value: int) -> bytes:
    return _U16.pack(value)


def pack_u32(value: int) -> bytes:
    return _U32.pack(value)


def pack_u64(value: int) -> bytes:
    return _U64.pack(value)


def pack_i64(value: int) -> bytes:
    return _I64.pack(value)


def unpack_uint(raw: bytes) -> int:
    if len(raw) not in (1, 2, 4, 8):
        raise ProtocolError("Unsigned field of width {:d}".format(len(raw)))
    return int.from_bytes(raw, "big")
