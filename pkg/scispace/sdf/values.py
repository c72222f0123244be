import math
import struct
from dataclasses import dataclass
from typing import Union
from . import TAG_INT, TAG_FLOAT, TAG_TEXT, MAX_U16
from ..utils.errors import TextTooLong, Truncated, MalformedUtf8, SdfError

TYPE_NAMES = {TAG_INT: "int", TAG_FLOAT: "float", TAG_TEXT: "text"}
TAGS_BY_NAME = {name: tag for tag, name in TYPE_NAMES.items()}

_I64 = struct.Struct(">q")
_F64 = struct.Struct(">d")
_U16 = struct.Struct(">H")


@dataclass(frozen=True)
class AttributeValue:
    tag: int
    value: Union[int, float, str]

    def __post_init__(self):
        if self.tag == TAG_INT:
            if isinstance(self.value, bool) or not isinstance(self.value, int):
                raise TypeError("INT values should be int, got {!r}".format(self.value))
            if not -(2**63) <= self.value < 2**63:
                raise OverflowError("INT value {:d} does not fit 64 bits".format(self.value))
        elif self.tag == TAG_FLOAT:
            object.__setattr__(self, "value", float(self.value))
        elif self.tag == TAG_TEXT:
            if not isinstance(self.value, str):
                raise TypeError("TEXT values should be str, got {!r}".format(self.value))
        else:
            raise ValueError("Unknown attribute tag {!r}".format(self.tag))

    @classmethod
    def of_int(cls, value: int):
        return cls(TAG_INT, value)

    @classmethod
    def of_float(cls, value: float):
        return cls(TAG_FLOAT, value)

    @classmethod
    def of_text(cls, value: str):
        return cls(TAG_TEXT, value)

    @property
    def type_name(self) -> str:
        return TYPE_NAMES[self.tag]

    def sort_key(self):
        return (self.tag, self.value)

    def __eq__(self, other):
        if not isinstance(other, AttributeValue):
            return NotImplemented
        if self.tag != other.tag:
            return False
        if self.tag == TAG_FLOAT and math.isnan(self.value) and math.isnan(other.value):
            return True
        return self.value == other.value

    def __hash__(self):
        if self.tag == TAG_FLOAT and math.isnan(self.value):
            return hash((self.tag, "nan"))
        return hash((self.tag, self.value))

    def __str__(self):
        return "{}:{}".format(self.value, self.type_name)


def encode_value(value: AttributeValue) -> bytes:
    """tag u8 followed by the typed body."""
    if value.tag == TAG_INT:
        return bytes([TAG_INT]) + _I64.pack(value.value)
    if value.tag == TAG_FLOAT:
        return bytes([TAG_FLOAT]) + _F64.pack(value.value)
    raw = value.value.encode("utf-8")
    if len(raw) > MAX_U16:
        raise TextTooLong(len(raw))
    return bytes([TAG_TEXT]) + _U16.pack(len(raw)) + raw


def take(buf, offset: int, n: int, what: str):
    if offset + n > len(buf):
        raise Truncated(what, n, len(buf) - offset)
    return bytes(buf[offset : offset + n]), offset + n


def decode_utf8(raw: bytes, what: str) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedUtf8(what)


def decode_value(buf, offset: int = 0):
    """Returns (AttributeValue, new offset)."""
    raw_tag, offset = take(buf, offset, 1, "value tag")
    tag = raw_tag[0]
    if tag == TAG_INT:
        raw, offset = take(buf, offset, 8, "INT value")
        return AttributeValue(TAG_INT, _I64.unpack(raw)[0]), offset
    if tag == TAG_FLOAT:
        raw, offset = take(buf, offset, 8, "FLOAT value")
        return AttributeValue(TAG_FLOAT, _F64.unpack(raw)[0]), offset
    if tag == TAG_TEXT:
        raw_len, offset = take(buf, offset, 2, "TEXT length")
        (n,) = _U16.unpack(raw_len)
        raw, offset = take(buf, offset, n, "TEXT value")
        return AttributeValue(TAG_TEXT, decode_utf8(raw, "TEXT value")), offset
    raise SdfError("Unknown attribute tag {:d}".format(tag))


def parse_typed_literal(text: str, type_name: str = None) -> AttributeValue:
    """Parse `VALUE` or `VALUE:type` as used by the tag command."""
    if type_name is None and ":" in text:
        head, _, tail = text.rpartition(":")
        if tail in TAGS_BY_NAME:
            text, type_name = head, tail
    if type_name is None:
        try:
            return AttributeValue.of_int(int(text))
        except ValueError:
            pass
        try:
            return AttributeValue.of_float(float(text))
        except ValueError:
            return AttributeValue.of_text(text)
    if type_name == "int":
        return AttributeValue.of_int(int(text))
    if type_name == "float":
        return AttributeValue.of_float(float(text))
    if type_name == "text":
        return AttributeValue.of_text(text)
    raise ValueError("Unknown attribute type {!r}".format(type_name))
