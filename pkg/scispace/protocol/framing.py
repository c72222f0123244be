import struct
from dataclasses import dataclass
from . import MAX_FRAME, HEADER_SIZE, FRAME_OVERHEAD, MESSAGE_NAMES
from ..utils.errors import PayloadTooLarge, OversizedFrame, FrameTruncated, ProtocolError

_LENGTH = struct.Struct(">I")
_HEAD = struct.Struct(">HI")


@dataclass(frozen=True)
class Frame:
    msg_type: int
    request_id: int
    payload: bytes = b""

    @property
    def length(self) -> int:
        return FRAME_OVERHEAD + len(self.payload)

    @property
    def name(self) -> str:
        return MESSAGE_NAMES.get(self.msg_type, "UNKNOWN({:d})".format(self.msg_type))


def encode_frame(msg_type: int, request_id: int, payload: bytes = b"") -> bytes:
    if len(payload) > MAX_FRAME - FRAME_OVERHEAD:
        raise PayloadTooLarge(len(payload))
    return _LENGTH.pack(FRAME_OVERHEAD + len(payload)) + _HEAD.pack(msg_type, request_id) + payload


def _read_exact(stream, n: int, received: int, expected: int) -> bytes:
    chunks = []
    missing = n
    while missing > 0:
        chunk = stream.read(missing)
        if not chunk:
            raise FrameTruncated(received + n - missing, expected)
        chunks.append(chunk)
        missing -= len(chunk)
    return b"".join(chunks)


def decode_frame(stream) -> Frame:
    """Consume exactly one frame from a binary stream with a `read(n)` method.

    Raises EOFError when the stream closes cleanly between frames.
    """
    first = stream.read(HEADER_SIZE)
    if not first:
        raise EOFError("Stream closed")
    if len(first) < HEADER_SIZE:
        first += _read_exact(stream, HEADER_SIZE - len(first), len(first), HEADER_SIZE)
    (length,) = _LENGTH.unpack(first)
    if length > MAX_FRAME:
        raise OversizedFrame(length)
    if length < FRAME_OVERHEAD:
        raise ProtocolError("Declared frame length {:d} is shorter than its header".format(length))
    body = _read_exact(stream, length, HEADER_SIZE, HEADER_SIZE + length)
    msg_type, request_id = _HEAD.unpack_from(body, 0)
    return Frame(msg_type, request_id, body[FRAME_OVERHEAD:])


def frame_bytes(frame: Frame) -> bytes:
    return encode_frame(frame.msg_type, frame.request_id, frame.payload)
