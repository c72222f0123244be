import io
import itertools
import logging
import socket
import threading
from concurrent.futures import Future, TimeoutError as FutureTimeout
from typing import Callable, Optional
from . import ERROR, RESULT, CONNECT_TIMEOUT, REQUEST_TIMEOUT
from .fields import FieldReader
from .framing import Frame, encode_frame, decode_frame
from .messages import F_ERR_CODE, F_ERR_MESSAGE, F_ERR_NAME
from ..utils.errors import ShardUnavailable, ProtocolError, rebuild_error

logger = logging.getLogger(__name__)


def unwrap_response(frame: Frame) -> FieldReader:
    reader = FieldReader.parse(frame.payload)
    if frame.msg_type == ERROR:
        raise rebuild_error(
            reader.uint(F_ERR_CODE, 4), reader.text(F_ERR_MESSAGE, ""), reader.text(F_ERR_NAME)
        )
    if frame.msg_type != RESULT:
        raise ProtocolError("Unexpected response type {}".format(frame.name))
    return reader


class ShardLink:
    """A connection to one shard service. `observer` sees every outbound frame."""

    def __init__(self, observer: Optional[Callable[[Frame], None]] = None):
        self.observer = observer
        self._ids = itertools.count(1)
        self._ids_lock = threading.Lock()

    def next_id(self) -> int:
        with self._ids_lock:
            return next(self._ids) & 0xFFFFFFFF

    def call(self, msg_type: int, payload: bytes) -> FieldReader:
        return unwrap_response(self.roundtrip(Frame(msg_type, self.next_id(), payload)))

    def roundtrip(self, frame: Frame) -> Frame:
        raise NotImplementedError

    def close(self):
        pass


class LoopbackLink(ShardLink):
    """In-process link: every frame still goes through the byte codec."""

    def __init__(self, service, observer=None):
        super().__init__(observer)
        self.service = service

    def roundtrip(self, frame: Frame) -> Frame:
        if not self.service.running:
            raise ShardUnavailable("Shard {:d} is not running".format(self.service.dtn_index))
        if self.observer is not None:
            self.observer(frame)
        wire = encode_frame(frame.msg_type, frame.request_id, frame.payload)
        request = decode_frame(io.BytesIO(wire))
        response = self.service.handle_frame(request)
        if not self.service.running:
            raise ShardUnavailable("Shard {:d} stopped mid-request".format(self.service.dtn_index))
        wire = encode_frame(response.msg_type, response.request_id, response.payload)
        return decode_frame(io.BytesIO(wire))


class TcpShardClient(ShardLink):
    """Pipelined client: requests share one socket, responses match by request id."""

    def __init__(self, host: str, port: int, observer=None, timeout: float = REQUEST_TIMEOUT):
        super().__init__(observer)
        self.host = host
        self.port = port
        self.timeout = timeout
        self._sock = None
        self._pending = {}
        self._lock = threading.Lock()
        self._write_lock = threading.Lock()

    def _connect(self):
        try:
            sock = socket.create_connection((self.host, self.port), timeout=CONNECT_TIMEOUT)
        except OSError as e:
            raise ShardUnavailable("Cannot reach shard at {}:{:d}: {}".format(self.host, self.port, e)) from e
        sock.settimeout(None)
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        self._sock = sock
        reader = threading.Thread(target=self._read_loop, args=(sock,), daemon=True)
        reader.start()

    def _read_loop(self, sock):
        stream = sock.makefile("rb")
        try:
            while True:
                frame = decode_frame(stream)
                with self._lock:
                    future = self._pending.pop(frame.request_id, None)
                if future is None:
                    logger.warning("Dropping response to unknown request %d", frame.request_id)
                    continue
                future.set_result(frame)
        except (EOFError, OSError, ProtocolError) as e:
            self._fail_all(sock, e)

    def _fail_all(self, sock, cause):
        with self._lock:
            if self._sock is sock:
                self._sock = None
            pending, self._pending = self._pending, {}
        for future in pending.values():
            future.set_exception(ShardUnavailable("Connection to {}:{:d} lost: {}".format(self.host, self.port, cause)))
        try:
            sock.close()
        except OSError:
            pass

    def roundtrip(self, frame: Frame) -> Frame:
        future = Future()
        with self._lock:
            if self._sock is None:
                self._connect()
            sock = self._sock
            self._pending[frame.request_id] = future
        if self.observer is not None:
            self.observer(frame)
        wire = encode_frame(frame.msg_type, frame.request_id, frame.payload)
        try:
            with self._write_lock:
                sock.sendall(wire)
        except OSError as e:
            self._fail_all(sock, e)
        try:
            return future.result(timeout=self.timeout)
        except FutureTimeout:
            raise ShardUnavailable("Shard at {}:{:d} did not answer in time".format(self.host, self.port))

    def close(self):
        with self._lock:
            sock = self._sock
        if sock is not None:
            try:
                sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            self._fail_all(sock, "closed")
