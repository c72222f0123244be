import logging
import socketserver
import threading
from concurrent.futures import ThreadPoolExecutor
from . import ERROR
from .framing import Frame, decode_frame, encode_frame
from .messages import error_payload
from ..utils.errors import ProtocolError, OversizedFrame

logger = logging.getLogger(__name__)

WORKERS_PER_CONNECTION = 8


class _ConnectionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        service = self.server.service
        write_lock = threading.Lock()

        def respond(frame: Frame):
            response = service.handle_frame(frame)
            wire = encode_frame(response.msg_type, response.request_id, response.payload)
            # whole frames only, never interleaved
            with write_lock:
                try:
                    self.wfile.write(wire)
                    self.wfile.flush()
                except OSError:
                    logger.debug("Client of shard %d went away", service.dtn_index)

        with ThreadPoolExecutor(max_workers=WORKERS_PER_CONNECTION) as pool:
            while True:
                try:
                    frame = decode_frame(self.rfile)
                except EOFError:
                    return
                except OversizedFrame as e:
                    # the stream cannot be resynchronised after a bogus length
                    with write_lock:
                        self.wfile.write(encode_frame(ERROR, 0, error_payload(e.code, str(e), type(e).__name__)))
                    return
                except (ProtocolError, OSError) as e:
                    logger.info("Closing connection to shard %d: %s", service.dtn_index, e)
                    return
                pool.submit(respond, frame)


class ShardServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, service, host: str = "127.0.0.1", port: int = 0):
        self.service = service
        super().__init__((host, port), _ConnectionHandler)

    @property
    def port(self) -> int:
        return self.server_address[1]

    def serve_in_thread(self):
        thread = threading.Thread(target=self.serve_forever, daemon=True, name="scispace-shard")
        thread.start()
        return thread
