MAX_FRAME = 64 * 1024 * 1024
HEADER_SIZE = 4
FRAME_OVERHEAD = 6

PUT_FILE = 1
GET_FILE = 2
LIST_VISIBLE = 3
BATCH_EXPORT = 4
ENQUEUE_INDEX = 5
QUERY = 6
TAG = 7
REGISTER_NS = 8
RESULT = 9
ERROR = 10

MESSAGE_NAMES = {
    PUT_FILE: "PUT_FILE",
    GET_FILE: "GET_FILE",
    LIST_VISIBLE: "LIST_VISIBLE",
    BATCH_EXPORT: "BATCH_EXPORT",
    ENQUEUE_INDEX: "ENQUEUE_INDEX",
    QUERY: "QUERY",
    TAG: "TAG",
    REGISTER_NS: "REGISTER_NS",
    RESULT: "RESULT",
    ERROR: "ERROR",
}

# ENQUEUE_INDEX modes
INDEX_ENQUEUE = 0
INDEX_NOW = 1
INDEX_OFFLINE = 2
INDEX_FLUSH = 3

CONNECT_TIMEOUT = 5.0
REQUEST_TIMEOUT = 120.0
