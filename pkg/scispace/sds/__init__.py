MODE_INLINE_SYNC = "inline-sync"
MODE_INLINE_ASYNC = "inline-async"
MODE_LW_OFFLINE = "lw-offline"
MODES = (MODE_INLINE_SYNC, MODE_INLINE_ASYNC, MODE_LW_OFFLINE)

FLUSH_COUNT = 64
FLUSH_MS = 500
FLUSH_BYTES = 64 * 1024 * 1024
QUEUE_BOUND = 1048576

FS_SIZE = "fs.size"
FS_MTIME = "fs.mtime"

SOURCE_EXTRACTED = "extracted"
SOURCE_MANUAL = "manual"
