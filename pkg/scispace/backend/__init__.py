INTERNAL_DIR = ".scispace"
SYNC_DIR = ".scispace/sync"
FILE_MARK_SUFFIX = ".mark"
DIR_MARK_SUFFIX = ".dmark"

XATTR_NAME = "user.scispace.sync"

MODE_XATTR = "native-xattr"
MODE_MARKER = "marker-tree"
