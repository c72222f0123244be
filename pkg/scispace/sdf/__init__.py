SDF_MAGIC = b"SSDF"
SDF_VERSION = 1
SDF_SUFFIX = ".sdf"

TAG_INT = 1
TAG_FLOAT = 2
TAG_TEXT = 3

MAX_U16 = 0xFFFF
