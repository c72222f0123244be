FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211

DEFAULT_NAMESPACE = "public"
SYSTEM_OWNER = "system"

SCOPE_LOCAL = "local"
SCOPE_GLOBAL = "global"

KIND_FILE = "file"
KIND_DIRECTORY = "directory"
