SHARD_DIR = ".scispace/shard"
METADATA_LOG = "metadata"
DISCOVERY_LOG = "discovery"

LOG_SUFFIX = ".log"
SNAPSHOT_SUFFIX = ".snap"

SNAPSHOT_EVERY = 10000
FSYNC = True
