DEFAULT_SEED = 0

MEU_COUNTS = [5000, 10000, 20000, 40000]
MEU_FILES_PER_DIR = 500

MODES_ATTR_COUNTS = [0, 5, 20]
MODES_FILES = 2000
MODES_FILE_SIZE = 64 * 1024
MODES_REPS = 5

HIT_RATIOS = [0.0, 0.25, 0.5, 0.75, 1.0]
HIT_FILES = 400
HIT_QUERIES = 1000

IO_BLOCK_SIZES = [4 * 1024, 16 * 1024, 64 * 1024, 128 * 1024, 512 * 1024]
IO_TOTAL_BYTES = 8 * 1024 * 1024

COLLAB_SESSIONS = [1, 2, 4, 8]
COLLAB_FILES = 100
COLLAB_FILE_SIZE = 4 * 1024

EXPERIMENTS = ("meu", "modes", "hitratio", "io", "collab")
