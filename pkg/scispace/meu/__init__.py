LOCK_FILE = ".scispace/meu.lock"
LOCK_STALE_S = 60
