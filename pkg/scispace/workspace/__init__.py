FANOUT_WORKERS = 16
