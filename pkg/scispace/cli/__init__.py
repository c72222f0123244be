CONFIG_ENV = "SCISPACE_CONFIG"

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2
