OP_EQ = 1
OP_GT = 2
OP_LT = 3
OP_LIKE = 4

OP_TOKENS = {"=": OP_EQ, ">": OP_GT, "<": OP_LT, "like": OP_LIKE}
OP_SYMBOLS = {OP_EQ: "=", OP_GT: ">", OP_LT: "<", OP_LIKE: "like"}
