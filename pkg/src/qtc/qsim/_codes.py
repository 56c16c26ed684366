"""Integer opcodes shared by the compiled and pure-NumPy gate kernels."""

KIND_H = 0
KIND_P = 1
KIND_RY = 2
KIND_CX = 3
