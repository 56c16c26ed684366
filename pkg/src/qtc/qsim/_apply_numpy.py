"""Pure-NumPy gate kernels: the fallback backend.

Amplitudes are ordered little-endian: basis index i has qubit 0 as its least
significant bit.  For a single-qubit gate on qubit q the flat array viewed as
shape (dim // (2 * step), 2, step) with step = 2**q exposes that qubit on the
middle axis, so gates are applied with vectorized slice arithmetic.
"""

import math

import numpy as np

from ._codes import KIND_CX, KIND_H, KIND_P, KIND_RY

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def apply_circuit(amps, kinds, q0, q1, angles):
    """Apply a compiled gate list to ``amps`` in place."""
    dim = amps.shape[0]
    for g in range(kinds.shape[0]):
        kind = kinds[g]
        if kind == KIND_H:
            v = amps.reshape(-1, 2, 1 << q0[g])
            a = v[:, 0].copy()
            b = v[:, 1].copy()
            v[:, 0] = (a + b) * _INV_SQRT2
            v[:, 1] = (a - b) * _INV_SQRT2
        elif kind == KIND_P:
            v = amps.reshape(-1, 2, 1 << q0[g])
            v[:, 1] *= complex(math.cos(angles[g]), math.sin(angles[g]))
        elif kind == KIND_RY:
            half = 0.5 * angles[g]
            c, s = math.cos(half), math.sin(half)
            v = amps.reshape(-1, 2, 1 << q0[g])
            a = v[:, 0].copy()
            b = v[:, 1].copy()
            v[:, 0] = c * a - s * b
            v[:, 1] = s * a + c * b
        elif kind == KIND_CX:
            idx = np.arange(dim)
            src = idx[(((idx >> q0[g]) & 1) == 1) & (((idx >> q1[g]) & 1) == 0)]
            dst = src | (1 << q1[g])
            tmp = amps[src].copy()
            amps[src] = amps[dst]
            amps[dst] = tmp
        else:
            raise ValueError(f"unknown gate opcode {kind}")
