# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector gate kernels (hot path of every circuit run).

Same contract as qtc.qsim._apply_numpy.apply_circuit; little-endian qubit
order (basis index bit q = qubit q).
"""

from libc.math cimport cos, sin, sqrt

ctypedef double complex cplx


def apply_circuit(cplx[::1] amps, const long long[::1] kinds,
                  const long long[::1] q0, const long long[::1] q1,
                  const double[::1] angles):
    """Apply a compiled gate list to ``amps`` in place."""
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t n_gates = kinds.shape[0]
    cdef Py_ssize_t g, i, base, step, tmask
    cdef long long kind
    cdef double half, c, s
    cdef double inv = 1.0 / sqrt(2.0)
    cdef cplx a, b, phase

    for g in range(n_gates):
        kind = kinds[g]
        if kind == 0:  # H
            step = (<Py_ssize_t>1) << q0[g]
            for base in range(0, dim, 2 * step):
                for i in range(base, base + step):
                    a = amps[i]
                    b = amps[i + step]
                    amps[i] = (a + b) * inv
                    amps[i + step] = (a - b) * inv
        elif kind == 1:  # P(theta) = diag(1, e^{i theta})
            phase = cos(angles[g]) + 1j * sin(angles[g])
            step = (<Py_ssize_t>1) << q0[g]
            for base in range(0, dim, 2 * step):
                for i in range(base + step, base + 2 * step):
                    amps[i] = amps[i] * phase
        elif kind == 2:  # RY(theta)
            half = 0.5 * angles[g]
            c = cos(half)
            s = sin(half)
            step = (<Py_ssize_t>1) << q0[g]
            for base in range(0, dim, 2 * step):
                for i in range(base, base + step):
                    a = amps[i]
                    b = amps[i + step]
                    amps[i] = c * a - s * b
                    amps[i + step] = s * a + c * b
        elif kind == 3:  # CX(control=q0, target=q1)
            step = (<Py_ssize_t>1) << q0[g]
            tmask = (<Py_ssize_t>1) << q1[g]
            for i in range(dim):
                if (i & step) != 0 and (i & tmask) == 0:
                    a = amps[i]
                    amps[i] = amps[i | tmask]
                    amps[i | tmask] = a
        else:
            raise ValueError(f"unknown gate opcode {kind}")
