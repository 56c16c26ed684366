"""Benchmark the compiled gate kernels against the pure-NumPy fallback.

Times the dominant workloads: a Gram-matrix assembly at the pipeline's
2-qubit scale and raw circuit execution at growing qubit counts.  Run with

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from qtc.circuits import FeatureMapSpec, build_feature_map
from qtc.qsim import _apply_numpy
from qtc.qsim.core import _compile, zero_state

try:
    from qtc.qsim import _apply_cy

    BACKENDS = [("cython", _apply_cy.apply_circuit), ("numpy", _apply_numpy.apply_circuit)]
except ImportError:
    print("compiled extension not built; benchmarking the numpy fallback only")
    BACKENDS = [("numpy", _apply_numpy.apply_circuit)]


def time_gram(apply_circuit, n_points: int, repeats: int = 3) -> float:
    rng = np.random.default_rng(0)
    X = rng.uniform(0, np.pi, (n_points, 2))
    spec = FeatureMapSpec("zz", 2, 2)
    compiled = [_compile(build_feature_map(spec, x)) for x in X]
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        states = []
        for ops in compiled:
            state = zero_state(2)
            apply_circuit(state.amplitudes, *ops)
            states.append(state.amplitudes)
        S = np.array(states)
        _ = np.abs(S.conj() @ S.T) ** 2
        best = min(best, time.perf_counter() - t0)
    return best


def time_circuits(apply_circuit, n_qubits: int, n_runs: int, repeats: int = 3) -> float:
    rng = np.random.default_rng(1)
    spec = FeatureMapSpec("zz", n_qubits, 2)
    ops = _compile(build_feature_map(spec, rng.uniform(0, np.pi, n_qubits)))
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(n_runs):
            state = zero_state(n_qubits)
            apply_circuit(state.amplitudes, *ops)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    print(f"{'workload':<34}" + "".join(f"{name:>12}" for name, _ in BACKENDS) + f"{'speedup':>10}")
    rows = [
        ("gram 96x96 (2 qubits, zz reps=2)", lambda f: time_gram(f, 96)),
        ("2000 runs, 2 qubits", lambda f: time_circuits(f, 2, 2000)),
        ("500 runs, 6 qubits", lambda f: time_circuits(f, 6, 500)),
        ("50 runs, 12 qubits", lambda f: time_circuits(f, 12, 50)),
    ]
    for label, runner in rows:
        times = [runner(fn) for _, fn in BACKENDS]
        cells = "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        speedup = f"{times[-1] / times[0]:>9.1f}x" if len(times) == 2 else "       n/a"
        print(f"{label:<34}{cells}{speedup}")


if __name__ == "__main__":
    main()
