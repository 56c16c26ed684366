import math

import numpy as np
import pytest

from qtc.errors import ValidationError
from qtc.qsim import (
    Circuit,
    Gate,
    StateVector,
    adjoint,
    apply_gate,
    probabilities,
    run,
    sample,
    zero_state,
)
from qtc.qsim import _apply_numpy
from qtc.qsim.core import _compile

INV = 1.0 / math.sqrt(2.0)


# ------------------------------------------------------------- dense oracle

H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) * INV


def p_mat(theta):
    return np.diag([1.0, np.exp(1j * theta)])


def ry_mat(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def dense_unitary(gate: Gate, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix via Kronecker products (little-endian)."""
    if gate.kind == "cx":
        control, target = gate.qubits
        dim = 1 << n
        mat = np.zeros((dim, dim), dtype=complex)
        for i in range(dim):
            j = i ^ (1 << target) if (i >> control) & 1 else i
            mat[j, i] = 1.0
        return mat
    single = {"h": H_MAT, "p": p_mat(gate.angle or 0), "ry": ry_mat(gate.angle or 0)}[gate.kind]
    q = gate.qubits[0]
    return np.kron(np.kron(np.eye(1 << (n - 1 - q)), single), np.eye(1 << q))


def dense_run(circuit: Circuit) -> np.ndarray:
    state = np.zeros(1 << circuit.n_qubits, dtype=complex)
    state[0] = 1.0
    for gate in circuit.gates:
        state = dense_unitary(gate, circuit.n_qubits) @ state
    return state


def random_circuit(rng, n_qubits, n_gates) -> Circuit:
    gates = []
    for _ in range(n_gates):
        kind = ("h", "p", "ry", "cx")[rng.integers(4)] if n_qubits > 1 else ("h", "p", "ry")[rng.integers(3)]
        if kind == "cx":
            control, target = rng.choice(n_qubits, size=2, replace=False)
            gates.append(Gate("cx", (int(control), int(target))))
        elif kind == "h":
            gates.append(Gate("h", (int(rng.integers(n_qubits)),)))
        else:
            gates.append(Gate(kind, (int(rng.integers(n_qubits)),), float(rng.uniform(-4, 4))))
    return Circuit(n_qubits, tuple(gates))


# ------------------------------------------------------------------- gates


class TestApplyGate:
    def test_h_on_zero(self):
        out = apply_gate(zero_state(1), Gate("h", (0,)))
        assert np.allclose(out.amplitudes, [INV, INV], atol=1e-15)

    def test_ry_pi_flips(self):
        out = apply_gate(zero_state(1), Gate("ry", (0,), math.pi))
        assert np.allclose(out.amplitudes, [0, 1], atol=1e-12)

    def test_cx_little_endian(self):
        # |01> means qubit 0 set -> index 1; CX(0->1) maps it to |11> = index 3
        state = StateVector(2, np.array([0, 1, 0, 0], dtype=complex))
        out = apply_gate(state, Gate("cx", (0, 1)))
        assert np.allclose(out.amplitudes, [0, 0, 0, 1])

    def test_input_untouched(self):
        state = zero_state(1)
        apply_gate(state, Gate("h", (0,)))
        assert state.amplitudes[0] == 1.0

    def test_invalid_target(self):
        with pytest.raises(ValidationError):
            apply_gate(zero_state(1), Gate("h", (1,)))

    def test_cx_same_qubit_rejected(self):
        with pytest.raises(ValidationError):
            Gate("cx", (0, 0))

    def test_gate_matrices_unitary(self):
        for mat in (H_MAT, p_mat(0.7), ry_mat(1.3)):
            assert np.allclose(mat.conj().T @ mat, np.eye(2), atol=1e-12)
        cx = dense_unitary(Gate("cx", (0, 1)), 2)
        assert np.allclose(cx.conj().T @ cx, np.eye(4), atol=1e-12)


class TestRun:
    def test_empty_circuit(self):
        out = run(Circuit(2))
        assert np.allclose(out.amplitudes, [1, 0, 0, 0])

    def test_hadamard_wall(self):
        out = run(Circuit(2, (Gate("h", (0,)), Gate("h", (1,)))))
        assert np.allclose(out.amplitudes, [0.5] * 4, atol=1e-15)

    def test_unbound_symbol_named(self):
        circ = Circuit(1, (Gate("ry", (0,), "theta[0]"),))
        with pytest.raises(ValidationError, match=r"theta\[0\]"):
            run(circ)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(2024)
        for n in (1, 2, 3, 4):
            for _ in range(12):
                circ = random_circuit(rng, n, 12)
                assert np.allclose(
                    run(circ).amplitudes, dense_run(circ), atol=1e-10
                )

    def test_norm_preserved_on_random_circuits(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(1, 7))
            circ = random_circuit(rng, n, 50)
            norm = np.linalg.norm(run(circ).amplitudes)
            assert abs(norm - 1.0) < 1e-12


class TestAdjoint:
    def test_h_self_inverse(self):
        circ = Circuit(1, (Gate("h", (0,)),))
        assert adjoint(circ).gates == circ.gates

    def test_angle_negation_and_reversal(self):
        circ = Circuit(1, (Gate("p", (0,), 0.7), Gate("ry", (0,), 1.1)))
        inv = adjoint(circ)
        assert [(g.kind, g.angle) for g in inv.gates] == [("ry", -1.1), ("p", -0.7)]

    def test_round_trip_returns_zero_state(self):
        rng = np.random.default_rng(55)
        for _ in range(15):
            n = int(rng.integers(1, 5))
            circ = random_circuit(rng, n, int(rng.integers(1, 30)))
            out = run(Circuit(n, circ.gates + adjoint(circ).gates))
            expected = np.zeros(1 << n)
            expected[0] = 1.0
            assert np.allclose(out.amplitudes, expected, atol=1e-10)


class TestProbabilities:
    def test_basis_state(self):
        assert np.allclose(probabilities(zero_state(2)), [1, 0, 0, 0])

    def test_uniform(self):
        state = run(Circuit(2, (Gate("h", (0,)), Gate("h", (1,)))))
        assert np.allclose(probabilities(state), 0.25, atol=1e-15)

    def test_phase_invisible(self):
        base = run(Circuit(2, (Gate("h", (0,)), Gate("h", (1,)))))
        phased = run(
            Circuit(2, (Gate("h", (0,)), Gate("h", (1,)), Gate("p", (0,), 2.1)))
        )
        assert np.allclose(probabilities(base), probabilities(phased), atol=1e-15)

    def test_sums_to_one(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            circ = random_circuit(rng, 3, 20)
            assert probabilities(run(circ)).sum() == pytest.approx(1.0, abs=1e-12)


class TestSample:
    def test_deterministic_state(self):
        counts = sample(zero_state(2), 500, seed=1)
        assert counts == {0: 500}

    def test_reproducible(self):
        state = run(Circuit(2, (Gate("h", (0,)), Gate("ry", (1,), 0.9))))
        assert sample(state, 1000, seed=9) == sample(state, 1000, seed=9)

    def test_frequency_within_binomial_bound(self):
        state = run(Circuit(2, (Gate("h", (0,)), Gate("h", (1,)))))
        shots = 10**5
        counts = sample(state, shots, seed=123)
        sigma = math.sqrt(0.25 * 0.75 / shots)
        for i in range(4):
            assert abs(counts.get(i, 0) / shots - 0.25) < 5 * sigma

    def test_counts_sum_to_shots(self):
        state = run(Circuit(3, tuple(Gate("h", (q,)) for q in range(3))))
        counts = sample(state, 4321, seed=0)
        assert sum(counts.values()) == 4321


class TestBackendEquivalence:
    def test_numpy_fallback_matches_active_backend(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            n = int(rng.integers(1, 5))
            circ = random_circuit(rng, n, 25)
            fast = run(circ).amplitudes
            slow = zero_state(n).amplitudes
            _apply_numpy.apply_circuit(slow, *_compile(circ))
            assert np.allclose(fast, slow, atol=1e-12)


class TestBinding:
    def test_bind_by_parameter_order(self):
        circ = Circuit(2, (Gate("ry", (0,), "a"), Gate("ry", (1,), "b")))
        bound = circ.bind([0.5, 1.5])
        assert [g.angle for g in bound.gates] == [0.5, 1.5]
        assert bound.is_bound

    def test_repeated_symbol_binds_once(self):
        circ = Circuit(1, (Gate("ry", (0,), "a"), Gate("p", (0,), "a")))
        assert circ.parameters == ["a"]
        bound = circ.bind([0.3])
        assert [g.angle for g in bound.gates] == [0.3, 0.3]

    def test_wrong_length(self):
        circ = Circuit(1, (Gate("ry", (0,), "a"),))
        with pytest.raises(ValidationError, match="expected 1"):
            circ.bind([1.0, 2.0])
