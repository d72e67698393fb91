import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fredkin_lab.algebra import EXACT, FLOAT, I_UNIT, ONE, KernelError, UMatrix, adjoint, determinant
from fredkin_lab.gates import (
    LadderFactory,
    basis_index,
    cnot,
    conditional_u,
    doubly_controlled_phase,
    embed,
    ladder_number,
    ladder_transfer,
    not_gate,
    pauli,
    permutation_matrix,
    v_gate,
)

from conftest import haar_unitary

BIT = {"a": 2, "b": 1, "c": 0}


def ket(index: int) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[index] = 1
    return v


def controlled_oracle(u: np.ndarray, ctrl: str, tgt: str) -> np.ndarray:
    """Column-by-column construction from the definition of a conditional-U gate."""
    m = np.zeros((8, 8), dtype=complex)
    cb, tb = BIT[ctrl], BIT[tgt]
    for col in range(8):
        if not (col >> cb) & 1:
            m[col, col] = 1
            continue
        t_in = (col >> tb) & 1
        for t_out in (0, 1):
            row = (col & ~(1 << tb)) | (t_out << tb)
            m[row, col] = u[t_out, t_in]
    return m


class TestPauliAndV:
    def test_not_action(self):
        assert np.array_equal(pauli(1).to_numpy() @ [1, 0], [0, 1])

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_square_to_identity(self, k):
        assert pauli(k) @ pauli(k) == UMatrix.identity(2, EXACT)

    def test_pauli_algebra(self):
        assert pauli(2) @ pauli(3) == pauli(1).scale(I_UNIT)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            pauli(4)

    def test_v_exact(self):
        want = (pauli(2) + pauli(3)).to_float().scale(1 / math.sqrt(2))
        assert v_gate(math.pi / 2, EXACT).to_float().max_abs_diff(want) < 1e-15

    def test_v_zero_is_sigma2(self):
        assert v_gate(0.0) == pauli(2).to_float()

    @pytest.mark.parametrize("lam", [0.3, 1.1, 2.9])
    def test_v_self_inverse(self, lam):
        v = v_gate(lam)
        assert (v @ v).max_abs_diff(UMatrix.identity(2, FLOAT)) < 1e-12

    def test_v_exact_only_at_half_pi(self):
        with pytest.raises(KernelError):
            v_gate(0.3, EXACT)

    @given(st.floats(-10, 10))
    def test_v_hermitian_traceless(self, lam):
        v = v_gate(lam)
        assert v.max_abs_diff(adjoint(v)) == 0
        assert abs(v.trace()) < 1e-15


class TestGateConstruction:
    def test_not_on_c(self):
        m = embed(not_gate("c"))
        assert m == permutation_matrix([1, 0, 3, 2, 5, 4, 7, 6])
        assert np.array_equal(m.to_numpy() @ ket(0), ket(1))
        assert m @ m == UMatrix.identity(8, EXACT)

    def test_not_is_increment_mod_2(self):
        m = embed(not_gate("a"))
        for i in range(8):
            a = (i >> 2) & 1
            assert m[(i ^ 4), i] == ONE and ((a + 1) % 2) == ((i ^ 4) >> 2) & 1

    def test_embed_not_a_is_kron(self):
        i2 = UMatrix.identity(2, EXACT)
        assert embed(not_gate("a")) == pauli(1).kron(i2).kron(i2)

    def test_control_zero_does_nothing(self):
        m = embed(conditional_u(v_gate(0.8), "a", "b"))
        for i in range(4):
            assert np.allclose(m.to_numpy() @ ket(i), ket(i))

    def test_cnot_truth_action(self):
        m = embed(cnot("a", "b"))
        assert np.array_equal(m.to_numpy() @ ket(basis_index((1, 0, 0))), ket(basis_index((1, 1, 0))))

    def test_cnot_c_b_maps_001_to_011(self):
        m = embed(cnot("c", "b"))
        assert np.array_equal(m.to_numpy() @ ket(0b001), ket(0b011))

    def test_conditional_sigma2_squares_to_identity(self):
        m = embed(conditional_u(pauli(2), "a", "c"))
        assert m @ m == UMatrix.identity(8, EXACT)

    @pytest.mark.parametrize("ctrl,tgt", [("a", "b"), ("b", "a"), ("a", "c"), ("c", "a"), ("b", "c"), ("c", "b")])
    def test_embed_matches_definition(self, ctrl, tgt, rng):
        u = haar_unitary(rng)
        got = embed(conditional_u(UMatrix(u, FLOAT), ctrl, tgt)).to_numpy()
        assert np.allclose(got, controlled_oracle(u, ctrl, tgt), atol=1e-15)

    def test_errors(self):
        with pytest.raises(ValueError):
            conditional_u(pauli(1), "a", "a")
        with pytest.raises(ValueError):
            conditional_u(UMatrix([[2, 0], [0, 1]], FLOAT), "a", "b")
        with pytest.raises(ValueError):
            doubly_controlled_phase(2, "a", "b")
        with pytest.raises(ValueError):
            doubly_controlled_phase(0.5 + 0.5j, "a", "b")
        with pytest.raises(ValueError):
            not_gate("d")

    def test_every_embed_is_exactly_unitary(self):
        gates = [not_gate(w) for w in "abc"] + [
            conditional_u(pauli(k), c, t) for k in (1, 2, 3) for c in "abc" for t in "abc" if c != t
        ] + [doubly_controlled_phase(p, "a", "b") for p in (ONE, -ONE, I_UNIT, -I_UNIT)]
        gates.append(conditional_u(v_gate(math.pi / 2, EXACT), "b", "c"))
        for g in gates:
            assert embed(g).is_unitary(0)


class TestPhaseGate:
    def test_minus_i_on_ab(self):
        m = embed(doubly_controlled_phase(-I_UNIT, "a", "b"))
        assert m == UMatrix.diag([1, 1, 1, 1, 1, 1, -I_UNIT, -I_UNIT], EXACT)

    def test_trivial_phase(self):
        assert embed(doubly_controlled_phase(ONE, "a", "c")) == UMatrix.identity(8, EXACT)

    def test_order_four(self):
        m = embed(doubly_controlled_phase(-I_UNIT, "a", "b"))
        assert m @ m @ m @ m == UMatrix.identity(8, EXACT)

    @pytest.mark.parametrize("w1,w2", [("a", "b"), ("a", "c"), ("b", "c")])
    def test_symmetric_in_wires(self, w1, w2):
        assert embed(doubly_controlled_phase(-I_UNIT, w1, w2)) == embed(doubly_controlled_phase(-I_UNIT, w2, w1))

    def test_float_phase(self):
        m = embed(doubly_controlled_phase(np.exp(0.3j), "b", "c")).to_numpy()
        assert np.allclose(np.diag(m), [1, 1, 1, np.exp(0.3j), 1, 1, 1, np.exp(0.3j)])


class TestProperties:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_disjoint_supports_commute(self, seed):
        rng = np.random.default_rng(seed)
        u1, u2 = UMatrix(haar_unitary(rng), FLOAT), UMatrix(haar_unitary(rng), FLOAT)
        pairs = [
            (not_gate("a"), conditional_u(u1, "b", "c")),
            (conditional_u(u1, "c", "b"), not_gate("a")),
            (not_gate("b"), not_gate("c")),
            (conditional_u(u2, "a", "c"), not_gate("b")),
        ]
        for g1, g2 in pairs:
            m1, m2 = embed(g1, FLOAT), embed(g2, FLOAT)
            assert (m1 @ m2).max_abs_diff(m2 @ m1) < 1e-14

    def test_disjoint_supports_commute_exact(self):
        g1, g2 = not_gate("a"), conditional_u(v_gate(math.pi / 2, EXACT), "b", "c")
        assert embed(g1) @ embed(g2) == embed(g2) @ embed(g1)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["ab", "ba", "ac", "ca", "bc", "cb"]))
    def test_conditional_u_times_inverse(self, seed, wires):
        u = UMatrix(haar_unitary(np.random.default_rng(seed)), FLOAT)
        m = embed(conditional_u(u, *wires)) @ embed(conditional_u(adjoint(u), *wires))
        assert m.max_abs_diff(UMatrix.identity(8, FLOAT)) < 1e-14


class TestLadder:
    def test_number_of_a(self):
        assert ladder_number("a") == UMatrix.diag([0, 0, 0, 0, 1, 1, 1, 1], EXACT)

    def test_transfer_b_dag_c(self):
        # b^dag c on |1,0,1> -> |1,1,0>
        m = ladder_transfer("c", "b").to_numpy()
        assert np.array_equal(m @ ket(0b101), ket(0b110))

    def test_transfer_c_dag_b_kills(self):
        m = ladder_transfer("b", "c").to_numpy()
        assert np.array_equal(m @ ket(0b101), np.zeros(8))

    def test_two_level_semantics(self):
        f = LadderFactory()
        for w in "abc":
            cr, an = f.create(w).to_numpy(), f.annihilate(w).to_numpy()
            for i in range(8):
                occupied = (i >> BIT[w]) & 1
                if occupied:
                    assert not np.any(cr @ ket(i))
                else:
                    assert not np.any(an @ ket(i))

    def test_distinct_wires_commute(self):
        f = LadderFactory()
        ops = {(w, k): getattr(f, k)(w) for w in "abc" for k in ("create", "annihilate")}
        for (w1, k1), x in ops.items():
            for (w2, k2), y in ops.items():
                if w1 != w2:
                    assert x @ y == y @ x

    def test_same_wire_transfer_rejected(self):
        with pytest.raises(ValueError):
            ladder_transfer("a", "a")


class TestPermutation:
    def test_identity(self):
        assert permutation_matrix(range(8)) == UMatrix.identity(8, EXACT)

    def test_relabel_list(self):
        p = permutation_matrix([3, 0, 1, 2, 7, 4, 5, 6])
        assert determinant(p) in (ONE, -ONE)
        assert p @ adjoint(p) == UMatrix.identity(8, EXACT)
        assert p[3, 0] == ONE

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            permutation_matrix([0, 0, 1, 2, 3, 4, 5, 6])
