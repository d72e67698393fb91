"""Named matrices and circuits of the six-gate Fredkin construction, with checks.

Every ``verify_*``/``check_*`` routine returns a :class:`Verdict` instead of
raising, so a batch of checks can be reported as JSON.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .algebra import (
    EXACT,
    FLOAT,
    I_UNIT,
    ONE,
    ExactScalar,
    UMatrix,
    adjoint,
    determinant,
    phase_distance,
)
from .circuit import Circuit, compile_circuit, count_gates, merge_adjacent, truth_table
from .gates import (
    HALF_PI,
    basis_index,
    cnot,
    conditional_u,
    doubly_controlled_phase,
    is_half_pi,
    ladder_number,
    ladder_transfer,
    not_gate,
    pauli,
    permutation_matrix,
    v_gate,
)

# 0-based form of the relabelled basis order 4, 1, 2, 3, 8, 5, 6, 7
RELABEL_ORDER = (3, 0, 1, 2, 7, 4, 5, 6)

OBSTRUCTION_SEED = 19950305
OBSTRUCTION_TRIALS = 100

FREDKIN_TABLE = (
    ((0, 0, 0), (0, 0, 0)),
    ((0, 0, 1), (0, 0, 1)),
    ((0, 1, 0), (0, 1, 0)),
    ((0, 1, 1), (0, 1, 1)),
    ((1, 0, 0), (1, 0, 0)),
    ((1, 0, 1), (1, 1, 0)),
    ((1, 1, 0), (1, 0, 1)),
    ((1, 1, 1), (1, 1, 1)),
)


@dataclass(frozen=True)
class Verdict:
    check: str
    passed: bool
    max_abs_error: float
    orientation_notes: str = ""

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CanonicalParams:
    """Payloads of the construction: U = sigma_2, V = v_gate(lam), phase P."""

    lam: float = HALF_PI
    phase: object = -I_UNIT

    @property
    def kernel(self) -> str:
        return EXACT if is_half_pi(self.lam) and isinstance(self.phase, ExactScalar) else FLOAT

    @property
    def u(self) -> UMatrix:
        return pauli(2)

    @property
    def v(self) -> UMatrix:
        return v_gate(self.lam, EXACT if is_half_pi(self.lam) else FLOAT)

    def check(self) -> bool:
        """U and V are unitary and self-inverse; |P| = 1."""
        u, v = self.u, self.v
        for m in (u, v):
            if not m.is_unitary():
                return False
            sq = m @ m
            if m.is_exact:
                if sq != UMatrix.identity(2, EXACT):
                    return False
            elif not sq.allclose(UMatrix.identity(2, FLOAT)):
                return False
        p = self.phase
        if isinstance(p, ExactScalar):
            return p.abs2() == ONE
        return abs(abs(complex(p)) - 1) <= 1e-12


# matrices ----------------------------------------------------------------------


def fredkin_from_table() -> UMatrix:
    """Permutation matrix transcribed row by row from the Fredkin truth table."""
    perm = [0] * 8
    for inp, out in FREDKIN_TABLE:
        perm[basis_index(inp)] = basis_index(out)
    return permutation_matrix(perm)


def fredkin_from_ladder() -> UMatrix:
    """I + n_a (b^dag c + c^dag b - n_b - n_c + 2 n_b n_c) from two-level ladder operators."""
    n_a, n_b, n_c = (ladder_number(w) for w in "abc")
    bracket = (
        ladder_transfer("c", "b")
        + ladder_transfer("b", "c")
        - n_b
        - n_c
        + (n_b @ n_c).scale(2)
    )
    return UMatrix.identity(8, EXACT) + n_a @ bracket


def toffoli_matrix() -> UMatrix:
    """I_6 (+) sigma_1: flips c when a = b = 1."""
    perm = list(range(8))
    perm[6], perm[7] = 7, 6
    return permutation_matrix(perm)


def m_matrix(lam: float) -> UMatrix:
    """I_6 (+) (cos lam + i sin lam sigma_1) in the float kernel."""
    if not math.isfinite(lam):
        raise ValueError("lambda must be finite")
    m = np.eye(8, dtype=np.complex128)
    c, s = math.cos(lam), math.sin(lam)
    m[6, 6] = m[7, 7] = c
    m[6, 7] = m[7, 6] = 1j * s
    return UMatrix(m, FLOAT)


def commutator(u: UMatrix, v: UMatrix) -> UMatrix:
    """Group commutator u v u^dag v^dag."""
    return u @ v @ adjoint(u) @ adjoint(v)


# circuits ----------------------------------------------------------------------


def adder_circuit() -> Circuit:
    """Increment the two-bit number (b, c) modulo 4."""
    return Circuit((cnot("c", "b"), not_gate("c")))


def subtracter_circuit() -> Circuit:
    return adder_circuit().inverse()


def commutator_block(params: CanonicalParams | None = None) -> Circuit:
    """V_(b,c), U_(a,c), V_(b,c), U_(a,c) in execution order."""
    p = params or CanonicalParams()
    v, u = p.v, p.u
    return Circuit(
        (
            conditional_u(v, "b", "c", label=None if v.is_exact else f"V({p.lam!r})"),
            conditional_u(u, "a", "c"),
            conditional_u(v, "b", "c", label=None if v.is_exact else f"V({p.lam!r})"),
            conditional_u(u, "a", "c"),
        )
    )


def toffoli_circuit() -> Circuit:
    """Commutator block followed by the -i doubly-controlled phase on (a, b)."""
    return commutator_block() + Circuit((doubly_controlled_phase(-I_UNIT, "a", "b"),))


def canonical_fredkin_circuit() -> Circuit:
    """Nine gates: adder, commutator block, phase remover, subtracter."""
    return adder_circuit() + toffoli_circuit() + subtracter_circuit()


def m_circuit(lam: float) -> Circuit:
    """Four controlled gates compiling to ``m_matrix(lam)``; exact at lam = pi/2."""
    if not math.isfinite(lam):
        raise ValueError("lambda must be finite")
    return commutator_block(CanonicalParams(lam=lam))


# verification ---------------------------------------------------------------------


def _exact_verdict(name: str, got: UMatrix, want: UMatrix, notes: str = "") -> Verdict:
    return Verdict(name, got == want, got.max_abs_diff(want), notes)


def verify_fredkin_circuit() -> Verdict:
    got = compile_circuit(canonical_fredkin_circuit(), EXACT)
    return _exact_verdict(
        "fredkin_circuit_equals_table",
        got,
        fredkin_from_table(),
        "gates listed in execution order; compile multiplies later gates on the left",
    )


def verify_ladder() -> Verdict:
    return _exact_verdict("fredkin_ladder_equals_table", fredkin_from_ladder(), fredkin_from_table())


def verify_gate_counts() -> Verdict:
    c = canonical_fredkin_circuit()
    merged = merge_adjacent(c)
    before, after = count_gates(c), count_gates(merged)
    same = compile_circuit(merged, EXACT) == compile_circuit(c, EXACT)
    err = compile_circuit(merged, EXACT).max_abs_diff(compile_circuit(c, EXACT))
    return Verdict(
        "gate_counts",
        before == (2, 7) and after == (0, 6) and same,
        err,
        f"pre-merge (1-body, 2-body) = {before}; post-merge = {after}",
    )


def verify_commutator() -> Verdict:
    got = commutator(pauli(2), v_gate(HALF_PI, EXACT))
    return _exact_verdict("commutator_is_i_sigma1", got, pauli(1).scale(I_UNIT))


def verify_toffoli_circuit() -> Verdict:
    return _exact_verdict("toffoli_circuit_equals_toffoli", compile_circuit(toffoli_circuit(), EXACT), toffoli_matrix())


@dataclass(frozen=True)
class RelabelReport:
    passed: bool
    conjugation_exact: bool
    list_matches: str | None
    max_abs_error: float

    def verdict(self) -> Verdict:
        notes = (
            f"relabel list {[i + 1 for i in RELABEL_ORDER]} matches {self.list_matches} as a column permutation"
            if self.list_matches
            else "relabel list matches neither the adder nor its inverse"
        )
        return Verdict("relabel_to_toffoli", self.passed, self.max_abs_error, notes)


def verify_relabel() -> RelabelReport:
    """Check A F A^-1 = Toffoli with A the compiled adder, and orient the relabel list."""
    a = compile_circuit(adder_circuit(), EXACT)
    a_inv = adjoint(a)
    conj = a @ fredkin_from_table() @ a_inv
    exact = conj == toffoli_matrix()
    listed = permutation_matrix(RELABEL_ORDER)
    if listed == a:
        matches = "A (the adder)"
    elif listed == a_inv:
        matches = "A^-1 (the subtracter)"
    else:
        matches = None
    return RelabelReport(exact and matches is not None, exact, matches, conj.max_abs_diff(toffoli_matrix()))


def random_unitary(rng: np.random.Generator, n: int = 2) -> UMatrix:
    """Haar-random U(n) from the QR decomposition of a complex Ginibre matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return UMatrix(q * (d / np.abs(d)), FLOAT)


@dataclass(frozen=True)
class ObstructionReport:
    det_sigma1: ExactScalar
    canonical_det: ExactScalar
    trials: int
    seed: int
    max_det_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.det_sigma1 == -ONE
            and self.canonical_det == ONE
            and self.max_det_error <= self.tol
        )

    def verdict(self) -> Verdict:
        return Verdict(
            "determinant_obstruction",
            self.passed,
            self.max_det_error,
            f"det(sigma_1) = {self.det_sigma1}; det of every commutator is 1 "
            f"({self.trials} random pairs, seed {self.seed}); so u v u^-1 v^-1 = sigma_1 has no solution",
        )


def determinant_obstruction(
    trials: int = OBSTRUCTION_TRIALS, seed: int = OBSTRUCTION_SEED, tol: float = 1e-12
) -> ObstructionReport:
    """det(sigma_1) = -1 while every commutator of unitaries has determinant 1."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        u, v = random_unitary(rng), random_unitary(rng)
        worst = max(worst, abs(determinant(commutator(u, v)) - 1))
    canonical = determinant(commutator(pauli(2), v_gate(HALF_PI, EXACT)))
    return ObstructionReport(determinant(pauli(1)), canonical, trials, seed, worst, tol)


def verify_m_grid(points: int = 20, tol: float = 1e-12) -> Verdict:
    """compile(m_circuit(lam)) against m_matrix(lam) on an interior grid of (0, pi), plus the exact pi/2 case."""
    lams = [math.pi * (k + 1) / (points + 1) for k in range(points)]
    worst = 0.0
    for lam in lams:
        worst = max(worst, compile_circuit(m_circuit(lam), FLOAT).max_abs_diff(m_matrix(lam)))
    exact_half = compile_circuit(m_circuit(HALF_PI), EXACT)
    want = UMatrix.identity(8, EXACT)
    want = _with_lower_block(want, pauli(1).scale(I_UNIT))
    ok_exact = exact_half == want
    return Verdict(
        "m_lambda_grid",
        worst <= tol and ok_exact,
        worst,
        f"{points} grid points in (0, pi); lambda = pi/2 exact: {ok_exact}",
    )


def _with_lower_block(m: UMatrix, block: UMatrix) -> UMatrix:
    rows = [list(r) for r in m.rows]
    for i in range(2):
        for j in range(2):
            rows[6 + i][6 + j] = block[i, j]
    return UMatrix(rows, m.kernel)


def and_recovery(m: UMatrix | None = None) -> dict[tuple[int, int], int]:
    """c output for inputs |a, b, 0>; equals a AND b for the Fredkin gate."""
    table = truth_table(m if m is not None else fredkin_from_table())
    out = {}
    for a in (0, 1):
        for b in (0, 1):
            out[(a, b)] = table.mapping[basis_index((a, b, 0))] & 1
    return out


def verify_truth_table() -> Verdict:
    table = truth_table(compile_circuit(canonical_fredkin_circuit(), EXACT))
    swaps = table.moved() == {5: 6, 6: 5}
    ands = all(v == (a & b) for (a, b), v in and_recovery().items())
    return Verdict(
        "truth_table",
        swaps and table.unit_phases and ands,
        0.0,
        f"moved indices {table.moved()}; unit phases {table.unit_phases}; AND recovery {ands}",
    )


def run_all_checks() -> list[Verdict]:
    return [
        verify_fredkin_circuit(),
        verify_ladder(),
        verify_gate_counts(),
        verify_commutator(),
        determinant_obstruction().verdict(),
        verify_relabel().verdict(),
        verify_toffoli_circuit(),
        verify_m_grid(),
        verify_truth_table(),
    ]
