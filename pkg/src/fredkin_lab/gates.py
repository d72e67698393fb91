"""Gate matrices and their embedding into the three-wire space.

Basis convention: the state ``|x_a, x_b, x_c>`` has index ``4*x_a + 2*x_b + x_c``;
wire ``a`` is the most significant bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .algebra import (
    EXACT,
    FLOAT,
    I_UNIT,
    INV_SQRT2,
    ONE,
    ZERO,
    ExactScalar,
    KernelError,
    UMatrix,
    as_kernel,
    exact_matrix,
)

WIRES = ("a", "b", "c")

NOT = "not"
CONDITIONAL_U = "conditional_u"
DOUBLY_CONTROLLED_PHASE = "doubly_controlled_phase"
FUSED = "fused"
GATE_KINDS = (NOT, CONDITIONAL_U, DOUBLY_CONTROLLED_PHASE, FUSED)

PHASE_TOL = 1e-12

Phase = Union[ExactScalar, complex]


def check_wire(w: str, space: Sequence[str] = WIRES) -> str:
    if w not in space:
        raise ValueError(f"unknown wire {w!r}; expected one of {tuple(space)}")
    return w


def basis_index(bits: dict[str, int] | Sequence[int]) -> int:
    """Index of ``|x_a, x_b, x_c>``, given as a dict or an (a, b, c) sequence."""
    if isinstance(bits, dict):
        bits = [bits[w] for w in WIRES]
    a, b, c = bits
    return 4 * a + 2 * b + c


def basis_bits(index: int) -> tuple[int, int, int]:
    return ((index >> 2) & 1, (index >> 1) & 1, index & 1)


# named 2x2 matrices ------------------------------------------------------------


def pauli(k: int) -> UMatrix:
    """Exact Pauli matrix sigma_k for k in {1, 2, 3}."""
    if k == 1:
        return exact_matrix([[0, 1], [1, 0]])
    if k == 2:
        return exact_matrix([[ZERO, -I_UNIT], [I_UNIT, ZERO]])
    if k == 3:
        return exact_matrix([[1, 0], [0, -1]])
    raise ValueError(f"Pauli index must be 1, 2 or 3, got {k!r}")


HALF_PI = math.pi / 2


def is_half_pi(lam: float) -> bool:
    return abs(lam - HALF_PI) <= 1e-12


def v_gate(lam: float, kernel: str = FLOAT) -> UMatrix:
    """``cos(lam/2) sigma_2 + sin(lam/2) sigma_3``.

    The exact kernel is available only at ``lam = pi/2``, where the gate is
    ``(sigma_2 + sigma_3)/sqrt2``.
    """
    if kernel == EXACT:
        if not is_half_pi(lam):
            raise KernelError(f"v_gate({lam!r}) is not representable in the exact kernel")
        h = INV_SQRT2
        return exact_matrix([[h, -(I_UNIT * h)], [I_UNIT * h, -h]])
    if not math.isfinite(lam):
        raise ValueError("lambda must be finite")
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    return UMatrix([[s, -1j * c], [1j * c, -s]], FLOAT)


def _named_payloads() -> dict[str, UMatrix]:
    return {"X": pauli(1), "Y": pauli(2), "Z": pauli(3), "V": v_gate(HALF_PI, EXACT)}


NAMED_PAYLOADS = _named_payloads()


# gate specs --------------------------------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """One gate application.

    ``payload`` is the 2x2 unitary for conditional-U gates, the unit-modulus
    phase for doubly-controlled phase gates, the local 2**m x 2**m matrix for
    fused gates, and ``None`` for NOT.  ``label`` is the DSL spelling of the
    payload; ``line`` is the source line when parsed from text.
    """

    kind: str
    wires: tuple[str, ...]
    payload: object = None
    label: str | None = None
    line: int | None = field(default=None, compare=False)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.wires)

    @property
    def body(self) -> int:
        return len(self.support)

    @property
    def is_exact(self) -> bool:
        if self.kind == NOT:
            return True
        if self.kind == DOUBLY_CONTROLLED_PHASE:
            return isinstance(self.payload, ExactScalar)
        return self.payload.is_exact

    def local_matrix(self, kernel: str | None = None) -> UMatrix:
        """Matrix on ``self.wires`` (first wire most significant)."""
        if kernel is None:
            kernel = EXACT if self.is_exact else FLOAT
        if kernel == EXACT and not self.is_exact:
            raise KernelError(f"{self.kind} gate on {self.wires} has a non-exact payload")
        if self.kind == NOT:
            return as_kernel(pauli(1), kernel)
        if self.kind == CONDITIONAL_U:
            u = as_kernel(self.payload, kernel)
            zero = ZERO if kernel == EXACT else 0j
            one = ONE if kernel == EXACT else 1 + 0j
            return UMatrix(
                [
                    [one, zero, zero, zero],
                    [zero, one, zero, zero],
                    [zero, zero, u[0, 0], u[0, 1]],
                    [zero, zero, u[1, 0], u[1, 1]],
                ],
                kernel,
            )
        if self.kind == DOUBLY_CONTROLLED_PHASE:
            p = self.payload if kernel == EXACT else complex(self.payload)
            one = ONE if kernel == EXACT else 1 + 0j
            return UMatrix.diag([one, one, one, p], kernel)
        return as_kernel(self.payload, kernel)

    def inverse(self) -> "GateSpec":
        if self.kind == NOT:
            return self
        if self.kind == CONDITIONAL_U:
            return conditional_u(self.payload.adjoint(), *self.wires)
        if self.kind == DOUBLY_CONTROLLED_PHASE:
            p = self.payload
            p = p.conj() if isinstance(p, ExactScalar) else p.conjugate()
            return doubly_controlled_phase(p, *self.wires)
        return GateSpec(FUSED, self.wires, self.payload.adjoint())

    def matrix(self, kernel: str | None = None) -> UMatrix:
        return embed(self, kernel)


def not_gate(w: str) -> GateSpec:
    """Quantum NOT (sigma_1) on wire ``w``."""
    return GateSpec(NOT, (check_wire(w),))


def payload_label(u: UMatrix) -> str | None:
    """DSL name of a 2x2 payload, or None if it must be written out numerically."""
    if u.is_exact:
        for name, m in NAMED_PAYLOADS.items():
            if m == u:
                return name
        return None
    return "U(" + ",".join(repr(x) for z in u.rows.flat for x in (float(z.real), float(z.imag))) + ")"


def conditional_u(u: UMatrix, ctrl: str, tgt: str, label: str | None = None) -> GateSpec:
    """Apply ``u`` to ``tgt`` when ``ctrl`` is |1>."""
    check_wire(ctrl)
    check_wire(tgt)
    if ctrl == tgt:
        raise ValueError(f"control equals target ({ctrl!r})")
    if u.dim != 2:
        raise ValueError(f"conditional-U payload must be 2x2, got dim {u.dim}")
    if not u.is_unitary(1e-9):
        raise ValueError("conditional-U payload is not unitary")
    if label is None:
        label = payload_label(u)
    return GateSpec(CONDITIONAL_U, (ctrl, tgt), u, label)


def cnot(ctrl: str, tgt: str) -> GateSpec:
    return conditional_u(pauli(1), ctrl, tgt)


def phase_label(p: Phase) -> str:
    if isinstance(p, ExactScalar):
        for name, v in (("1", ONE), ("-1", -ONE), ("i", I_UNIT), ("-i", -I_UNIT)):
            if p == v:
                return name
        z = complex(p)
    else:
        z = complex(p)
    return f"theta={cmath.phase(z)!r}"


def doubly_controlled_phase(p: Phase, w1: str, w2: str, label: str | None = None) -> GateSpec:
    """Multiply amplitudes by ``p`` when both ``w1`` and ``w2`` are |1>."""
    check_wire(w1)
    check_wire(w2)
    if w1 == w2:
        raise ValueError(f"phase gate wires must differ ({w1!r})")
    if isinstance(p, ExactScalar) or (isinstance(p, int) and not isinstance(p, bool)):
        p = ExactScalar.coerce(p)
        if p.abs2() != ONE:
            raise ValueError(f"phase {p} does not have unit modulus")
    else:
        p = complex(p)
        if not (math.isfinite(p.real) and math.isfinite(p.imag)) or abs(abs(p) - 1.0) > PHASE_TOL:
            raise ValueError(f"phase {p} does not have unit modulus")
    if label is None:
        label = phase_label(p)
    return GateSpec(DOUBLY_CONTROLLED_PHASE, (w1, w2), p, label)


def fused_gate(wires: Sequence[str], local: UMatrix) -> GateSpec:
    """Gate given directly by its matrix on ``wires`` (used by gate merging)."""
    wires = tuple(check_wire(w) for w in wires)
    if len(set(wires)) != len(wires):
        raise ValueError("fused gate wires must be distinct")
    if local.dim != 2 ** len(wires):
        raise ValueError(f"local matrix dim {local.dim} does not match {len(wires)} wires")
    return GateSpec(FUSED, wires, local)


# embedding -----------------------------------------------------------------------


def lift(local: UMatrix, wires: Sequence[str], space: Sequence[str] = WIRES) -> UMatrix:
    """Embed an operator on ``wires`` into the space spanned by ``space``.

    Works for any operator (not just unitaries); wires absent from ``wires``
    see the identity.
    """
    n = len(space)
    m = len(wires)
    if local.dim != 2 ** m:
        raise ValueError(f"operator dim {local.dim} does not match {m} wires")
    pos = [n - 1 - list(space).index(w) for w in wires]  # bit position, space[0] most significant
    mask = sum(1 << p for p in pos)
    dim = 2 ** n

    def sub(index: int) -> int:
        s = 0
        for p in pos:
            s = (s << 1) | ((index >> p) & 1)
        return s

    subs = [sub(i) for i in range(dim)]
    exact = local.is_exact
    if exact:
        rows = [[ZERO] * dim for _ in range(dim)]
    else:
        rows = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        rest = col & ~mask
        for row in range(dim):
            if row & ~mask == rest:
                v = local[subs[row], subs[col]]
                if exact:
                    rows[row][col] = v
                else:
                    rows[row, col] = v
    return UMatrix(rows, local.kernel)


def embed(g: GateSpec, kernel: str | None = None) -> UMatrix:
    """8x8 matrix acting as ``g`` on its wires and as identity elsewhere."""
    return lift(g.local_matrix(kernel), g.wires)


# ladder operators ----------------------------------------------------------------


class LadderFactory:
    """Two-level creation/annihilation operators on each wire, as 8x8 exact matrices.

    Hard-core (spin-1/2) semantics: ``w_dag |1> = 0``, ``w |0> = 0``, and
    operators on different wires commute (no sign strings).
    """

    RAISE = exact_matrix([[0, 0], [1, 0]])
    LOWER = exact_matrix([[0, 1], [0, 0]])

    def __init__(self, wires: Sequence[str] = WIRES):
        self.wires = tuple(wires)

    def create(self, w: str) -> UMatrix:
        return lift(self.RAISE, (check_wire(w, self.wires),), self.wires)

    def annihilate(self, w: str) -> UMatrix:
        return lift(self.LOWER, (check_wire(w, self.wires),), self.wires)

    def number(self, w: str) -> UMatrix:
        return self.create(w) @ self.annihilate(w)

    def transfer(self, src: str, dst: str) -> UMatrix:
        """``dst_dag src``: moves an excitation from ``src`` to ``dst``."""
        if src == dst:
            raise ValueError("transfer needs two distinct wires")
        return self.create(dst) @ self.annihilate(src)


_LADDER = LadderFactory()


def ladder_number(w: str) -> UMatrix:
    return _LADDER.number(w)


def ladder_transfer(src: str, dst: str) -> UMatrix:
    return _LADDER.transfer(src, dst)


def permutation_matrix(perm: Sequence[int]) -> UMatrix:
    """Exact matrix whose column ``j`` is the basis vector ``perm[j]``."""
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm!r} is not a permutation of 0..{n - 1}")
    rows = [[ZERO] * n for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = ONE
    return UMatrix(rows, EXACT)
