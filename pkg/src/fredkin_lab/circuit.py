"""Circuit representation, the text DSL, compilation, merging and truth tables.

DSL (one statement per line, ``#`` starts a comment)::

    wires a b c
    not <w>
    cnot <ctrl> <tgt>
    cu <uspec> <ctrl> <tgt>        # uspec: X Y Z V V(<lam>) U(<8 floats>)
    ccphase <phase> <w1> <w2>      # phase: i -i -1 1 theta=<radians>

Gates are listed in execution order: the first line acts first on the state.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    EXACT,
    FLOAT,
    I_UNIT,
    ONE,
    ZERO,
    ExactScalar,
    KernelError,
    UMatrix,
)
from .gates import (
    CONDITIONAL_U,
    DOUBLY_CONTROLLED_PHASE,
    NAMED_PAYLOADS,
    NOT,
    WIRES,
    GateSpec,
    basis_bits,
    conditional_u,
    doubly_controlled_phase,
    embed,
    fused_gate,
    lift,
    not_gate,
    v_gate,
)

AUTO = "auto"
UNITARY_LITERAL_TOL = 1e-9
TRUTH_TABLE_TOL = 1e-9


class ParseError(ValueError):
    """DSL syntax or semantic error at a source position (1-based)."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NotClassical(ValueError):
    """A matrix column is a superposition, so no truth table exists."""


@dataclass(frozen=True)
class Circuit:
    """Gates in execution order on the declared wires."""

    ops: tuple[GateSpec, ...] = ()
    wires: tuple[str, ...] = WIRES

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "wires", tuple(self.wires))
        for op in self.ops:
            missing = op.support - set(self.wires)
            if missing:
                raise ValueError(f"gate uses undeclared wire(s) {sorted(missing)}")

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.ops + other.ops, self.wires)

    def __pow__(self, n: int) -> "Circuit":
        return Circuit(self.ops * n, self.wires)

    @property
    def is_exact(self) -> bool:
        return all(op.is_exact for op in self.ops)

    def inverse(self) -> "Circuit":
        """Reverse of inverses; compiles to the adjoint."""
        return Circuit(tuple(op.inverse() for op in reversed(self.ops)), self.wires)

    def compile(self, kernel: str = AUTO) -> UMatrix:
        return compile_circuit(self, kernel)


# compilation ---------------------------------------------------------------------


def resolve_kernel(c: Circuit, kernel: str = AUTO) -> str:
    if kernel == AUTO:
        return EXACT if c.is_exact else FLOAT
    if kernel == EXACT and not c.is_exact:
        bad = next(op for op in c.ops if not op.is_exact)
        where = f" (line {bad.line})" if bad.line else ""
        raise KernelError(f"{bad.kind} gate on {','.join(bad.wires)}{where} has a non-exact payload")
    if kernel not in (EXACT, FLOAT):
        raise KernelError(f"unknown kernel {kernel!r}")
    return kernel


def compile_circuit(c: Circuit, kernel: str = AUTO) -> UMatrix:
    """Product of embedded gates; later gates multiply on the left."""
    kernel = resolve_kernel(c, kernel)
    m = UMatrix.identity(8, kernel)
    for op in c.ops:
        m = embed(op, kernel) @ m
    return m


# merging and counting -------------------------------------------------------------


def _fuse(group: list[GateSpec]) -> GateSpec:
    if len(group) == 1:
        return group[0]
    support = set().union(*(op.support for op in group))
    wires = tuple(w for w in WIRES if w in support)
    kernel = EXACT if all(op.is_exact for op in group) else FLOAT
    local = UMatrix.identity(2 ** len(wires), kernel)
    for op in group:
        local = lift(op.local_matrix(kernel), op.wires, wires) @ local
    return fused_gate(wires, local)


def merge_adjacent(c: Circuit, max_body: int = 2) -> Circuit:
    """Greedily fuse runs of consecutive gates whose joint support has at most ``max_body`` wires."""
    out: list[GateSpec] = []
    group: list[GateSpec] = []
    support: set[str] = set()
    for op in c.ops:
        if group and len(support | op.support) <= max_body:
            group.append(op)
            support |= op.support
            continue
        if group:
            out.append(_fuse(group))
        group, support = [op], set(op.support)
    if group:
        out.append(_fuse(group))
    return Circuit(tuple(out), c.wires)


def count_gates(c: Circuit) -> tuple[int, int]:
    """(one-body, two-body) gate counts by wire support."""
    one = sum(1 for op in c.ops if op.body == 1)
    two = sum(1 for op in c.ops if op.body == 2)
    return one, two


# truth tables --------------------------------------------------------------------


@dataclass(frozen=True)
class TruthTable:
    """Classical action of a monomial unitary: column ``j`` is ``phases[j] * e_{mapping[j]}``."""

    mapping: tuple[int, ...]
    phases: tuple = field(default=())

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("truth-table mapping is not a bijection")

    @property
    def kernel(self) -> str:
        return EXACT if all(isinstance(p, ExactScalar) for p in self.phases) else FLOAT

    @property
    def unit_phases(self) -> bool:
        if self.kernel == EXACT:
            return all(p == ONE for p in self.phases)
        return all(abs(complex(p) - 1) <= TRUTH_TABLE_TOL for p in self.phases)

    def moved(self) -> dict[int, int]:
        return {j: i for j, i in enumerate(self.mapping) if i != j}

    def to_matrix(self) -> UMatrix:
        n = len(self.mapping)
        kernel = self.kernel
        if kernel == EXACT:
            rows = [[ZERO] * n for _ in range(n)]
        else:
            rows = np.zeros((n, n), dtype=np.complex128)
        for j, i in enumerate(self.mapping):
            if kernel == EXACT:
                rows[i][j] = self.phases[j]
            else:
                rows[i, j] = complex(self.phases[j])
        return UMatrix(rows, kernel)

    def rows(self) -> list[tuple[tuple[int, int, int], tuple[int, int, int], object]]:
        """[(input bits, output bits, phase)] in basis order."""
        return [(basis_bits(j), basis_bits(i), self.phases[j]) for j, i in enumerate(self.mapping)]


def truth_table(m: UMatrix, tol: float = TRUTH_TABLE_TOL) -> TruthTable:
    """Read off the basis permutation and phases of a classical (monomial) unitary."""
    n = m.dim
    mapping = []
    phases = []
    for j in range(n):
        hits = []
        for i in range(n):
            v = m[i, j]
            if m.is_exact:
                if v.is_zero():
                    continue
                if v.abs2() != ONE:
                    raise NotClassical(f"column {j} has an entry of modulus != 0, 1 (superposition)")
                hits.append((i, v))
            else:
                a = abs(v)
                if a < tol:
                    continue
                if a <= 1 - tol:
                    raise NotClassical(f"column {j} has an entry of modulus {a:.6g} (superposition)")
                hits.append((i, v))
        if len(hits) != 1:
            raise NotClassical(f"column {j} has {len(hits)} unit-modulus entries")
        mapping.append(hits[0][0])
        phases.append(hits[0][1])
    try:
        return TruthTable(tuple(mapping), tuple(phases))
    except ValueError as exc:
        raise NotClassical(str(exc)) from None


# DSL --------------------------------------------------------------------------------

_TOKEN = re.compile(r"[^\s(]+\([^)]*\)|[^\s(]+\([^)]*$|\S+")
_PHASES = {"1": ONE, "-1": -ONE, "i": I_UNIT, "-i": -I_UNIT}
_ARITY = {"not": 1, "cnot": 2, "cu": 3, "ccphase": 3}


def _parse_float(text: str, line: int, col: int, what: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"malformed {what} {text!r}", line, col) from None
    if not math.isfinite(x):
        raise ParseError(f"{what} must be finite, got {text!r}", line, col)
    return x


def _parse_uspec(tok: str, line: int, col: int) -> tuple[UMatrix, str]:
    if tok in NAMED_PAYLOADS:
        return NAMED_PAYLOADS[tok], tok
    m = re.fullmatch(r"([VU])\((.*)\)", tok)
    if not m:
        raise ParseError(f"malformed unitary literal {tok!r}", line, col)
    kind, body = m.groups()
    args = [s for s in re.split(r"[\s,]+", body.strip()) if s]
    if kind == "V":
        if len(args) != 1:
            raise ParseError("V(...) takes exactly one angle", line, col)
        lam = _parse_float(args[0], line, col, "angle")
        return v_gate(lam), f"V({lam!r})"
    if len(args) != 8:
        raise ParseError(f"U(...) takes 8 reals (row-major re/im pairs), got {len(args)}", line, col)
    xs = [_parse_float(a, line, col, "matrix entry") for a in args]
    u = UMatrix([[complex(xs[0], xs[1]), complex(xs[2], xs[3])], [complex(xs[4], xs[5]), complex(xs[6], xs[7])]], FLOAT)
    if not u.is_unitary(UNITARY_LITERAL_TOL):
        raise ParseError(f"unitary literal {tok!r} is not unitary (tol {UNITARY_LITERAL_TOL:g})", line, col)
    return u, "U(" + ",".join(repr(x) for x in xs) + ")"


def _parse_phase(tok: str, line: int, col: int) -> tuple[object, str]:
    if tok in _PHASES:
        return _PHASES[tok], tok
    if tok.startswith("theta="):
        theta = _parse_float(tok[len("theta="):], line, col, "phase angle")
        return complex(math.cos(theta), math.sin(theta)), f"theta={theta!r}"
    raise ParseError(f"bad phase literal {tok!r}; expected i, -i, -1, 1 or theta=<radians>", line, col)


def parse_dsl(text: str) -> Circuit:
    """Parse DSL text into a :class:`Circuit`; raises :class:`ParseError` with line/column."""
    wires: tuple[str, ...] | None = None
    ops: list[GateSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(code)]
        if not toks:
            continue
        kw, kcol = toks[0]
        args = toks[1:]
        if kw == "wires":
            if wires is not None:
                raise ParseError("duplicate wires declaration", lineno, kcol)
            names = [t for t, _ in args]
            if sorted(names) != sorted(WIRES) or len(names) != 3:
                col = args[0][1] if args else kcol
                raise ParseError(f"wires must declare exactly a b c, got {' '.join(names) or 'nothing'}", lineno, col)
            wires = tuple(names)
            continue
        if kw not in _ARITY:
            raise ParseError(f"unknown statement {kw!r}", lineno, kcol)
        if wires is None:
            raise ParseError("gate before 'wires' declaration", lineno, kcol)
        if len(args) != _ARITY[kw]:
            col = args[_ARITY[kw]][1] if len(args) > _ARITY[kw] else len(code.rstrip()) + 1
            raise ParseError(f"'{kw}' expects {_ARITY[kw]} argument(s), got {len(args)}", lineno, col)
        wire_args = args[-2:] if kw != "not" else args
        for w, col in wire_args:
            if w not in wires:
                raise ParseError(f"undeclared wire {w!r}", lineno, col)
        if kw in ("cnot", "cu", "ccphase") and wire_args[0][0] == wire_args[1][0]:
            what = "control equals target" if kw != "ccphase" else "phase gate wires must differ"
            raise ParseError(f"{what} ({wire_args[0][0]!r})", lineno, wire_args[1][1])
        if kw == "not":
            op = not_gate(args[0][0])
        elif kw == "cnot":
            op = conditional_u(NAMED_PAYLOADS["X"], args[0][0], args[1][0], label="X")
        elif kw == "cu":
            u, label = _parse_uspec(args[0][0], lineno, args[0][1])
            op = conditional_u(u, args[1][0], args[2][0], label=label)
        else:
            p, label = _parse_phase(args[0][0], lineno, args[0][1])
            op = doubly_controlled_phase(p, args[1][0], args[2][0], label=label)
        ops.append(GateSpec(op.kind, op.wires, op.payload, op.label, lineno))
    return Circuit(tuple(ops), wires or WIRES)


def _gate_line(op: GateSpec) -> str:
    if op.kind == NOT:
        return f"not {op.wires[0]}"
    if op.kind == CONDITIONAL_U:
        label = op.label
        if label is None:
            label = "U(" + ",".join(repr(x) for z in op.payload.to_numpy().flat for x in (z.real, z.imag)) + ")"
        if label == "X":
            return f"cnot {op.wires[0]} {op.wires[1]}"
        return f"cu {label} {op.wires[0]} {op.wires[1]}"
    if op.kind == DOUBLY_CONTROLLED_PHASE:
        label = op.label
        if label is None:
            label = f"theta={math.atan2(complex(op.payload).imag, complex(op.payload).real)!r}"
        return f"ccphase {label} {op.wires[0]} {op.wires[1]}"
    raise ValueError(f"{op.kind} gates have no DSL form; serialize the unmerged circuit")


def serialize_dsl(c: Circuit) -> str:
    """Canonical DSL text: single spaces, lowercase keywords, one gate per line."""
    lines = ["wires " + " ".join(c.wires)]
    lines.extend(_gate_line(op) for op in c.ops)
    return "\n".join(lines) + "\n"

