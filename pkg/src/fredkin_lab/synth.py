"""Numerical search for controlled-gate sequences realising a target up to global phase.

Each ansatz slot is a conditional-U gate whose payload is the U(2) chart
``e^{i phi} Rz(alpha) Ry(beta) Rz(gamma)``.  Restarts draw uniform starting
points in [-pi, pi] from a generator seeded by ``(seed, restart)``, so the
first R restarts of any run are identical to an R-restart run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .algebra import FLOAT, UMatrix, phase_distance
from .circuit import Circuit, compile_circuit
from .gates import WIRES, check_wire, conditional_u

PARAMS_PER_SLOT = 4
INITIAL_STEP = 0.5
XATOL = 1e-10
FATOL = 1e-15
DISTANCE_NOTE = "up to global phase: 1 - |tr(T^dag W)| / 8"


@dataclass(frozen=True)
class AnsatzSlot:
    ctrl: str
    tgt: str

    def __post_init__(self):
        check_wire(self.ctrl)
        check_wire(self.tgt)
        if self.ctrl == self.tgt:
            raise ValueError(f"slot control equals target ({self.ctrl!r})")

    @classmethod
    def parse(cls, text: str) -> "AnsatzSlot":
        """``"bc"`` -> control b, target c."""
        text = text.strip()
        if len(text) != 2:
            raise ValueError(f"slot spec {text!r} must be two wire letters, e.g. 'bc'")
        return cls(text[0], text[1])

    def __str__(self):
        return self.ctrl + self.tgt


def parse_slots(spec: str | Sequence[str]) -> tuple[AnsatzSlot, ...]:
    if isinstance(spec, str):
        spec = [s for s in spec.split(",") if s.strip()]
    slots = tuple(AnsatzSlot.parse(s) for s in spec)
    if not slots:
        raise ValueError("at least one slot is required")
    return slots


@dataclass(frozen=True)
class SynthProblem:
    target: UMatrix
    slots: tuple[AnsatzSlot, ...]
    restarts: int = 50
    iterations: int = 2000
    seed: int = 0
    target_label: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("restarts and iterations must be >= 1")
        if self.target.dim != 8:
            raise ValueError("target must be an 8x8 matrix")
        if not self.target.is_unitary(1e-9):
            raise ValueError("target must be unitary")
        if not self.slots:
            raise ValueError("at least one slot is required")

    @property
    def nparams(self) -> int:
        return PARAMS_PER_SLOT * len(self.slots)

    def kernel_args(self):
        bit = {w: len(WIRES) - 1 - i for i, w in enumerate(WIRES)}
        ctrl = np.array([bit[s.ctrl] for s in self.slots])
        tgt = np.array([bit[s.tgt] for s in self.slots])
        lo, hi = _kernels.slot_indices(ctrl, tgt)
        return lo, hi, np.ascontiguousarray(self.target.to_numpy().conj())


@dataclass(frozen=True)
class SynthResult:
    problem: SynthProblem
    best_params: tuple[float, ...]
    best_distance: float
    per_restart_best: tuple[float, ...]
    backend: str = field(default="numpy")

    @property
    def best_restart(self) -> int:
        return int(np.argmin(self.per_restart_best))

    def circuit(self) -> Circuit:
        return instantiate(self.problem.slots, self.best_params)

    def to_report(self) -> dict:
        p = self.problem
        return {
            "target": p.target_label,
            "slots": [str(s) for s in p.slots],
            "seed": p.seed,
            "restarts": p.restarts,
            "iterations": p.iterations,
            "best_distance": self.best_distance,
            "best_params": list(self.best_params),
            "per_restart_best": list(self.per_restart_best),
            "distance": DISTANCE_NOTE,
            "backend": self.backend,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_report(), indent=2, sort_keys=True) + "\n"


def param_to_unitary(phi: float, alpha: float, beta: float, gamma: float) -> UMatrix:
    """e^{i phi} Rz(alpha) Ry(beta) Rz(gamma) as a float 2x2 matrix."""
    cb, sb = math.cos(beta / 2), math.sin(beta / 2)
    e = lambda t: complex(math.cos(t), math.sin(t))  # noqa: E731
    return UMatrix(
        [
            [e(phi - (alpha + gamma) / 2) * cb, -e(phi - (alpha - gamma) / 2) * sb],
            [e(phi + (alpha - gamma) / 2) * sb, e(phi + (alpha + gamma) / 2) * cb],
        ],
        FLOAT,
    )


def instantiate(slots: Sequence[AnsatzSlot], params: Sequence[float]) -> Circuit:
    """The ansatz as an ordinary circuit (slot order = execution order)."""
    params = list(params)
    if len(params) != PARAMS_PER_SLOT * len(slots):
        raise ValueError(f"expected {PARAMS_PER_SLOT * len(slots)} parameters, got {len(params)}")
    ops = []
    for i, s in enumerate(slots):
        u = param_to_unitary(*params[PARAMS_PER_SLOT * i: PARAMS_PER_SLOT * (i + 1)])
        ops.append(conditional_u(u, s.ctrl, s.tgt))
    return Circuit(tuple(ops))


def evaluate(problem: SynthProblem, params: Sequence[float], backend: str | None = None) -> float:
    """Phase distance between the instantiated ansatz and the target."""
    x = np.asarray(params, dtype=np.float64)
    if x.shape != (problem.nparams,):
        raise ValueError(f"expected {problem.nparams} parameters, got shape {x.shape}")
    be = _kernels.get_backend(backend)
    return max(0.0, float(be.objective(x, *problem.kernel_args())))


def evaluate_by_compilation(problem: SynthProblem, params: Sequence[float]) -> float:
    """Same quantity as :func:`evaluate`, computed through the circuit compiler."""
    w = compile_circuit(instantiate(problem.slots, params), FLOAT)
    return phase_distance(w, problem.target)


def restart_start(seed: int, restart: int, nparams: int) -> np.ndarray:
    rng = np.random.default_rng([seed, restart])
    return rng.uniform(-math.pi, math.pi, nparams)


def optimize(problem: SynthProblem, backend: str | None = None) -> SynthResult:
    """Random-restart Nelder-Mead; fully determined by the problem (incl. seed) and backend."""
    be = _kernels.get_backend(backend)
    lo, hi, tconj = problem.kernel_args()
    trace = []
    best_x, best_f = None, math.inf
    for r in range(problem.restarts):
        x0 = restart_start(problem.seed, r, problem.nparams)
        x, f, _ = be.nelder_mead(x0, INITIAL_STEP, problem.iterations, XATOL, FATOL, lo, hi, tconj)
        f = max(0.0, float(f))
        trace.append(f)
        if f < best_f:
            best_x, best_f = x, f
    return SynthResult(
        problem,
        tuple(float(v) for v in best_x),
        best_f,
        tuple(trace),
        be.name,
    )


def canonical_commutator_params(lam: float = math.pi / 2) -> np.ndarray:
    """Chart parameters of the V, U, V, U commutator block for slots bc, ac, bc, ac.

    sigma_2 = (pi/2, 0, pi, 0); V(lam) = (pi/2, pi/2, pi - lam, pi/2).
    """
    y = (math.pi / 2, 0.0, math.pi, 0.0)
    v = (math.pi / 2, math.pi / 2, math.pi - lam, math.pi / 2)
    return np.array(v + y + v + y, dtype=np.float64)
