"""Hot loops of the gate search: ansatz objective and Nelder-Mead descent.

Two backends share one algorithm:

* ``numba``: explicit loops compiled with ``@njit``; the whole simplex run
  stays in machine code.
* ``numpy``: vectorised objective, simplex loop in Python.

The default is numba when importable; set ``FREDKIN_LAB_DISABLE_NUMBA=1`` to
force the numpy path.
"""

from __future__ import annotations

import os
from types import FunctionType, SimpleNamespace

import numpy as np

ENV_FLAG = "FREDKIN_LAB_DISABLE_NUMBA"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False


def numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


def slot_indices(ctrl_bits: np.ndarray, tgt_bits: np.ndarray, nwires: int = 3):
    """Row indices (lo, hi) for each controlled slot.

    ``lo[s]`` lists basis states with the control set and the target clear;
    ``hi[s] = lo[s] | target``.  Bits are positions (0 = least significant).
    """
    dim = 1 << nwires
    nslots = len(ctrl_bits)
    half = dim // 4
    lo = np.empty((nslots, half), dtype=np.int64)
    hi = np.empty((nslots, half), dtype=np.int64)
    for s in range(nslots):
        cm, tm = 1 << int(ctrl_bits[s]), 1 << int(tgt_bits[s])
        rows = [i for i in range(dim) if i & cm and not i & tm]
        lo[s] = rows
        hi[s] = [i | tm for i in rows]
    return lo, hi


# objective: numpy --------------------------------------------------------------------


def _payloads_numpy(x: np.ndarray) -> np.ndarray:
    p = x.reshape(-1, 4)
    phi, alpha, beta, gamma = p[:, 0], p[:, 1], p[:, 2], p[:, 3]
    cb, sb = np.cos(beta / 2), np.sin(beta / 2)
    out = np.empty((len(p), 2, 2), dtype=np.complex128)
    out[:, 0, 0] = np.exp(1j * (phi - (alpha + gamma) / 2)) * cb
    out[:, 0, 1] = -np.exp(1j * (phi - (alpha - gamma) / 2)) * sb
    out[:, 1, 0] = np.exp(1j * (phi + (alpha - gamma) / 2)) * sb
    out[:, 1, 1] = np.exp(1j * (phi + (alpha + gamma) / 2)) * cb
    return out


def _circuit_numpy(x, lo, hi, dim):
    w = np.eye(dim, dtype=np.complex128)
    for s, u in enumerate(_payloads_numpy(x)):
        r0, r1 = lo[s], hi[s]
        top, bot = w[r0], w[r1]
        w[r0], w[r1] = u[0, 0] * top + u[0, 1] * bot, u[1, 0] * top + u[1, 1] * bot
    return w


def _objective_numpy(x, lo, hi, target_conj):
    w = _circuit_numpy(x, lo, hi, target_conj.shape[0])
    return 1.0 - abs(np.sum(target_conj * w)) / target_conj.shape[0]


# objective: explicit loops (numba) -----------------------------------------------------


def _objective_loops(x, lo, hi, target_conj):
    dim = target_conj.shape[0]
    w = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim):
        w[i, i] = 1.0
    nslots = lo.shape[0]
    for s in range(nslots):
        phi = x[4 * s]
        alpha = x[4 * s + 1]
        beta = x[4 * s + 2]
        gamma = x[4 * s + 3]
        cb = np.cos(beta / 2)
        sb = np.sin(beta / 2)
        u00 = np.exp(1j * (phi - (alpha + gamma) / 2)) * cb
        u01 = -np.exp(1j * (phi - (alpha - gamma) / 2)) * sb
        u10 = np.exp(1j * (phi + (alpha - gamma) / 2)) * sb
        u11 = np.exp(1j * (phi + (alpha + gamma) / 2)) * cb
        for k in range(lo.shape[1]):
            r0 = lo[s, k]
            r1 = hi[s, k]
            for j in range(dim):
                t = w[r0, j]
                b = w[r1, j]
                w[r0, j] = u00 * t + u01 * b
                w[r1, j] = u10 * t + u11 * b
    acc = 0j
    for i in range(dim):
        for j in range(dim):
            acc += target_conj[i, j] * w[i, j]
    return 1.0 - abs(acc) / dim


# Nelder-Mead -----------------------------------------------------------------------------


_objective = _objective_numpy


def _nelder_mead(x0, step, max_iter, xatol, fatol, lo, hi, target_conj):
    """Adaptive-coefficient Nelder-Mead over ``_objective(x, lo, hi, target_conj)``.

    Kept in the numba-compatible subset; the numba backend rebinds the global
    ``_objective`` to the jitted loop kernel.  Returns (best_x, best_f, iterations).
    """
    n = x0.shape[0]
    rho = 1.0
    chi = 1.0 + 2.0 / n
    psi = 0.75 - 1.0 / (2.0 * n)
    sigma = 1.0 - 1.0 / n

    sim = np.empty((n + 1, n))
    fsim = np.empty(n + 1)
    sim[0] = x0
    fsim[0] = _objective(x0, lo, hi, target_conj)
    for i in range(n):
        y = x0.copy()
        y[i] += step
        sim[i + 1] = y
        fsim[i + 1] = _objective(y, lo, hi, target_conj)

    it = 0
    while it < max_iter:
        order = np.argsort(fsim, kind="mergesort")
        sim = sim[order]
        fsim = fsim[order]
        if np.max(np.abs(sim[1:] - sim[0])) <= xatol and fsim[n] - fsim[0] <= fatol:
            break
        it += 1

        xbar = np.zeros(n)
        for i in range(n):
            xbar += sim[i]
        xbar /= n

        xr = (1 + rho) * xbar - rho * sim[n]
        fr = _objective(xr, lo, hi, target_conj)
        shrink = False
        if fr < fsim[0]:
            xe = (1 + rho * chi) * xbar - rho * chi * sim[n]
            fe = _objective(xe, lo, hi, target_conj)
            if fe < fr:
                sim[n] = xe
                fsim[n] = fe
            else:
                sim[n] = xr
                fsim[n] = fr
        elif fr < fsim[n - 1]:
            sim[n] = xr
            fsim[n] = fr
        elif fr < fsim[n]:
            xc = (1 + psi * rho) * xbar - psi * rho * sim[n]
            fc = _objective(xc, lo, hi, target_conj)
            if fc <= fr:
                sim[n] = xc
                fsim[n] = fc
            else:
                shrink = True
        else:
            xcc = (1 - psi) * xbar + psi * sim[n]
            fcc = _objective(xcc, lo, hi, target_conj)
            if fcc < fsim[n]:
                sim[n] = xcc
                fsim[n] = fcc
            else:
                shrink = True
        if shrink:
            for j in range(1, n + 1):
                sim[j] = sim[0] + sigma * (sim[j] - sim[0])
                fsim[j] = _objective(sim[j], lo, hi, target_conj)

    best = 0
    for j in range(1, n + 1):
        if fsim[j] < fsim[best]:
            best = j
    return sim[best].copy(), fsim[best], it


_BACKENDS: dict[str, SimpleNamespace] = {}


def get_backend(name: str | None = None) -> SimpleNamespace:
    """Namespace with ``name``, ``objective`` and ``nelder_mead`` for the chosen backend."""
    if name is None:
        name = "numpy" if numba_disabled() or not HAVE_NUMBA else "numba"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if name not in _BACKENDS:
        if name == "numba":
            objective = njit(cache=True)(_objective_loops)
            rebound = FunctionType(
                _nelder_mead.__code__, dict(globals(), _objective=objective), "_nelder_mead"
            )
            nm = njit(cache=True)(rebound)
        else:
            objective = _objective_numpy
            nm = _nelder_mead
        _BACKENDS[name] = SimpleNamespace(name=name, objective=objective, nelder_mead=nm)
    return _BACKENDS[name]
