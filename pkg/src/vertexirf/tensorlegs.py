"""Dense tensor-leg helpers: Heisenberg generators, leg embedding, dynamical
column shifts."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .weights import HModule, WeightKey, WeightVector


def heisenberg_A_B(n: int) -> tuple[np.ndarray, np.ndarray]:
    """A = diag(1, xi, ..., xi^{n-1}) and the cyclic shift B with
    B v_{i+1} = v_i; they satisfy A^n = B^n = Id and BA = xi AB."""
    if n < 2:
        raise ValueError("n must be >= 2")
    xi = np.exp(2j * np.pi / n)
    A = np.diag(xi ** np.arange(n))
    B = np.zeros((n, n), dtype=complex)
    for i in range(n):
        B[i, (i + 1) % n] = 1.0
    return A, B


def permutation_matrix(n: int) -> np.ndarray:
    """P: x tensor y -> y tensor x on C^n tensor C^n."""
    P = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            P[j * n + i, i * n + j] = 1.0
    return P


def leg_embed(M: np.ndarray, legs: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Kronecker-embed M (acting on the listed legs, in the listed order)
    into the product of all legs, identity elsewhere."""
    legs = list(legs)
    dims = list(dims)
    k = len(dims)
    if len(set(legs)) != len(legs) or any(l < 0 or l >= k for l in legs):
        raise ValueError(f"bad legs {legs} for {k} factors")
    d_m = math.prod(dims[l] for l in legs)
    if M.shape != (d_m, d_m):
        raise ValueError(f"matrix shape {M.shape} does not match legs {legs}")
    others = [i for i in range(k) if i not in legs]
    d_o = math.prod(dims[o] for o in others)
    big = np.kron(M, np.eye(d_o, dtype=complex))
    order = legs + others
    inv = [order.index(i) for i in range(k)]
    shp = [dims[o] for o in order]
    T = big.reshape(shp + shp).transpose(inv + [k + j for j in inv])
    d = math.prod(dims)
    return np.ascontiguousarray(T.reshape(d, d))


def _column_keys(modules: Sequence[HModule], shift_legs: Sequence[int]) -> list[WeightKey]:
    """Combined shift-leg weight for every flat column index."""
    dims = [m.dim for m in modules]
    total = math.prod(dims)
    n_key = len(modules[shift_legs[0]].require_weights()[0].a)
    keys = []
    for flat in range(total):
        rem = flat
        idx = [0] * len(dims)
        for pos in range(len(dims) - 1, -1, -1):
            idx[pos] = rem % dims[pos]
            rem //= dims[pos]
        key = WeightKey.zero(n_key)
        for l in shift_legs:
            key = key + modules[l].require_weights()[idx[l]]
        keys.append(key)
    return keys


def dyn_columns(eval_at: Callable[[WeightVector], np.ndarray],
                shift_legs: Sequence[int],
                modules: Sequence[HModule],
                lam: WeightVector,
                gamma: float,
                sign: int = -1) -> np.ndarray:
    """Evaluate a(lambda + sign*gamma*h_L) columnwise: the column block whose
    shift-leg weight is mu is taken from eval_at(lambda + sign*gamma*mu).

    ``eval_at`` must return the matrix on the full product space.
    """
    shift_legs = list(shift_legs)
    keys = _column_keys(modules, shift_legs)
    per_key: dict[WeightKey, list[int]] = {}
    for col, key in enumerate(keys):
        per_key.setdefault(key, []).append(col)
    out = None
    for key, cols in per_key.items():
        block = eval_at(lam.shifted(key, sign * gamma))
        if out is None:
            out = np.zeros_like(block)
        out[:, cols] = block[:, cols]
    return out


def apply_dyn_shift(eval_zl: Callable[[complex, WeightVector], np.ndarray],
                    shift_leg: int,
                    modules: Sequence[HModule],
                    z: complex,
                    lam: WeightVector,
                    gamma: float,
                    sign: int = -1) -> np.ndarray:
    """a(z, lambda + sign*gamma*h_l) for an evaluator of (z, lambda)."""
    return dyn_columns(lambda lv: eval_zl(z, lv), [shift_leg], modules, lam,
                       gamma, sign)
