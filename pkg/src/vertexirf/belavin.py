"""The elliptic R-matrix of vertex type, constructed by conjugating the
dynamical R-matrix with the intertwining matrix, plus its defining-property
checks and the category of z-periodic L-operators."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import ModuliConfig
from .errors import SingularFactorError
from .felder import build_RF
from .irf import build_S
from .sampling import (ResidualAccumulator, ResidualReport, SamplePoint,
                       lambda_grid, sample_points)
from .tensorlegs import dyn_columns, heisenberg_A_B, leg_embed, permutation_matrix
from .theta import chi
from .weights import HModule, WeightVector

# seed-stream tags; the reference data for the conjugation is drawn from
# streams disjoint from every verification sampler
_REF_LAMBDA_STREAM = 1009
_REF_W_STREAM = 1013


class BelavinRMatrix:
    """Evaluator for the vertex-type R-matrix.

    R(z) = S_2(w0, l) S_1(z + w0, l - g h_2) RF(z, l)
           [S_1(z + w0, l) S_2(w0, l - g h_1)]^{-1}

    for an internal generic reference (l, w0); the result is independent of
    that reference (checked separately).  Values are memoized per z; the
    cache is a plain dict with idempotent writes, safe under concurrent use.
    """

    def __init__(self, cfg: ModuliConfig,
                 lam_ref: WeightVector | None = None,
                 w0: complex | None = None,
                 ref_index: int = 0):
        self.cfg = cfg
        if lam_ref is None:
            lam_ref = lambda_grid(cfg, count=ref_index + 1,
                                  stream=_REF_LAMBDA_STREAM)[ref_index]
        if w0 is None:
            pts = sample_points(cfg, 1, (0.0, cfg.gamma),
                                count=ref_index + 1, stream=_REF_W_STREAM)
            w0 = pts[ref_index].z
        self.lam_ref = lam_ref
        self.w0 = w0
        self._cache: dict[complex, np.ndarray] = {}
        self._lock = threading.Lock()

    def _conjugate(self, z: complex, w0: complex) -> np.ndarray:
        cfg = self.cfg
        n = cfg.n
        lam = self.lam_ref
        vec = HModule.vector(n)
        modules = [vec, vec]
        dims = [n, n]

        def s1(u):
            return lambda lv: leg_embed(build_S(u, lv, cfg), (0,), dims)

        def s2(u):
            return lambda lv: leg_embed(build_S(u, lv, cfg), (1,), dims)

        left = (s2(w0)(lam)
                @ dyn_columns(s1(z + w0), [1], modules, lam, cfg.gamma)
                @ build_RF(z, lam, cfg))
        right = s1(z + w0)(lam) @ dyn_columns(s2(w0), [0], modules, lam, cfg.gamma)
        cond = np.linalg.cond(right)
        if not np.isfinite(cond) or cond > 1e10:
            raise SingularFactorError(
                f"intertwining factor ill-conditioned at z={z}, w0={w0}")
        return left @ np.linalg.inv(right)

    def direct(self, z: complex) -> np.ndarray:
        """Evaluate by conjugation without any lattice reduction of z.

        Any generic reference w0 yields the same R(z), but theta entries
        grow like exp(pi Im(u)^2 / Im(n tau)), so both arguments w0 and
        z + w0 must stay moderate or the right factor turns numerically
        singular.  Reduce the seeded reference to the base cell and split
        z symmetrically between the two legs.
        """
        z = complex(z)
        tau = self.cfg.tau
        b = self.w0.imag / tau.imag
        a = self.w0.real - b * tau.real
        w0_red = (a - np.floor(a)) + (b - np.floor(b)) * tau
        bz = round(0.5 * z.imag / tau.imag)
        az = round(0.5 * z.real - bz * tau.real)
        w0 = w0_red - az - bz * tau
        try:
            return self._conjugate(z, w0)
        except SingularFactorError:
            # z + w0 can land on a zero of det(S); a perturbed reference
            # point gives the same R(z)
            return self._conjugate(z, w0 + 0.0731 + 0.0517j)

    def __call__(self, z: complex) -> np.ndarray:
        """Evaluate R(z), reducing z to the unit cell first.

        Far outside the unit cell every factor of the conjugation overflows
        double precision, so z is brought back with the exact one-step
        translation behavior R(u+1) = A_1 R(u) A_1^{-1} and
        R(u+tau) = mu B_1 R(u) B_1^{-1}; that behavior is itself verified
        against ``direct`` evaluation at moderate points, where both paths
        are accurate.
        """
        z = complex(z)
        hit = self._cache.get(z)
        if hit is not None:
            return hit
        cfg = self.cfg
        tau = cfg.tau
        kb = int(np.floor(z.imag / tau.imag))
        ka = int(np.floor(z.real - kb * tau.real))
        z_red = z - ka - kb * tau
        val = self.direct(z_red)
        if ka or kb:
            n = cfg.n
            A, B = heisenberg_A_B(n)
            A1 = np.kron(np.linalg.matrix_power(A, ka), np.eye(n))
            B1 = np.kron(np.linalg.matrix_power(B, kb), np.eye(n))
            mu = np.exp(-2j * np.pi * (n - 1) * cfg.gamma * kb / n)
            U = B1 @ A1
            val = mu * (U @ val @ np.linalg.inv(U))
        with self._lock:
            self._cache.setdefault(z, val)
        return self._cache[z]


def build_RB(z: complex, cfg: ModuliConfig,
             lam_ref: WeightVector | None = None,
             w0: complex | None = None) -> np.ndarray:
    return BelavinRMatrix(cfg, lam_ref=lam_ref, w0=w0)(z)


@dataclass(frozen=True)
class BObject:
    """Pair (V, L(z)) with L on C^n tensor V, z-only."""

    dim: int
    eval: Callable[[complex], np.ndarray]
    n: int
    pole_lattices: tuple[complex, ...] = ()
    name: str = ""


def trivial_B(cfg: ModuliConfig) -> BObject:
    eye = np.eye(cfg.n, dtype=complex)
    return BObject(dim=1, eval=lambda z: eye, n=cfg.n, name="trivial")


def vector_rep_B(w: complex, cfg: ModuliConfig,
                 rb: BelavinRMatrix | None = None) -> BObject:
    """(C^n, chi(z-w) R(z-w)).  Both factors take the shifted argument z-w;
    that is the reading under which L(z+n) = L(z+n tau) = L(z) holds."""
    rb = rb or BelavinRMatrix(cfg)

    def evaluate(z):
        return chi(z - w, cfg) * rb(z - w)

    return BObject(dim=cfg.n, eval=evaluate, n=cfg.n,
                   pole_lattices=(w, w + cfg.gamma), name=f"V_B({w})")


def tensor_B(a: BObject, b: BObject, cfg: ModuliConfig) -> BObject:
    dims = [cfg.n, a.dim, b.dim]

    def evaluate(z):
        return (leg_embed(a.eval(z), (0, 1), dims)
                @ leg_embed(b.eval(z), (0, 2), dims))

    return BObject(dim=a.dim * b.dim, eval=evaluate, n=cfg.n,
                   pole_lattices=a.pole_lattices + b.pole_lattices,
                   name=f"({a.name} x {b.name})")


def dual_B(a: BObject, cfg: ModuliConfig) -> BObject:
    """(V^*, (L(z)^{-1})^{t_2})."""
    n, d = cfg.n, a.dim

    def evaluate(z):
        try:
            inv = np.linalg.inv(a.eval(z))
        except np.linalg.LinAlgError as exc:
            raise SingularFactorError(f"L of {a.name} singular at z={z}") from exc
        T = inv.reshape(n, d, n, d).transpose(0, 3, 2, 1)
        return np.ascontiguousarray(T.reshape(n * d, n * d))

    return BObject(dim=d, eval=evaluate, n=n, pole_lattices=a.pole_lattices,
                   name=f"{a.name}^*")


def morphism_check_B(a: BObject, b: BObject, phi: np.ndarray,
                     cfg: ModuliConfig, name: str = "morphism-check-b",
                     tol: float | None = None,
                     points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    """(1 x phi) L(z) = L'(z) (1 x phi)."""
    tol = cfg.tol if tol is None else tol
    if points is None:
        points = sample_points(cfg, 1, a.pole_lattices + b.pole_lattices, stream=21)
    eye = np.eye(cfg.n, dtype=complex)
    acc = ResidualAccumulator(name, tol, "(1 x phi) L = L' (1 x phi)")
    for p in points:
        lhs = np.kron(eye, phi) @ a.eval(p.z)
        rhs = b.eval(p.z) @ np.kron(eye, phi)
        acc.update(p.describe(), lhs, rhs)
    return acc.report()


def check_rll_B(a: BObject, cfg: ModuliConfig, name: str,
                rb: BelavinRMatrix | None = None,
                tol: float | None = None,
                points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    """R_12(z-w) L_13(z) L_23(w) = L_23(w) L_13(z) R_12(z-w)."""
    tol = cfg.tol if tol is None else tol
    rb = rb or BelavinRMatrix(cfg)
    poles = a.pole_lattices + (cfg.gamma,)
    if points is None:
        points = sample_points(cfg, 2, poles, stream=22)
    dims = [cfg.n, cfg.n, a.dim]
    acc = ResidualAccumulator(name, tol, "R12 L13 L23 = L23 L13 R12")
    for p in points:
        R12 = leg_embed(rb(p.z - p.w), (0, 1), dims)
        L13 = leg_embed(a.eval(p.z), (0, 2), dims)
        L23 = leg_embed(a.eval(p.w), (1, 2), dims)
        acc.update(p.describe(), R12 @ L13 @ L23, L23 @ L13 @ R12)
    return acc.report()


def check_z_periodicity(a: BObject, cfg: ModuliConfig, name: str,
                        tol: float | None = None,
                        points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    """L(z + n) = L(z) and L(z + n*tau) = L(z)."""
    tol = cfg.tol if tol is None else tol
    if points is None:
        points = sample_points(cfg, 1, a.pole_lattices, stream=23,
                               count=max(1, cfg.samples // 4))
    acc = ResidualAccumulator(name, tol, "L(z+n) = L(z) = L(z+n tau)")
    for p in points:
        base = a.eval(p.z)
        acc.update({**p.describe(), "shift": "n"}, a.eval(p.z + cfg.n), base)
        acc.update({**p.describe(), "shift": "n*tau"},
                   a.eval(p.z + cfg.n * cfg.tau), base)
    return acc.report()


def check_reference_independence(cfg: ModuliConfig,
                                 name: str = "belavin-reference-independence",
                                 references: int = 20,
                                 tol: float | None = None) -> ResidualReport:
    """The conjugation result must not depend on the internal (lambda, w0)."""
    tol = cfg.tol if tol is None else tol
    lams = lambda_grid(cfg, count=references, stream=_REF_LAMBDA_STREAM)
    w0s = [p.z for p in sample_points(cfg, 1, (0.0, cfg.gamma),
                                      count=references, stream=_REF_W_STREAM)]
    zs = [p.z for p in sample_points(cfg, 1, (cfg.gamma,), count=5, stream=24)]
    acc = ResidualAccumulator(name, tol, "conjugation independent of reference")
    for z in zs:
        base = BelavinRMatrix(cfg, lam_ref=lams[0], w0=w0s[0])(z)
        for k in range(1, references):
            other = BelavinRMatrix(cfg, lam_ref=lams[k], w0=w0s[k])(z)
            acc.update({"z": z, "reference": k}, other, base)
    return acc.report()


def verify_belavin_properties(cfg: ModuliConfig,
                              rb: BelavinRMatrix | None = None,
                              tol: float | None = None) -> list[ResidualReport]:
    """The four defining properties plus the Yang-Baxter equation and the
    index-sum support pattern."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    rb = rb or BelavinRMatrix(cfg)
    A, B = heisenberg_A_B(n)
    P = permutation_matrix(n)
    eye = np.eye(n * n, dtype=complex)
    A1, A2 = np.kron(A, np.eye(n)), np.kron(np.eye(n), A)
    B1, B2 = np.kron(B, np.eye(n)), np.kron(np.eye(n), B)
    mu = np.exp(-2j * np.pi * (n - 1) * cfg.gamma / n)
    zpts = sample_points(cfg, 1, (cfg.gamma, -cfg.gamma), stream=25)
    reports = []

    acc = ResidualAccumulator("belavin-r0", tol, "R(0) = P")
    acc.update({"z": 0.0}, rb(0.0), P)
    reports.append(acc.report())

    acc = ResidualAccumulator("belavin-unitarity", tol, "R(z) R21(-z) = Id")
    for p in zpts:
        acc.update(p.describe(), rb(p.z) @ (P @ rb(-p.z) @ P), eye)
    reports.append(acc.report())

    # The translation checks must not go through the lattice-reduced
    # evaluator (its reduction step applies the very identity under test),
    # so both sides are computed by direct conjugation at unit-cell points.
    zpts_unit = sample_points(cfg, 1, (cfg.gamma, -cfg.gamma), stream=25,
                              cell=1.0)
    acc = ResidualAccumulator("belavin-translation-1", tol,
                              "R(z+1) = A1 R A1^-1 = A2^-1 R A2")
    for p in zpts_unit:
        R, R1 = rb.direct(p.z), rb.direct(p.z + 1)
        acc.update(p.describe(), R1, A1 @ R @ np.linalg.inv(A1))
        acc.update(p.describe(), R1, np.linalg.inv(A2) @ R @ A2)
    reports.append(acc.report())

    acc = ResidualAccumulator("belavin-translation-tau", tol,
                              "R(z+tau) = mu B1 R B1^-1 = mu B2^-1 R B2")
    for p in zpts_unit:
        R, Rt = rb.direct(p.z), rb.direct(p.z + cfg.tau)
        acc.update(p.describe(), Rt, mu * (B1 @ R @ np.linalg.inv(B1)))
        acc.update(p.describe(), Rt, mu * (np.linalg.inv(B2) @ R @ B2))
    reports.append(acc.report())

    acc = ResidualAccumulator("belavin-heisenberg-commutant", tol,
                              "[R(z), A x A] = [R(z), B x B] = 0")
    AA, BB = np.kron(A, A), np.kron(B, B)
    for p in zpts:
        R = rb(p.z)
        acc.update(p.describe(), R @ AA, AA @ R)
        acc.update(p.describe(), R @ BB, BB @ R)
    reports.append(acc.report())

    acc = ResidualAccumulator("belavin-qybe", tol,
                              "R12(z-w) R13(z) R23(w) = R23(w) R13(z) R12(z-w)")
    dims = [n, n, n]
    for p in sample_points(cfg, 2, (cfg.gamma,), stream=26):
        R12 = leg_embed(rb(p.z - p.w), (0, 1), dims)
        R13 = leg_embed(rb(p.z), (0, 2), dims)
        R23 = leg_embed(rb(p.w), (1, 2), dims)
        acc.update(p.describe(), R12 @ R13 @ R23, R23 @ R13 @ R12)
    reports.append(acc.report())

    sup_tol = min(tol, 1e-10)
    acc = ResidualAccumulator("belavin-support-pattern", sup_tol,
                              "entry ((p,q),(r,s)) nonzero only if p+q = r+s mod n")
    for p in zpts[: max(1, len(zpts) // 2)]:
        R = rb(p.z)
        scale = float(np.max(np.abs(R)))
        worst = 0.0
        for pp in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(n):
                        if (pp + q - r - s) % n != 0:
                            worst = max(worst, abs(R[pp * n + q, r * n + s]))
        acc.update_scalar(p.describe(), worst / scale)
    reports.append(acc.report())
    return reports


def diagonal_solution_converse(cfg: ModuliConfig,
                               X: np.ndarray,
                               D1: np.ndarray,
                               Ds: Sequence[np.ndarray] | None = None,
                               rb: BelavinRMatrix | None = None,
                               name: str = "belavin-diagonal-converse",
                               tol: float | None = None) -> ResidualReport:
    """Builds T = sum_i E_ii x D_i with D_{i+1} = X D_i (X^n = 1) and checks
    R_12(z) T_13 T_23 = T_23 T_13 R_12(z).  ``Ds`` overrides the recursion,
    for negative controls."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    X = np.asarray(X, dtype=complex)
    if Ds is None:
        if np.max(np.abs(np.linalg.matrix_power(X, n) - np.eye(len(X)))) > 1e-10:
            raise ValueError("X^n must be the identity")
        Ds = [np.asarray(D1, dtype=complex)]
        for _ in range(n - 1):
            Ds.append(X @ Ds[-1])
    d = Ds[0].shape[0]
    T = np.zeros((n * d, n * d), dtype=complex)
    for i in range(n):
        T[i * d:(i + 1) * d, i * d:(i + 1) * d] = Ds[i]
    rb = rb or BelavinRMatrix(cfg)
    dims = [n, n, d]
    T13 = leg_embed(T, (0, 2), dims)
    T23 = leg_embed(T, (1, 2), dims)
    acc = ResidualAccumulator(name, tol, "R12(z) T13 T23 = T23 T13 R12(z)")
    for p in sample_points(cfg, 1, (cfg.gamma,), stream=27,
                           count=max(1, cfg.samples // 4)):
        R12 = leg_embed(rb(p.z), (0, 1), dims)
        acc.update(p.describe(), R12 @ T13 @ T23, T23 @ T13 @ R12)
    return acc.report()
