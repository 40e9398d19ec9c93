"""The dynamical R-matrix, its representation category (objects, tensor,
dual, morphism check) and the dynamical Yang-Baxter residual checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import ModuliConfig
from .errors import PoleError, SingularFactorError
from .sampling import (ResidualAccumulator, ResidualReport, SamplePoint,
                       sample_points)
from .tensorlegs import dyn_columns, leg_embed
from .theta import chi, lattice_distance, theta
from .weights import HModule, WeightKey, WeightVector


def build_RF(z: complex, lam: WeightVector, cfg: ModuliConfig) -> np.ndarray:
    """Assemble the dynamical R-matrix on C^n tensor C^n:
    sum_i E_ii x E_ii + sum_{i!=j} alpha(z, l_ij) E_jj x E_ii
    + sum_{i!=j} beta(z, l_ij) E_ji x E_ij, with l_ij = lambda_i - lambda_j.

    The alpha term sits on E_jj x E_ii (equivalently, the diagonal entry of
    the (i, j) input vector is alpha(z, l_ji)); any other placement is
    incompatible with the intertwining-vector exchange relations.
    """
    n = cfg.n
    g = cfg.gamma
    if lattice_distance(z - g, cfg.tau) < cfg.exclusion:
        raise PoleError(f"R-matrix pole: z={z} within exclusion of gamma lattice")
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    ls = np.array([lam.diff(i, j) for i, j in pairs])
    for l in ls:
        if lattice_distance(complex(l), cfg.tau) < cfg.exclusion:
            raise PoleError("lambda difference within exclusion of the theta zeros")
    args = np.concatenate([ls + g, ls, z - ls, np.array([z, z - g, g])])
    vals = theta(args, cfg)
    m = len(pairs)
    th_lg, th_l, th_zl = vals[:m], vals[m:2 * m], vals[2 * m:3 * m]
    th_z, th_zg, th_g = vals[3 * m:]
    alphas = th_lg * th_z / (th_l * th_zg)
    betas = th_zl * th_g / (th_l * th_zg)
    if cfg.beta_skew:
        betas = betas * (1.0 + cfg.beta_skew)
    R = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        R[i * n + i, i * n + i] = 1.0
    for (i, j), al, be in zip(pairs, alphas, betas):
        R[j * n + i, j * n + i] = al
        R[j * n + i, i * n + j] = be
    return R


@dataclass(frozen=True)
class FObject:
    """Pair (V, L(z, lambda)) with L on C^n tensor V."""

    space: HModule
    eval: Callable[[complex, WeightVector], np.ndarray]
    n: int
    pole_lattices: tuple[complex, ...] = ()
    name: str = ""

    @property
    def dim(self) -> int:
        return self.n * self.space.dim


def trivial_F(cfg: ModuliConfig) -> FObject:
    n = cfg.n
    eye = np.eye(n, dtype=complex)
    return FObject(space=HModule.trivial(n), eval=lambda z, lam: eye, n=n,
                   name="trivial")


def vector_rep_F(w: complex, cfg: ModuliConfig, twisted: bool = False) -> FObject:
    """(C^n, R(z-w, lambda)); the twisted variant multiplies by chi(z-w)."""
    def evaluate(z, lam):
        M = build_RF(z - w, lam, cfg)
        if twisted:
            M = chi(z - w, cfg) * M
        return M

    poles = (w + cfg.gamma,) + ((w,) if twisted else ())
    return FObject(space=HModule.vector(cfg.n), eval=evaluate, n=cfg.n,
                   pole_lattices=poles,
                   name=f"V_F({w}){'~' if twisted else ''}")


def tensor_F(a: FObject, b: FObject, cfg: ModuliConfig) -> FObject:
    """(V x V', L_12(z, lambda - gamma h_3) L'_13(z, lambda)), flattened with
    V as the slow index."""
    n = cfg.n
    modules = [HModule.vector(n), a.space, b.space]
    dims = [n, a.space.dim, b.space.dim]

    def evaluate(z, lam):
        left = dyn_columns(
            lambda lv: leg_embed(a.eval(z, lv), (0, 1), dims),
            [2], modules, lam, cfg.gamma, sign=-1)
        right = leg_embed(b.eval(z, lam), (0, 2), dims)
        return left @ right

    return FObject(space=a.space.tensor(b.space), eval=evaluate, n=n,
                   pole_lattices=a.pole_lattices + b.pole_lattices,
                   name=f"({a.name} x {b.name})")


def dual_F(a: FObject, cfg: ModuliConfig) -> FObject:
    """(V^*, L^{-1}(z, lambda + gamma h_2)^{t_2})."""
    n = cfg.n
    d = a.space.dim
    modules = [HModule.vector(n), a.space]

    def evaluate(z, lam):
        def inv_at(lv):
            M = a.eval(z, lv)
            try:
                return np.linalg.inv(M)
            except np.linalg.LinAlgError as exc:
                raise SingularFactorError(f"L of {a.name} singular at z={z}") from exc

        shifted = dyn_columns(inv_at, [1], modules, lam, cfg.gamma, sign=+1)
        T = shifted.reshape(n, d, n, d).transpose(0, 3, 2, 1)
        return np.ascontiguousarray(T.reshape(n * d, n * d))

    return FObject(space=a.space.dual(), eval=evaluate, n=n,
                   pole_lattices=a.pole_lattices, name=f"{a.name}^*")


def aux_block_map(phi: Callable[[WeightVector], np.ndarray],
                  lam: WeightVector, n: int, gamma: float,
                  sign: int = -1) -> np.ndarray:
    """(1 tensor phi(lambda + sign*gamma*h_1)): block diag over the auxiliary
    index i with blocks phi(lambda + sign*gamma*omega_i)."""
    blocks = [phi(lam.shifted(WeightKey.omega(n, i), sign * gamma))
              for i in range(n)]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def morphism_check_F(a: FObject, b: FObject,
                     phi: Callable[[WeightVector], np.ndarray],
                     cfg: ModuliConfig, name: str = "morphism-check",
                     tol: float | None = None,
                     points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    """Residual of L'(z,lambda)(1 x phi(lambda - gamma h_1))
    = (1 x phi(lambda)) L(z,lambda)."""
    tol = cfg.tol if tol is None else tol
    if points is None:
        points = sample_points(cfg, 1, a.pole_lattices + b.pole_lattices, stream=11)
    acc = ResidualAccumulator(name, tol, "L'(1 x phi(l-gh1)) = (1 x phi)L")
    for p in points:
        lhs = b.eval(p.z, p.lam) @ aux_block_map(phi, p.lam, cfg.n, cfg.gamma, -1)
        rhs = np.kron(np.eye(cfg.n), phi(p.lam)) @ a.eval(p.z, p.lam)
        acc.update(p.describe(), lhs, rhs)
    return acc.report()


def tensor_F_morphisms(phi: Callable[[WeightVector], np.ndarray],
                       phi_p: Callable[[WeightVector], np.ndarray],
                       dom_b: HModule, cfg: ModuliConfig
                       ) -> Callable[[WeightVector], np.ndarray]:
    """(phi x phi')(lambda) = phi(lambda - gamma h_2) x phi'(lambda), where
    h_2 reads the weight of the second tensor factor (domain ``dom_b``)."""
    groups = dom_b.weight_groups()

    def evaluate(lam):
        base_p = phi_p(lam)
        d_b = dom_b.dim
        out = None
        for key, idxs in groups.items():
            M = np.kron(phi(lam.shifted(key, -cfg.gamma)), base_p)
            if out is None:
                out = np.zeros_like(M)
            cols = [a * d_b + b for a in range(M.shape[1] // d_b) for b in idxs]
            out[:, cols] = M[:, cols]
        return out

    return evaluate


def dual_F_morphism(phi: Callable[[WeightVector], np.ndarray],
                    dom: HModule, cfg: ModuliConfig
                    ) -> Callable[[WeightVector], np.ndarray]:
    """phi^*(lambda) = phi(lambda + gamma h)^t, the shift read per weight
    block of the domain of phi (weight-zero maps preserve those blocks)."""
    groups = dom.weight_groups()

    def evaluate(lam):
        out = None
        for key, idxs in groups.items():
            M = phi(lam.shifted(key, cfg.gamma))
            if out is None:
                out = np.zeros_like(M)
            out[:, idxs] = M[:, idxs]
        return out.T

    return evaluate


def _weight_pattern_residual(M: np.ndarray, weights: list[WeightKey]) -> float:
    """Max off-block entry of a matrix that should preserve the total weight,
    relative to the max entry."""
    scale = float(np.max(np.abs(M))) or 1.0
    worst = 0.0
    for r, wr in enumerate(weights):
        for c, wc in enumerate(weights):
            if wr != wc:
                worst = max(worst, abs(M[r, c]))
    return worst / scale


def total_weights(a: FObject) -> list[WeightKey]:
    aux = HModule.vector(a.n)
    return list(aux.tensor(a.space).require_weights())


def check_weight_zero(a: FObject, cfg: ModuliConfig, name: str,
                      tol: float | None = None,
                      points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    tol = cfg.tol if tol is None else tol
    if points is None:
        points = sample_points(cfg, 1, a.pole_lattices, stream=12)
    weights = total_weights(a)
    acc = ResidualAccumulator(name, tol, "[h1+h2, L] = 0")
    for p in points:
        res = _weight_pattern_residual(a.eval(p.z, p.lam), weights)
        acc.update_scalar(p.describe(), res)
    return acc.report()


def check_lambda_periodicity(a: FObject, cfg: ModuliConfig, name: str,
                             tol: float | None = None,
                             points: Sequence[SamplePoint] | None = None
                             ) -> ResidualReport:
    """(n omega_i)-periodicity of L in lambda."""
    tol = cfg.tol if tol is None else tol
    if points is None:
        points = sample_points(cfg, 1, a.pole_lattices, stream=13, count=max(1, cfg.samples // 4))
    acc = ResidualAccumulator(name, tol, "L(z, l + n*omega_i) = L(z, l)")
    for p in points:
        base = a.eval(p.z, p.lam)
        for i in range(cfg.n):
            shifted = p.lam.shifted(WeightKey.omega(cfg.n, i), float(cfg.n))
            acc.update({**p.describe(), "omega": i}, a.eval(p.z, shifted), base)
    return acc.report()


def check_rll_F(a: FObject, cfg: ModuliConfig, name: str,
                tol: float | None = None,
                points: Sequence[SamplePoint] | None = None) -> ResidualReport:
    """Dynamical exchange relation for the object's L-operator:
    R_12(z-w, l-gh3) L_13(z, l) L_23(w, l-gh1)
    = L_23(w, l) L_13(z, l-gh2) R_12(z-w, l)."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    poles = a.pole_lattices + (cfg.gamma,)
    if points is None:
        points = sample_points(cfg, 2, poles, stream=14)
    modules = [HModule.vector(n), HModule.vector(n), a.space]
    dims = [n, n, a.space.dim]
    acc = ResidualAccumulator(name, tol, "R12 L13 L23 exchange relation")
    for p in points:
        z, w, lam = p.z, p.w, p.lam
        rf = lambda lv: leg_embed(build_RF(z - w, lv, cfg), (0, 1), dims)
        l13 = lambda u: (lambda lv: leg_embed(a.eval(u, lv), (0, 2), dims))
        l23 = lambda u: (lambda lv: leg_embed(a.eval(u, lv), (1, 2), dims))
        lhs = (dyn_columns(rf, [2], modules, lam, cfg.gamma)
               @ l13(z)(lam)
               @ dyn_columns(l23(w), [0], modules, lam, cfg.gamma))
        rhs = (l23(w)(lam)
               @ dyn_columns(l13(z), [1], modules, lam, cfg.gamma)
               @ rf(lam))
        acc.update(p.describe(), lhs, rhs)
    return acc.report()


def verify_dqybe(cfg: ModuliConfig, name: str = "felder-dqybe",
                 tol: float | None = None) -> ResidualReport:
    """Dynamical Yang-Baxter residual on three C^n legs."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    points = sample_points(cfg, 2, (cfg.gamma,), stream=15)
    vec = HModule.vector(n)
    modules = [vec, vec, vec]
    dims = [n, n, n]
    acc = ResidualAccumulator(name, tol,
                              "R12(z-w,l-gh3) R13(z,l) R23(w,l-gh1) "
                              "= R23(w,l) R13(z,l-gh2) R12(z-w,l)")
    for p in points:
        z, w, lam = p.z, p.w, p.lam

        def emb(u, legs):
            return lambda lv: leg_embed(build_RF(u, lv, cfg), legs, dims)

        lhs = (dyn_columns(emb(z - w, (0, 1)), [2], modules, lam, cfg.gamma)
               @ emb(z, (0, 2))(lam)
               @ dyn_columns(emb(w, (1, 2)), [0], modules, lam, cfg.gamma))
        rhs = (emb(w, (1, 2))(lam)
               @ dyn_columns(emb(z, (0, 2)), [1], modules, lam, cfg.gamma)
               @ emb(z - w, (0, 1))(lam))
        acc.update(p.describe(), lhs, rhs)
    return acc.report()


def check_unitarity_F(cfg: ModuliConfig, name: str = "felder-unitarity",
                      tol: float | None = None) -> ResidualReport:
    """R_12(z, l) R_21(-z, l) = Id.

    The right-hand side is the identity, so there is no large common scale
    to divide out; z is sampled in the unit cell where the coefficient
    magnitudes stay moderate and the product is well-conditioned.
    """
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    points = sample_points(cfg, 1, (cfg.gamma, -cfg.gamma), stream=16, cell=1.0)
    eye = np.eye(n * n, dtype=complex)
    from .tensorlegs import permutation_matrix
    P = permutation_matrix(n)
    acc = ResidualAccumulator(name, tol, "R12(z,l) R21(-z,l) = Id")
    for p in points:
        R = build_RF(p.z, p.lam, cfg)
        R21 = P @ build_RF(-p.z, p.lam, cfg) @ P
        acc.update(p.describe(), R @ R21, eye)
    return acc.report()
