"""The intertwining matrix S(z, lambda) relating vertex and face R-matrices,
and the numerical checks of the exchange relations it satisfies."""

from __future__ import annotations

import numpy as np

from .config import ModuliConfig
from .felder import build_RF
from .sampling import ResidualAccumulator, ResidualReport, sample_points
from .tensorlegs import dyn_columns, leg_embed, permutation_matrix
from .theta import alpha_beta, phi_vec
from .weights import HModule, WeightKey, WeightVector


def build_S(z: complex, lam: WeightVector, cfg: ModuliConfig) -> np.ndarray:
    """Matrix whose j-th column is Phi(z - n*lambda_j)."""
    n = cfg.n
    cols = [phi_vec(z - n * lam.coords[j], cfg) for j in range(n)]
    return np.column_stack(cols)


def check_det_ratio(cfg: ModuliConfig, name: str = "irf-det-ratio",
                    tol: float | None = None, z_count: int = 10,
                    lam_count: int = 5) -> ResidualReport:
    """det(S(z, lambda)) / theta_k(z) is independent of z at fixed lambda.

    The comparison function theta_k has characteristics (k, k) with
    k = (n-1)/2 mod 1: columnwise quasi-periodicity gives the determinant a
    factor (-1)^(n-1) under z -> z+1, so the odd-characteristic function
    only matches for even n.  The z samples are drawn in the unit cell to
    keep the determinant within floating-point range.
    """
    tol = cfg.tol if tol is None else tol
    from .sampling import lambda_grid
    from .theta import theta_char
    k = ((cfg.n - 1) / 2.0) % 1.0
    lams = lambda_grid(cfg, count=lam_count, stream=31)
    zpts = [p.z / cfg.n
            for p in sample_points(cfg, 1, (0.0,), count=z_count, stream=32)]
    acc = ResidualAccumulator(name, tol, "det(S(z,l)) = Const(l) theta_k(z)")
    for lam in lams:
        ratios = np.array([np.linalg.det(build_S(z, lam, cfg))
                           / theta_char(k, k, z, cfg.tau)
                           for z in zpts])
        spread = float(np.max(np.abs(ratios - ratios[0])))
        acc.update_scalar({"lambda": list(lam.coords)}, spread,
                          scale=float(np.max(np.abs(ratios))))
    return acc.report()


def verify_vertex_irf(cfg: ModuliConfig, rb=None,
                      name: str = "irf-relations",
                      tol: float | None = None,
                      corrupt: bool = False) -> list[ResidualReport]:
    """Both exchange relations between the vertex and face R-matrices:

    R(z-w) S1(z,l) S2(w,l-gh1) = S2(w,l) S1(z,l-gh2) RF(z-w,l)
    R(z-w) S2(w,l) S1(z,l+gh2) = S1(z,l) S2(w,l+gh1) RF(z-w,l)

    The vertex matrix is built from a reference stream disjoint from the
    verification samples.  ``corrupt`` replaces RF by the permutation matrix
    (negative control).
    """
    from .belavin import BelavinRMatrix

    tol = cfg.tol if tol is None else tol
    n = cfg.n
    rb = rb or BelavinRMatrix(cfg)
    vec = HModule.vector(n)
    modules = [vec, vec]
    dims = [n, n]
    P = permutation_matrix(n)
    points = sample_points(cfg, 2, (0.0, cfg.gamma), stream=33)
    acc1 = ResidualAccumulator(f"{name}-1", tol,
                               "R S1 S2(l-gh1) = S2 S1(l-gh2) RF")
    acc2 = ResidualAccumulator(f"{name}-2", tol,
                               "R S2 S1(l+gh2) = S1 S2(l+gh1) RF")
    for p in points:
        z, w, lam = p.z, p.w, p.lam

        def s1(u):
            return lambda lv: leg_embed(build_S(u, lv, cfg), (0,), dims)

        def s2(u):
            return lambda lv: leg_embed(build_S(u, lv, cfg), (1,), dims)

        R = rb(z - w)
        RF = P if corrupt else build_RF(z - w, lam, cfg)
        lhs1 = R @ s1(z)(lam) @ dyn_columns(s2(w), [0], modules, lam, cfg.gamma)
        rhs1 = s2(w)(lam) @ dyn_columns(s1(z), [1], modules, lam, cfg.gamma) @ RF
        acc1.update(p.describe(), lhs1, rhs1)
        lhs2 = R @ s2(w)(lam) @ dyn_columns(s1(z), [1], modules, lam, cfg.gamma,
                                            sign=+1)
        rhs2 = s1(z)(lam) @ dyn_columns(s2(w), [0], modules, lam, cfg.gamma,
                                        sign=+1) @ RF
        acc2.update(p.describe(), lhs2, rhs2)
    return [acc1.report(), acc2.report()]


def verify_irf_components(cfg: ModuliConfig, rb=None,
                          name: str = "irf-components",
                          tol: float | None = None,
                          swap_coefficients: bool = False) -> list[ResidualReport]:
    """Columnwise form of the first exchange relation:

    i = j:  R(z-w) Phi_i(z,l) x Phi_i(w, l-g w_i)
            = Phi_i(z, l-g w_i) x Phi_i(w, l)
    i != j: R(z-w) Phi_i(z,l) x Phi_j(w, l-g w_i)
            = alpha(z-w, l_j-l_i) Phi_i(z, l-g w_j) x Phi_j(w, l)
            + beta(z-w, l_i-l_j) Phi_j(z, l-g w_i) x Phi_i(w, l)

    where Phi_i(z, l) = Phi(z - n l_i).  ``swap_coefficients`` exchanges
    alpha and beta (negative control).
    """
    from .belavin import BelavinRMatrix

    tol = cfg.tol if tol is None else tol
    n = cfg.n
    rb = rb or BelavinRMatrix(cfg)
    points = sample_points(cfg, 2, (0.0, cfg.gamma), stream=34)
    acc_d = ResidualAccumulator(f"{name}-diag", tol, "equal-index column relation")
    acc_o = ResidualAccumulator(f"{name}-offdiag", tol, "mixed-index column relation")

    def phi_col(u, lam, i):
        return phi_vec(u - n * lam.coords[i], cfg)

    for p in points:
        z, w, lam = p.z, p.w, p.lam
        R = rb(z - w)
        for i in range(n):
            li = lam.shifted(WeightKey.omega(n, i), -cfg.gamma)
            lhs = R @ np.kron(phi_col(z, lam, i), phi_col(w, li, i))
            rhs = np.kron(phi_col(z, li, i), phi_col(w, lam, i))
            acc_d.update({**p.describe(), "i": i}, lhs, rhs)
            for j in range(n):
                if j == i:
                    continue
                lj = lam.shifted(WeightKey.omega(n, j), -cfg.gamma)
                al, _ = alpha_beta(z - w, lam.diff(j, i), cfg)
                _, be = alpha_beta(z - w, lam.diff(i, j), cfg)
                if swap_coefficients:
                    al, be = be, al
                lhs = R @ np.kron(phi_col(z, lam, i), phi_col(w, li, j))
                rhs = (al * np.kron(phi_col(z, lj, i), phi_col(w, lam, j))
                       + be * np.kron(phi_col(z, li, j), phi_col(w, lam, i)))
                acc_o.update({**p.describe(), "i": i, "j": j}, lhs, rhs)
    return [acc_d.report(), acc_o.report()]
