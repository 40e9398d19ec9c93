"""Finite difference operators on weight space, the twist of a dynamical
L-operator into a z-only one, the two twisting functors and the explicit
intertwiners between their images on vector representations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .belavin import BelavinRMatrix, BObject, vector_rep_B
from .config import ModuliConfig
from .errors import SingularFactorError, WeightError
from .felder import FObject, build_RF, trivial_F, vector_rep_F
from .irf import build_S
from .sampling import (ResidualAccumulator, ResidualReport, lambda_grid,
                       sample_points)
from .tensorlegs import dyn_columns, leg_embed
from .theta import lattice_distance
from .weights import HModule, WeightKey, WeightVector

PRUNE_TOL = 1e-12

Coefficient = Callable[[WeightVector], np.ndarray]


class DiffOp:
    """Finite sum of terms C_mu(lambda) T_mu, with T_mu the shift
    f(lambda) -> f(lambda + gamma*mu) and mu an integer weight key.

    Acting on a vector-valued function f:
        (d f)(lambda) = sum_mu C_mu(lambda) f(lambda + gamma*mu).
    Composition follows from that action:
        (C T_mu)(C' T_nu) = C(lambda) C'(lambda + gamma*mu) T_{mu+nu}.
    Terms are immutable after construction.
    """

    def __init__(self, n: int, gamma: float, dim: int,
                 terms: dict[WeightKey, Coefficient]):
        self.n = n
        self.gamma = gamma
        self.dim = dim
        self.terms = dict(terms)

    @classmethod
    def mult(cls, n: int, gamma: float, coeff) -> "DiffOp":
        """Pure multiplication operator (single zero-shift term)."""
        if isinstance(coeff, np.ndarray):
            mat = coeff
            fn = lambda lam: mat
            dim = mat.shape[0]
            return cls(n, gamma, dim, {WeightKey.zero(n): fn})
        probe_dim = getattr(coeff, "dim", None)
        if probe_dim is None:
            raise ValueError("callable coefficients need an explicit dim; "
                             "use mult_fn")
        return cls(n, gamma, probe_dim, {WeightKey.zero(n): coeff})

    @classmethod
    def mult_fn(cls, n: int, gamma: float, dim: int, fn: Coefficient) -> "DiffOp":
        return cls(n, gamma, dim, {WeightKey.zero(n): fn})

    @classmethod
    def identity(cls, n: int, gamma: float, dim: int) -> "DiffOp":
        eye = np.eye(dim, dtype=complex)
        return cls(n, gamma, dim, {WeightKey.zero(n): lambda lam: eye})

    def compose(self, other: "DiffOp") -> "DiffOp":
        """self after other."""
        terms: dict[WeightKey, list] = {}
        for mu, c in self.terms.items():
            for nu, cp in other.terms.items():
                terms.setdefault(mu + nu, []).append((mu, c, cp))
        out: dict[WeightKey, Coefficient] = {}
        for key, parts in terms.items():
            def coeff(lam, parts=parts):
                acc = None
                for mu, c, cp in parts:
                    val = c(lam) @ cp(lam.shifted(mu, self.gamma))
                    acc = val if acc is None else acc + val
                return acc
            out[key] = coeff
        return DiffOp(self.n, self.gamma, other.dim, out)

    def add(self, other: "DiffOp") -> "DiffOp":
        out: dict[WeightKey, Coefficient] = dict(self.terms)
        for key, cp in other.terms.items():
            if key in out:
                c = out[key]
                out[key] = lambda lam, c=c, cp=cp: c(lam) + cp(lam)
            else:
                out[key] = cp
        return DiffOp(self.n, self.gamma, self.dim, out)

    def scale(self, s: complex) -> "DiffOp":
        return DiffOp(self.n, self.gamma, self.dim,
                      {k: (lambda lam, c=c: s * c(lam))
                       for k, c in self.terms.items()})

    def apply(self, f: Callable[[WeightVector], np.ndarray],
              lam: WeightVector) -> np.ndarray:
        out = None
        for mu, c in self.terms.items():
            val = c(lam) @ f(lam.shifted(mu, self.gamma))
            out = val if out is None else out + val
        return out

    def embed(self, legs: Sequence[int], dims: Sequence[int]) -> "DiffOp":
        """Kronecker-embed every coefficient; shift keys are unchanged."""
        import math
        full = math.prod(dims)
        return DiffOp(self.n, self.gamma, full,
                      {k: (lambda lam, c=c: leg_embed(c(lam), legs, dims))
                       for k, c in self.terms.items()})

    def dyn_shifted(self, shift_legs: Sequence[int],
                    modules: Sequence[HModule], sign: int = -1) -> "DiffOp":
        """d(lambda + sign*gamma*h_L): the coefficient argument is shifted
        columnwise by the listed legs' weights; T keys are untouched."""
        legs = list(shift_legs)
        mods = list(modules)
        return DiffOp(self.n, self.gamma, self.dim,
                      {k: (lambda lam, c=c: dyn_columns(
                          c, legs, mods, lam, self.gamma, sign))
                       for k, c in self.terms.items()})

    def pruned(self, lams: Sequence[WeightVector],
               rel_tol: float = PRUNE_TOL) -> "DiffOp":
        norms = {k: max(float(np.max(np.abs(c(lam)))) for lam in lams)
                 for k, c in self.terms.items()}
        scale = max(norms.values(), default=0.0)
        keep = {k: c for k, c in self.terms.items()
                if norms[k] > rel_tol * scale}
        return DiffOp(self.n, self.gamma, self.dim, keep)

    def support(self, lams: Sequence[WeightVector],
                rel_tol: float = PRUNE_TOL) -> set[WeightKey]:
        return set(self.pruned(lams, rel_tol).terms)


def diffop_residual(a: DiffOp, b: DiffOp,
                    lams: Sequence[WeightVector]) -> float:
    """max over shift keys and lambda samples of
    ||C_a - C_b||_inf / (1 + ||C_b||_inf)."""
    zero_a = np.zeros((a.dim, a.dim), dtype=complex)
    worst = 0.0
    for key in set(a.terms) | set(b.terms):
        ca = a.terms.get(key)
        cb = b.terms.get(key)
        for lam in lams:
            va = ca(lam) if ca is not None else zero_a
            vb = cb(lam) if cb is not None else np.zeros_like(va)
            diff = float(np.max(np.abs(va - vb)))
            rel = diff / (1.0 + float(np.max(np.abs(vb))))
            worst = max(worst, rel)
    return worst


def proportionality(a: DiffOp, b: DiffOp, lams: Sequence[WeightVector],
                    floor: float = 1e-8) -> tuple[complex, float]:
    """Entrywise ratio a/b over common support and samples; returns the mean
    ratio and the ratio standard deviation (0 for exact proportionality)."""
    ratios = []
    for key in set(a.terms) & set(b.terms):
        for lam in lams:
            va = a.terms[key](lam).ravel()
            vb = b.terms[key](lam).ravel()
            scale = float(np.max(np.abs(vb)))
            mask = np.abs(vb) > floor * max(scale, 1.0)
            ratios.extend((va[mask] / vb[mask]).tolist())
    if not ratios:
        raise SingularFactorError("no overlapping support for ratio test")
    arr = np.array(ratios)
    return complex(arr.mean()), float(np.std(arr))


def shift_exp(sign: int, leg: int, modules: Sequence[HModule],
              gamma: float) -> DiffOp:
    """exp(sign*gamma*D_leg) = sum_mu P_mu T_{sign*mu}, with P_mu the
    projector onto the weight-mu block of the given leg."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    mods = list(modules)
    dims = [m.dim for m in mods]
    import math
    full = math.prod(dims)
    n = len(mods[leg].require_weights()[0].a)
    terms: dict[WeightKey, Coefficient] = {}
    for mu, idxs in mods[leg].weight_groups().items():
        proj = np.zeros((full, full), dtype=complex)
        after = math.prod(dims[leg + 1:])
        for flat in range(full):
            if (flat // after) % dims[leg] in idxs:
                proj[flat, flat] = 1.0
        key = mu if sign > 0 else -mu
        if key in terms:
            prev = terms[key]
            terms[key] = lambda lam, prev=prev, proj=proj: prev(lam) + proj
        else:
            terms[key] = lambda lam, proj=proj: proj
    return DiffOp(n, gamma, full, terms)


@dataclass(frozen=True)
class DBObject:
    """Pair (V, L(z)) with L(z) a DiffOp on C^n tensor V."""

    space: HModule
    L: Callable[[complex], DiffOp]
    n: int
    pole_lattices: tuple[complex, ...] = ()
    name: str = ""

    @property
    def dim(self) -> int:
        return self.n * self.space.dim


def twist(a: FObject, S: Callable[[complex, WeightVector], np.ndarray],
          Sp: Callable[[complex, WeightVector], np.ndarray],
          cfg: ModuliConfig, name: str = "") -> DBObject:
    """Difference twist S_1(z, l-g h_2) L(z, l) e^{-g D_1} S'_1(z, l)^{-1}.

    The e^{-g D_1} factor turns the product into one shift term per
    auxiliary index: the key -omega_i carries
    S_1(z, l-g h_2) L(z, l) (E_ii x 1) S'_1(z, l-g omega_i)^{-1}.
    """
    n = cfg.n
    space = a.space
    mods = [HModule.vector(n), space]
    dims = [n, space.dim]
    g = cfg.gamma

    def L(z: complex) -> DiffOp:
        def front(lam):
            s1 = lambda lv: leg_embed(S(z, lv), (0,), dims)
            return dyn_columns(s1, [1], mods, lam, g) @ a.eval(z, lam)

        terms: dict[WeightKey, Coefficient] = {}
        for i in range(n):
            proj = np.zeros((n, n), dtype=complex)
            proj[i, i] = 1.0
            proj = leg_embed(proj, (0,), dims)

            def coeff(lam, i=i, proj=proj):
                lam_i = lam.shifted(WeightKey.omega(n, i), -g)
                M = Sp(z, lam_i)
                try:
                    inv = np.linalg.inv(M)
                except np.linalg.LinAlgError as exc:
                    raise SingularFactorError(
                        f"twist factor singular at z={z}") from exc
                return front(lam) @ proj @ leg_embed(inv, (0,), dims)

            terms[-WeightKey.omega(n, i)] = coeff
        return DiffOp(n, g, n * space.dim, terms)

    return DBObject(space=space, L=L, n=n, pole_lattices=a.pole_lattices,
                    name=name or f"twist({a.name})")


def functor_F(a: FObject, cfg: ModuliConfig) -> DBObject:
    """Twist with the intertwining matrices S(z-x, l) and S(z-x-c, l)."""
    S = lambda z, lam: build_S(z - cfg.x, lam, cfg)
    Sp = lambda z, lam: build_S(z - cfg.x - cfg.c, lam, cfg)
    return twist(a, S, Sp, cfg, name=f"F({a.name})")


def canonical_I(cfg: ModuliConfig) -> DBObject:
    """Image of the trivial dynamical object: S(z-x,l) e^{-g D} S(z-x-c,l)^{-1}
    acting on functions of lambda valued in C^n."""
    obj = functor_F(trivial_F(cfg), cfg)
    return DBObject(space=obj.space, L=obj.L, n=obj.n,
                    pole_lattices=obj.pole_lattices, name="I")


def functor_H(b: BObject, cfg: ModuliConfig) -> DBObject:
    """I tensor b: L(z) = I_12(z) (L_b)_13(z), the z-only factor contributing
    lambda-constant coefficients."""
    n = cfg.n
    I = canonical_I(cfg)
    dims = [n, b.dim]
    space = HModule(b.dim, (WeightKey.zero(n),) * b.dim)

    def L(z: complex) -> DiffOp:
        head = I.L(z).embed((0,), dims)
        tail = DiffOp.mult(n, cfg.gamma, leg_embed(b.eval(z), (0, 1), dims))
        return head.compose(tail)

    return DBObject(space=space, L=L, n=n,
                    pole_lattices=I.pole_lattices + b.pole_lattices,
                    name=f"H({b.name})")


def check_E01_DB(a: DBObject, cfg: ModuliConfig, name: str,
                 rb: BelavinRMatrix | None = None,
                 tol: float | None = None,
                 lam_count: int = 3) -> ResidualReport:
    """RLL exchange relation in the difference-operator algebra:
    R12(z-w) L13(z) L23(w) = L23(w) L13(z) R12(z-w)."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    rb = rb or BelavinRMatrix(cfg)
    dims = [n, n, a.space.dim]
    lams = lambda_grid(cfg, count=lam_count, stream=41)
    points = sample_points(cfg, 2, a.pole_lattices + (cfg.gamma,), stream=42,
                           count=max(2, cfg.samples // 10))
    acc = ResidualAccumulator(name, tol, "R12 L13 L23 = L23 L13 R12 (DiffOp)")
    for p in points:
        z, w = p.z, p.w
        R12 = DiffOp.mult(n, cfg.gamma, leg_embed(rb(z - w), (0, 1), dims))
        L13 = a.L(z).embed((0, 2), dims)
        L23 = a.L(w).embed((1, 2), dims)
        lhs = R12.compose(L13).compose(L23)
        rhs = L23.compose(L13).compose(R12)
        acc.update_scalar(p.describe(), diffop_residual(lhs, rhs, lams))
    return acc.report()


def _lemma1_T(z: complex, w: complex, S, cfg: ModuliConfig
              ) -> Callable[[WeightVector], np.ndarray]:
    """T(z,w,l) = S2(w,l) S1(z,l-gh2) RF(z-w,l) [S2(w,l-gh1)]^-1 [S1(z,l)]^-1."""
    n = cfg.n
    vec = HModule.vector(n)
    mods = [vec, vec]
    dims = [n, n]
    s1 = lambda lv: leg_embed(S(z, lv), (0,), dims)
    s2 = lambda lv: leg_embed(S(w, lv), (1,), dims)

    def T(lam):
        mid = dyn_columns(s1, [1], mods, lam, cfg.gamma)
        right = np.linalg.inv(dyn_columns(s2, [0], mods, lam, cfg.gamma))
        return (s2(lam) @ mid @ build_RF(z - w, lam, cfg)
                @ right @ np.linalg.inv(s1(lam)))

    return T


def _lemma1_Tp(z: complex, w: complex, Sp, cfg: ModuliConfig
               ) -> Callable[[WeightVector], np.ndarray]:
    """T'(z,w,l) = S'1(z,l) S'2(w,l+gh1) RF(z-w,l) [S'1(z,l+gh2)]^-1
    [S'2(w,l)]^-1.  The third factor's shift reads the second leg: with the
    first-leg reading no lambda-independent specialization exists."""
    n = cfg.n
    vec = HModule.vector(n)
    mods = [vec, vec]
    dims = [n, n]
    s1 = lambda lv: leg_embed(Sp(z, lv), (0,), dims)
    s2 = lambda lv: leg_embed(Sp(w, lv), (1,), dims)

    def Tp(lam):
        mid = dyn_columns(s2, [0], mods, lam, cfg.gamma, sign=+1)
        right = np.linalg.inv(dyn_columns(s1, [1], mods, lam, cfg.gamma,
                                          sign=+1))
        return (s1(lam) @ mid @ build_RF(z - w, lam, cfg)
                @ right @ np.linalg.inv(s2(lam)))

    return Tp


def verify_lemma1(a: FObject, S, Sp, cfg: ModuliConfig,
                  name: str = "lemma1", tol: float | None = None,
                  lam_count: int = 3,
                  count: int | None = None) -> ResidualReport:
    """T12(z,w,l-gh3) L13(z) L23(w) = L23(w) L13(z) T'12(z,w,l) for the
    twisted operator L = L^{S,S'}."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    vec = HModule.vector(n)
    tw = twist(a, S, Sp, cfg)
    d = a.space.dim
    dims = [n, n, d]
    mods3 = [vec, vec, a.space]
    lams = lambda_grid(cfg, count=lam_count, stream=43)
    points = sample_points(cfg, 2, a.pole_lattices + (cfg.gamma,), stream=44,
                           count=count if count is not None
                           else max(2, cfg.samples // 10))
    acc = ResidualAccumulator(
        name, tol, "T12(l-gh3) L13 L23 = L23 L13 T'12 (DiffOp)")
    for p in points:
        z, w = p.z, p.w
        Tfun = _lemma1_T(z, w, S, cfg)
        Tpfun = _lemma1_Tp(z, w, Sp, cfg)
        T12 = DiffOp.mult_fn(
            n, cfg.gamma, n * n * d,
            lambda lam: dyn_columns(
                lambda lv: leg_embed(Tfun(lv), (0, 1), dims),
                [2], mods3, lam, cfg.gamma))
        Tp12 = DiffOp.mult_fn(
            n, cfg.gamma, n * n * d,
            lambda lam: leg_embed(Tpfun(lam), (0, 1), dims))
        L13 = tw.L(z).embed((0, 2), dims)
        L23 = tw.L(w).embed((1, 2), dims)
        lhs = T12.compose(L13).compose(L23)
        rhs = L23.compose(L13).compose(Tp12)
        acc.update_scalar(p.describe(), diffop_residual(lhs, rhs, lams))
    return acc.report()


def morphism_check_DB(a: DBObject, b: DBObject, psi: DiffOp,
                      cfg: ModuliConfig, name: str = "morphism-check-db",
                      tol: float | None = None,
                      lam_count: int = 3,
                      count: int | None = None) -> ResidualReport:
    """(1 x psi) L_a(z) = L_b(z) (1 x psi) in the difference-operator
    algebra.  psi may itself carry shifts."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    dims = [n, a.space.dim]
    lams = lambda_grid(cfg, count=lam_count, stream=45)
    points = sample_points(cfg, 1, a.pole_lattices + b.pole_lattices,
                           stream=46,
                           count=count if count is not None
                           else max(2, cfg.samples // 10))
    psi2 = psi.embed((1,), dims)
    acc = ResidualAccumulator(name, tol, "(1 x psi) L = L' (1 x psi)")
    for p in points:
        lhs = psi2.compose(a.L(p.z))
        rhs = b.L(p.z).compose(psi2)
        acc.update_scalar(p.describe(), diffop_residual(lhs, rhs, lams))
    return acc.report()


def tilde_of(matfun: Callable[[WeightVector], np.ndarray], n: int,
             gamma: float) -> DiffOp:
    """e^{-g D} M(l) e^{g D} on C^n: the (i,j) entry becomes
    M_ij(l - g omega_i) E_ij T_{omega_j - omega_i}."""
    terms: dict[WeightKey, Coefficient] = {}
    entries: dict[WeightKey, list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(n):
            key = WeightKey.omega(n, j) - WeightKey.omega(n, i)
            entries.setdefault(key, []).append((i, j))
    for key, pairs in entries.items():
        def coeff(lam, pairs=pairs):
            out = np.zeros((n, n), dtype=complex)
            for i, j in pairs:
                M = matfun(lam.shifted(WeightKey.omega(n, i), -gamma))
                out[i, j] = M[i, j]
            return out
        terms[key] = coeff
    return DiffOp(n, gamma, n, terms)


def tilde_S(z: complex, cfg: ModuliConfig, inverse: bool = False) -> DiffOp:
    """tilde(S)(z) = e^{-g D} S(z, l) e^{g D}; with ``inverse`` the matrix is
    inverted before conjugation, giving the exact operator inverse."""
    def matfun(lam):
        M = build_S(z, lam, cfg)
        if inverse:
            try:
                return np.linalg.inv(M)
            except np.linalg.LinAlgError as exc:
                raise SingularFactorError(f"S singular at z={z}") from exc
        return M
    return tilde_of(matfun, cfg.n, cfg.gamma)


def untilde(d: DiffOp, lams: Sequence[WeightVector]) -> Callable[[WeightVector], np.ndarray]:
    """Recover the conjugated matrix function from a tilde-structured DiffOp.
    Raises when the support or entry pattern does not match the conjugation
    form."""
    n = d.dim
    gamma = d.gamma
    allowed: dict[WeightKey, list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(n):
            key = WeightKey.omega(n, j) - WeightKey.omega(n, i)
            allowed.setdefault(key, []).append((i, j))
    live = d.support(lams)
    if not live <= set(allowed):
        raise WeightError(f"support {live} is not of conjugation type")
    for key, c in d.terms.items():
        mask = np.ones((n, n), dtype=bool)
        for i, j in allowed.get(key, []):
            mask[i, j] = False
        for lam in lams:
            val = c(lam)
            if np.max(np.abs(val[mask]), initial=0.0) > PRUNE_TOL * (
                    1.0 + np.max(np.abs(val))):
                raise WeightError("entry pattern is not of conjugation type")

    def matfun(lam):
        out = np.zeros((n, n), dtype=complex)
        for key, pairs in allowed.items():
            c = d.terms.get(key)
            if c is None:
                continue
            for i, j in pairs:
                out[i, j] = c(lam.shifted(WeightKey.omega(n, i), gamma))[i, j]
        return out

    return matfun


def diffop_inverse(d: DiffOp, lams: Sequence[WeightVector]) -> DiffOp:
    """Inverse of a DiffOp when its structure supports one: a single shift
    term is inverted directly, a conjugation-type operator through the
    recovered matrix.  Anything else is reported as an error."""
    live = d.pruned(lams)
    if len(live.terms) == 1:
        ((mu, c),) = live.terms.items()
        def coeff(lam):
            return np.linalg.inv(c(lam.shifted(mu, -d.gamma)))
        return DiffOp(d.n, d.gamma, d.dim, {-mu: coeff})
    matfun = untilde(live, lams)
    return tilde_of(lambda lam: np.linalg.inv(matfun(lam)), d.dim, d.gamma)


def prop4_intertwiner(w: complex, cfg: ModuliConfig) -> DiffOp:
    """phi = e^{-g D} S(w-x-c, l)^{-1}, the intertwiner
    H(V_B(w)) -> F(twisted V_F(w)).

    The operator is a half-conjugation: multiplication by the inverse of
    S followed by the backward shift exponential, so the shift support is
    {-omega_i} and the coefficient at -omega_i is E_ii S^{-1}(l - g omega_i)
    (row i of the shifted inverse)."""
    u = w - cfg.x - cfg.c
    if lattice_distance(u, cfg.tau) < cfg.exclusion:
        raise SingularFactorError(
            f"w - x - c = {u} lies on the lattice where S is singular")
    n = cfg.n
    vec = HModule.vector(n)
    mult = DiffOp.mult_fn(n, cfg.gamma, n,
                          lambda lam: np.linalg.inv(build_S(u, lam, cfg)))
    return shift_exp(-1, 0, [vec], cfg.gamma).compose(mult)


def canonical_intertwiner(ws: Sequence[complex], cfg: ModuliConfig) -> DiffOp:
    """phi_{1..r} = phi_r on leg r ... phi_1 on leg 1, each factor the
    single-leg intertwiner of ``prop4_intertwiner``.  No extra dynamical
    shift is inserted between the factors: each factor's own shift
    exponential already moves lambda by the weight of its leg, which is
    exactly the shift the later factors must see."""
    n = cfg.n
    r = len(ws)
    dims = [n] * r
    out = None
    for k, w in enumerate(ws):
        factor = prop4_intertwiner(w, cfg).embed((k,), dims)
        out = factor if out is None else factor.compose(out)
    return out


def tensor_intertwiners(phi: DiffOp, phi_p: DiffOp) -> DiffOp:
    """phi x phi' on the tensor product of the two domains: phi' on the
    second block after phi on the first.  The factors carry their own shift
    operators, which is what makes the plain composition a morphism on the
    tensor product."""
    dims = [phi.dim, phi_p.dim]
    first = phi.embed((0,), dims)
    second = phi_p.embed((1,), dims)
    return second.compose(first)


def check_I_structure(cfg: ModuliConfig, name: str = "I-structure",
                      tol: float | None = None,
                      lam_count: int = 4) -> ResidualReport:
    """The canonical object's L(z) must have shift support exactly
    {-omega_1, .., -omega_n} with a rank-one coefficient per key (one shift
    term per matrix entry in the scalar picture)."""
    tol = cfg.tol if tol is None else tol
    n = cfg.n
    I = canonical_I(cfg)
    lams = lambda_grid(cfg, count=lam_count, stream=47)
    zs = [p.z for p in sample_points(cfg, 1, (cfg.x, cfg.x + cfg.c),
                                     stream=48, count=4)]
    expected = {-WeightKey.omega(n, i) for i in range(n)}
    acc = ResidualAccumulator(name, tol,
                              "support {-omega_i}, rank-1 coefficients")
    for z in zs:
        op = I.L(z)
        sup = op.support(lams)
        support_pen = 0.0 if sup == expected else 1.0
        rank_pen = 0.0
        for key, c in op.pruned(lams).terms.items():
            for lam in lams:
                s = np.linalg.svd(c(lam), compute_uv=False)
                if len(s) > 1:
                    rank_pen = max(rank_pen, s[1] / (1.0 + s[0]))
        acc.update_scalar({"z": z}, support_pen + rank_pen)
    return acc.report()


def random_diffop(n: int, gamma: float, dim: int,
                  rng: np.random.Generator, n_terms: int = 2) -> DiffOp:
    """Random finite difference operator, for negative controls and algebra
    oracles."""
    terms: dict[WeightKey, Coefficient] = {}
    for _ in range(n_terms):
        key = WeightKey(tuple(int(v) for v in rng.integers(-1, 2, size=n)))
        base = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        freq = rng.standard_normal(n)
        def coeff(lam, base=base, freq=freq):
            phase = np.exp(2j * np.pi * np.real(
                np.dot(freq, np.asarray(lam.coords))))
            return phase * base
        if key in terms:
            prev = terms[key]
            terms[key] = lambda lam, prev=prev, c=coeff: prev(lam) + c(lam)
        else:
            terms[key] = coeff
    return DiffOp(n, gamma, dim, terms)
