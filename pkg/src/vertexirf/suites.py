"""Named verification suites: each suite is an ordered list of checks, each
check runs one residual verification and yields one or more reports."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .belavin import (BelavinRMatrix, check_reference_independence,
                      check_rll_B, check_z_periodicity,
                      diagonal_solution_converse, dual_B, tensor_B,
                      vector_rep_B, verify_belavin_properties)
from .config import ModuliConfig
from .diffops import (DiffOp, canonical_I, canonical_intertwiner,
                      check_E01_DB, check_I_structure, functor_F, functor_H,
                      morphism_check_DB, proportionality, prop4_intertwiner,
                      tensor_intertwiners, verify_lemma1)
from .errors import SingularFactorError
from .felder import (build_RF, check_lambda_periodicity, check_rll_F,
                     check_unitarity_F, check_weight_zero, dual_F,
                     morphism_check_F, tensor_F, trivial_F, vector_rep_F,
                     verify_dqybe)
from .irf import build_S, check_det_ratio, verify_irf_components, verify_vertex_irf
from .sampling import (ResidualAccumulator, ResidualReport, _rng, lambda_grid,
                       sample_points)
from .tensorlegs import permutation_matrix
from .theta import theta, theta_char

# Generic spectral parameters used by the representation-level checks when the
# caller does not override them; the fifth entry keeps the single-object
# intertwiner check at five distinct points.
DEFAULT_WS = (0.23 + 0.31j, 0.87 + 0.64j, 1.41 + 0.19j,
              0.55 + 0.95j, 1.07 + 0.42j)

_THETA_MONO_STREAM = 61
_THETA_SHIFT_STREAM = 63


@dataclass(frozen=True)
class SuiteSpec:
    """Named ordered list of check identifiers."""

    name: str
    checks: tuple[str, ...]
    description: str = ""


@dataclass
class RunReport:
    """Config echo plus per-check reports and timings."""

    config: ModuliConfig
    ws: tuple[complex, ...]
    suite: str
    reports: list[ResidualReport] = field(default_factory=list)
    timings_ms: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


class _RunContext:
    """Shared per-run state: the spectral parameters and a memoized vertex
    R-matrix evaluator (its cache makes repeated suites affordable)."""

    def __init__(self, cfg: ModuliConfig, ws: Sequence[complex]):
        self.cfg = cfg
        self.ws = tuple(ws)
        self._rb: BelavinRMatrix | None = None

    @property
    def rb(self) -> BelavinRMatrix:
        if self._rb is None:
            self._rb = BelavinRMatrix(self.cfg)
        return self._rb


# ---------------------------------------------------------------------------
# theta checks

def _check_theta_monodromy(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    acc1 = ResidualAccumulator("theta-monodromy-1", 1e-9,
                               "theta_k(t+1) = e^{2 i pi k} theta_k(t)")
    acc2 = ResidualAccumulator("theta-monodromy-tau", 1e-9,
                               "theta_k(t+tau) = e^{-i pi tau - 2 i pi (t+k')}"
                               " theta_k(t)")
    for i in range(cfg.samples):
        rng = _rng(cfg.seed, _THETA_MONO_STREAM, i)
        ka, kp = rng.uniform(0.0, 1.0, size=2)
        t = complex(rng.uniform(-1.0, 1.0) + rng.uniform(-1.0, 1.0) * cfg.tau)
        base = theta_char(ka, kp, t, cfg.tau, cfg.series_tol)
        lhs1 = theta_char(ka, kp, t + 1.0, cfg.tau, cfg.series_tol)
        acc1.update({"t": t, "kappa": ka, "kappa_prime": kp},
                    lhs1, np.exp(2j * np.pi * ka) * base)
        lhs2 = theta_char(ka, kp, t + cfg.tau, cfg.tau, cfg.series_tol)
        fac = np.exp(-1j * np.pi * cfg.tau - 2j * np.pi * (t + kp))
        acc2.update({"t": t, "kappa": ka, "kappa_prime": kp}, lhs2, fac * base)
    return [acc1.report(), acc2.report()]


def _check_theta_shift(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    acc = ResidualAccumulator(
        "theta-characteristic-shift", 1e-9,
        "theta_{k1+k2,k1'+k2'}(t) = e^{i pi k2^2 tau + 2 i pi k2 (t+k1'+k2')}"
        " theta_{k1,k1'}(t + k2 tau + k2')")
    for i in range(max(20, cfg.samples // 5)):
        rng = _rng(cfg.seed, _THETA_SHIFT_STREAM, i)
        k1, k2, p1, p2 = rng.uniform(-1.0, 1.0, size=4)
        t = complex(rng.uniform(-1.0, 1.0) + rng.uniform(-1.0, 1.0) * cfg.tau)
        lhs = theta_char(k1 + k2, p1 + p2, t, cfg.tau, cfg.series_tol)
        fac = np.exp(1j * np.pi * k2 * k2 * cfg.tau
                     + 2j * np.pi * k2 * (t + p1 + p2))
        rhs = fac * theta_char(k1, p1, t + k2 * cfg.tau + p2, cfg.tau,
                               cfg.series_tol)
        acc.update({"t": t, "k1": k1, "k2": k2, "p1": p1, "p2": p2}, lhs, rhs)
    return [acc.report()]


def _check_theta_zeros(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    acc = ResidualAccumulator("theta-lattice-zeros", 1e-9,
                              "theta(m + k tau) = 0 on the lattice")
    for m in (-1, 0, 1):
        for k in (-1, 0, 1):
            u = m + k * cfg.tau
            acc.update_scalar({"m": m, "k": k},
                              abs(theta(u, cfg)), scale=0.0)
    return [acc.report()]


# ---------------------------------------------------------------------------
# dynamical R-matrix checks

def _check_felder_core(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    return [check_unitarity_F(cfg),
            verify_dqybe(cfg)]


def _check_felder_r0(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    P = permutation_matrix(cfg.n)
    acc = ResidualAccumulator("felder-r0", 1e-9, "R(0, lambda) = P")
    for lam in lambda_grid(cfg, count=10, stream=64):
        acc.update({"lambda": list(lam.coords)}, build_RF(0.0, lam, cfg), P)
    return [acc.report()]


def _check_felder_objects(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    w1, w2 = ctx.ws[0], ctx.ws[1]
    v1 = vector_rep_F(w1, cfg)
    return [check_weight_zero(v1, cfg, "felder-weight-zero"),
            check_lambda_periodicity(v1, cfg, "felder-lambda-periodicity"),
            check_rll_F(v1, cfg, "felder-rll-vector")]


def _check_felder_tensor_dual(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    w1, w2 = ctx.ws[0], ctx.ws[1]
    v1, v2 = vector_rep_F(w1, cfg), vector_rep_F(w2, cfg)
    return [check_rll_F(tensor_F(v1, v2, cfg), cfg, "felder-rll-tensor"),
            check_rll_F(dual_F(v1, cfg), cfg, "felder-rll-dual")]


# ---------------------------------------------------------------------------
# vertex R-matrix checks

def _check_belavin_reference(ctx: _RunContext) -> list[ResidualReport]:
    return [check_reference_independence(ctx.cfg)]


def _check_belavin_properties(ctx: _RunContext) -> list[ResidualReport]:
    return verify_belavin_properties(ctx.cfg, rb=ctx.rb)


def _diagonal_converse_data(d: int, n: int):
    rng = np.random.default_rng(np.random.SeedSequence([2023, d, n]))
    V = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Vi = np.linalg.inv(V)
    X = V @ np.diag(np.exp(2j * np.pi * np.arange(d) / n)) @ Vi
    D1 = V @ np.diag(rng.standard_normal(d)
                     + 1j * rng.standard_normal(d)) @ Vi
    return X, D1


def _check_belavin_converse(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    X, D1 = _diagonal_converse_data(2, cfg.n)
    return [diagonal_solution_converse(cfg, X, D1, rb=ctx.rb)]


def _check_belavin_objects(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    w1, w2 = ctx.ws[0], ctx.ws[1]
    v1 = vector_rep_B(w1, cfg, rb=ctx.rb)
    v2 = vector_rep_B(w2, cfg, rb=ctx.rb)
    return [check_z_periodicity(v1, cfg, "belavin-z-periodicity"),
            check_rll_B(tensor_B(v1, v2, cfg), cfg, "belavin-rll-tensor",
                        rb=ctx.rb),
            check_rll_B(dual_B(v1, cfg), cfg, "belavin-rll-dual", rb=ctx.rb)]


# ---------------------------------------------------------------------------
# vertex-face exchange checks

def _check_irf_relations(ctx: _RunContext) -> list[ResidualReport]:
    return verify_vertex_irf(ctx.cfg, rb=ctx.rb)


def _check_irf_components(ctx: _RunContext) -> list[ResidualReport]:
    return verify_irf_components(ctx.cfg, rb=ctx.rb)


def _check_irf_det(ctx: _RunContext) -> list[ResidualReport]:
    return [check_det_ratio(ctx.cfg)]


# ---------------------------------------------------------------------------
# difference-twist checks

def _functor_pair(cfg: ModuliConfig):
    S = lambda z, lam: build_S(z - cfg.x, lam, cfg)
    Sp = lambda z, lam: build_S(z - cfg.x - cfg.c, lam, cfg)
    return S, Sp


def _check_lemma1(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    S, Sp = _functor_pair(cfg)
    return [
        verify_lemma1(vector_rep_F(ctx.ws[0], cfg), S, Sp, cfg,
                      name="lemma1-vector"),
        verify_lemma1(trivial_F(cfg), S, Sp, cfg, name="lemma1-trivial"),
    ]


def _check_functor_images(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    w = ctx.ws[0]
    return [
        check_E01_DB(functor_F(vector_rep_F(w, cfg), cfg), cfg,
                     "e01-functor-F", rb=ctx.rb),
        check_E01_DB(functor_H(vector_rep_B(w, cfg, rb=ctx.rb), cfg), cfg,
                     "e01-functor-H", rb=ctx.rb),
        check_E01_DB(canonical_I(cfg), cfg, "e01-canonical-I", rb=ctx.rb),
    ]


def _check_I_shape(ctx: _RunContext) -> list[ResidualReport]:
    return [check_I_structure(ctx.cfg)]


def _check_functoriality(ctx: _RunContext) -> list[ResidualReport]:
    """A scalar endomorphism of a vector object stays a morphism after the
    twist functor is applied."""
    cfg = ctx.cfg
    w = ctx.ws[0]
    a = vector_rep_F(w, cfg)
    scalar = 0.7 + 0.2j
    phi = lambda lam: scalar * np.eye(cfg.n, dtype=complex)
    rep_flat = morphism_check_F(a, a, phi, cfg, name="functoriality-flat")
    fa = functor_F(a, cfg)
    psi = DiffOp.mult(cfg.n, cfg.gamma,
                      scalar * np.eye(cfg.n, dtype=complex))
    rep_tw = morphism_check_DB(fa, fa, psi, cfg, name="functoriality-twisted")
    return [rep_flat, rep_tw]


# ---------------------------------------------------------------------------
# intertwiner checks

def _check_prop4(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    acc = ResidualAccumulator("intertwiner-single", cfg.tol,
                              "psi L_H = L_F psi for the single-leg psi")
    for w in ctx.ws[:5]:
        src = functor_H(vector_rep_B(w, cfg, rb=ctx.rb), cfg)
        dst = functor_F(vector_rep_F(w, cfg, twisted=True), cfg)
        rep = morphism_check_DB(src, dst, prop4_intertwiner(w, cfg), cfg,
                                count=3)
        acc.update_scalar({"w": w}, rep.max_rel)
    return [acc.report()]


def _check_prop4_singular(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    acc = ResidualAccumulator("intertwiner-singularity", 0.5,
                              "construction rejects w on the singular lattice")
    try:
        prop4_intertwiner(cfg.x + cfg.c, cfg)
        acc.update_scalar({"w": cfg.x + cfg.c}, 1.0, scale=0.0)
    except SingularFactorError:
        acc.update_scalar({"w": cfg.x + cfg.c}, 0.0, scale=0.0)
    return [acc.report()]


def _multi_pair(ctx: _RunContext, r: int):
    cfg = ctx.cfg
    ws = ctx.ws[:r]
    vb = vector_rep_B(ws[0], cfg, rb=ctx.rb)
    vf = vector_rep_F(ws[0], cfg, twisted=True)
    for w in ws[1:]:
        vb = tensor_B(vb, vector_rep_B(w, cfg, rb=ctx.rb), cfg)
        vf = tensor_F(vf, vector_rep_F(w, cfg, twisted=True), cfg)
    return functor_H(vb, cfg), functor_F(vf, cfg), ws


def _check_canonical(ctx: _RunContext, r: int, tol: float,
                     name: str) -> list[ResidualReport]:
    cfg = ctx.cfg
    src, dst, ws = _multi_pair(ctx, r)
    psi = canonical_intertwiner(ws, cfg)
    return [morphism_check_DB(src, dst, psi, cfg, name=name, tol=tol,
                              count=2)]


def _check_canonical_r2(ctx: _RunContext) -> list[ResidualReport]:
    return _check_canonical(ctx, 2, ctx.cfg.tol, "intertwiner-r2")


def _check_canonical_r3(ctx: _RunContext) -> list[ResidualReport]:
    return _check_canonical(ctx, 3, max(ctx.cfg.tol, 1e-7), "intertwiner-r3")


def _check_tensor_vs_canonical(ctx: _RunContext) -> list[ResidualReport]:
    cfg = ctx.cfg
    w1, w2 = ctx.ws[0], ctx.ws[1]
    comp = tensor_intertwiners(prop4_intertwiner(w1, cfg),
                               prop4_intertwiner(w2, cfg))
    canon = canonical_intertwiner([w1, w2], cfg)
    lams = lambda_grid(cfg, count=4, stream=66)
    tol = max(cfg.tol, 1e-7)
    acc = ResidualAccumulator("intertwiner-tensor-vs-canonical", tol,
                              "tensor composite proportional to the product")
    mean, std = proportionality(comp.pruned(lams), canon.pruned(lams), lams)
    acc.update_scalar({"mean_ratio": mean}, std, scale=0.0)
    return [acc.report()]


def _check_intertwiner_negative(ctx: _RunContext) -> list[ResidualReport]:
    """Dropping the shift factor from the single-leg intertwiner must break
    the morphism property by a wide margin."""
    cfg = ctx.cfg
    w = ctx.ws[0]
    src = functor_H(vector_rep_B(w, cfg, rb=ctx.rb), cfg)
    dst = functor_F(vector_rep_F(w, cfg, twisted=True), cfg)
    u = w - cfg.x - cfg.c
    bad = DiffOp.mult_fn(cfg.n, cfg.gamma, cfg.n,
                         lambda lam: np.linalg.inv(build_S(u, lam, cfg)))
    rep = morphism_check_DB(src, dst, bad, cfg, count=2)
    acc = ResidualAccumulator("intertwiner-negative-control", 0.5,
                              "shift-free candidate fails the morphism check")
    acc.update_scalar({"w": w, "bad_residual": rep.max_rel},
                      0.0 if rep.max_rel > 1e-3 else 1.0, scale=0.0)
    return [acc.report()]


# ---------------------------------------------------------------------------
# registry

CHECKS: dict[str, Callable[[_RunContext], list[ResidualReport]]] = {
    "theta-monodromy": _check_theta_monodromy,
    "theta-shift": _check_theta_shift,
    "theta-zeros": _check_theta_zeros,
    "felder-core": _check_felder_core,
    "felder-r0": _check_felder_r0,
    "felder-objects": _check_felder_objects,
    "felder-tensor-dual": _check_felder_tensor_dual,
    "belavin-reference": _check_belavin_reference,
    "belavin-properties": _check_belavin_properties,
    "belavin-converse": _check_belavin_converse,
    "belavin-objects": _check_belavin_objects,
    "irf-relations": _check_irf_relations,
    "irf-components": _check_irf_components,
    "irf-det": _check_irf_det,
    "lemma1": _check_lemma1,
    "functor-images": _check_functor_images,
    "I-structure": _check_I_shape,
    "functoriality": _check_functoriality,
    "intertwiner-single": _check_prop4,
    "intertwiner-singularity": _check_prop4_singular,
    "intertwiner-r2": _check_canonical_r2,
    "intertwiner-r3": _check_canonical_r3,
    "intertwiner-tensor": _check_tensor_vs_canonical,
    "intertwiner-negative": _check_intertwiner_negative,
}

_SUITE_DEFS = [
    SuiteSpec("theta", ("theta-monodromy", "theta-shift", "theta-zeros"),
              "theta monodromy, characteristic shift and lattice zeros"),
    SuiteSpec("felder", ("felder-core", "felder-r0", "felder-objects",
                         "felder-tensor-dual"),
              "dynamical R-matrix and its representation category"),
    SuiteSpec("belavin", ("belavin-reference", "belavin-properties",
                          "belavin-converse", "belavin-objects"),
              "vertex R-matrix defining properties and category"),
    SuiteSpec("vertex-irf", ("irf-relations", "irf-components", "irf-det"),
              "vertex-face exchange relations"),
    SuiteSpec("lemma1", ("lemma1",),
              "difference-twist exchange relation"),
    SuiteSpec("functors", ("functor-images", "I-structure", "functoriality"),
              "twist functors and the canonical object"),
    SuiteSpec("intertwiners", ("intertwiner-single", "intertwiner-singularity",
                               "intertwiner-r2", "intertwiner-r3",
                               "intertwiner-tensor", "intertwiner-negative"),
              "explicit intertwiners between the functor images"),
]
_SUITE_DEFS.append(
    SuiteSpec("full", tuple(c for s in _SUITE_DEFS for c in s.checks),
              "every check of every suite"))

SUITES: dict[str, SuiteSpec] = {s.name: s for s in _SUITE_DEFS}


def list_suites() -> list[SuiteSpec]:
    return list(_SUITE_DEFS)


def run_suite(suite: SuiteSpec | str, cfg: ModuliConfig,
              ws: Sequence[complex] | None = None) -> RunReport:
    """Run the suite's checks in order and collect their reports.  Results
    are deterministic for a fixed (config, ws) pair."""
    if isinstance(suite, str):
        if suite not in SUITES:
            raise KeyError(f"unknown suite {suite!r}; "
                           f"available: {sorted(SUITES)}")
        suite = SUITES[suite]
    ws = tuple(ws) if ws else DEFAULT_WS
    if len(ws) < 5:
        ws = ws + DEFAULT_WS[len(ws):]
    unknown = [c for c in suite.checks if c not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks in suite {suite.name}: {unknown}")
    ctx = _RunContext(cfg, ws)
    out = RunReport(config=cfg, ws=ws, suite=suite.name)
    for check in suite.checks:
        t0 = time.perf_counter()
        reports = CHECKS[check](ctx)
        ms = (time.perf_counter() - t0) * 1000.0
        share = ms / max(1, len(reports))
        for rep in reports:
            out.reports.append(rep)
            out.timings_ms.append(share)
    return out
