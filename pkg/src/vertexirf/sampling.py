"""Seeded sampling of spectral/dynamical points and the residual report type.

Sample i is generated from an independent stream derived from (seed, tag, i),
so evaluation order (or parallelism) cannot change the draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import ModuliConfig
from .errors import SamplingError
from .theta import lattice_distance
from .weights import WeightVector

_REJECT_BUDGET = 2000


@dataclass(frozen=True)
class SamplePoint:
    z: complex
    w: complex | None
    lam: WeightVector

    def describe(self) -> dict:
        d = {"z": self.z, "lambda": list(self.lam.coords)}
        if self.w is not None:
            d["w"] = self.w
        return d


@dataclass
class ResidualReport:
    """Outcome of one identity check over sampled points."""

    check_name: str
    samples: int
    max_abs: float
    max_rel: float
    worst_point: dict
    tol: float
    identity: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_rel < self.tol)


class ResidualAccumulator:
    """max over samples of ||lhs - rhs||_inf / (1 + ||rhs||_inf)."""

    def __init__(self, check_name: str, tol: float, identity: str = ""):
        self.check_name = check_name
        self.tol = tol
        self.identity = identity
        self.max_abs = 0.0
        self.max_rel = 0.0
        self.worst_point: dict = {}
        self.count = 0

    def update(self, point_desc: dict, lhs, rhs) -> None:
        diff = float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs))))
        scale = 1.0 + float(np.max(np.abs(np.asarray(rhs))))
        rel = diff / scale
        self.count += 1
        if diff > self.max_abs:
            self.max_abs = diff
        if rel >= self.max_rel:
            self.max_rel = rel
            self.worst_point = dict(point_desc)

    def update_scalar(self, point_desc: dict, value: float, scale: float = 1.0) -> None:
        value = float(value)
        self.count += 1
        rel = value / (1.0 + scale)
        if value > self.max_abs:
            self.max_abs = value
        if rel >= self.max_rel:
            self.max_rel = rel
            self.worst_point = dict(point_desc)

    def report(self, samples: int | None = None) -> ResidualReport:
        return ResidualReport(
            check_name=self.check_name,
            samples=self.count if samples is None else samples,
            max_abs=self.max_abs,
            max_rel=self.max_rel,
            worst_point=self.worst_point,
            tol=self.tol,
            identity=self.identity,
        )


def _rng(seed: int, tag: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**63 - 1), tag, index]))


def _draw_cell(rng: np.random.Generator, size: float, tau: complex) -> complex:
    a, b = rng.uniform(0.0, size, size=2)
    return complex(a + b * tau)


def _ok_spectral(u: complex, tau: complex, delta: float,
                 pole_lattices: Sequence[complex]) -> bool:
    return all(lattice_distance(u - off, tau) >= delta for off in pole_lattices)


def _draw_lambda(rng: np.random.Generator, cfg: ModuliConfig,
                 lam_offsets: Sequence[complex]) -> WeightVector | None:
    a = rng.uniform(0.0, 1.0, size=cfg.n)
    b = rng.uniform(0.0, 1.0, size=cfg.n)
    coords = a + b * cfg.tau
    coords = coords - coords.mean()
    for i in range(cfg.n):
        for j in range(cfg.n):
            if i == j:
                continue
            d = coords[i] - coords[j]
            for off in lam_offsets:
                if lattice_distance(d - off, cfg.tau) < cfg.exclusion:
                    return None
    return WeightVector.from_array(coords)


def default_lambda_offsets(cfg: ModuliConfig, depth: int = 3) -> list[complex]:
    """Keep lambda_i - lambda_j away from k*gamma + Z + tau*Z for |k| <= depth,
    so gamma-shifted evaluations stay well-conditioned."""
    return [k * cfg.gamma for k in range(-depth, depth + 1)]


def sample_points(cfg: ModuliConfig,
                  arity: int,
                  pole_lattices: Sequence[complex] = (),
                  count: int | None = None,
                  stream: int = 0,
                  lam_offsets: Sequence[complex] | None = None,
                  check_diff: bool = True,
                  cell: float | None = None) -> list[SamplePoint]:
    """Deterministic seeded samples: z (and w for arity 2) uniform in the
    cell {a + b*tau : a, b in [0, cell)} (cell defaults to n), redrawn while
    within the exclusion distance of any declared pole lattice; lambda drawn
    in a unit box per coordinate and projected to sum zero."""
    if arity not in (1, 2):
        raise ValueError("arity must be 1 or 2")
    if lam_offsets is None:
        lam_offsets = default_lambda_offsets(cfg)
    size = float(cfg.n if cell is None else cell)
    total = cfg.samples if count is None else count
    pts = []
    for i in range(total):
        rng = _rng(cfg.seed, stream, i)
        for _ in range(_REJECT_BUDGET):
            z = _draw_cell(rng, size, cfg.tau)
            if not _ok_spectral(z, cfg.tau, cfg.exclusion, pole_lattices):
                continue
            w = None
            if arity == 2:
                w = _draw_cell(rng, size, cfg.tau)
                if not _ok_spectral(w, cfg.tau, cfg.exclusion, pole_lattices):
                    continue
                if check_diff and not _ok_spectral(z - w, cfg.tau, cfg.exclusion,
                                                   pole_lattices):
                    continue
            lam = _draw_lambda(rng, cfg, lam_offsets)
            if lam is None:
                continue
            pts.append(SamplePoint(z=z, w=w, lam=lam))
            break
        else:
            raise SamplingError(
                f"rejection budget exceeded for sample {i} (stream {stream})"
            )
    return pts


def lambda_grid(cfg: ModuliConfig, count: int = 5, stream: int = 97) -> list[WeightVector]:
    """Small generic lambda grid for pruning / coefficient comparison."""
    lams = []
    offsets = default_lambda_offsets(cfg)
    for i in range(count):
        rng = _rng(cfg.seed, stream, i)
        for _ in range(_REJECT_BUDGET):
            lam = _draw_lambda(rng, cfg, offsets)
            if lam is not None:
                lams.append(lam)
                break
        else:
            raise SamplingError("rejection budget exceeded for lambda grid")
    return lams
