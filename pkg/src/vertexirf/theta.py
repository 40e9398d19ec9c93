"""Theta functions with characteristics and the scalar functions built on them.

All evaluators truncate the defining series symmetrically around the index
where the Gaussian term magnitude peaks, with the half-width chosen from the
analytic tail bound, so results are deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .config import ModuliConfig
from .errors import ConvergenceError, DomainError, PoleError

M_CAP = 200  # hard cap on the truncation half-width


class ThetaCharacteristics(NamedTuple):
    kappa: float
    kappa_prime: float


def _half_width(b: float, y_max: float, series_tol: float) -> int:
    # Term magnitude is exp(-pi*b*s^2 - 2*pi*s*y) with s = m + kappa; the
    # peak sits at s = -y/b with magnitude exp(pi*y^2/b).  Offsetting by k
    # from the peak decays like exp(-pi*b*k^2), so the absolute tail is below
    # series_tol once pi*b*(M-1)^2 beats the peak exponent plus a margin.
    budget = math.pi * y_max * y_max / b + math.log(1.0 / series_tol) + 3.0
    m = int(math.ceil(math.sqrt(budget / (math.pi * b)))) + 2
    if m > M_CAP:
        raise ConvergenceError(
            f"theta truncation half-width {m} exceeds cap {M_CAP} "
            f"(|Im t| up to {y_max:.3g})"
        )
    return m


def theta_char(kappa: float, kappa_prime: float, t, tau: complex,
               series_tol: float = 1e-12, half_width: int | None = None):
    """Theta with characteristics: sum over m of
    exp(i*pi*(m+kappa)*((m+kappa)*tau + 2*(t+kappa'))).

    ``t`` may be a scalar or an ndarray; the return matches.  ``half_width``
    overrides the adaptive truncation (used by the consistency oracle).
    """
    tau = complex(tau)
    b = tau.imag
    if b <= 0:
        raise DomainError(f"Im(tau) must be positive, got {tau}")
    if series_tol <= 0:
        raise DomainError("series_tol must be positive")
    t_arr = np.asarray(t, dtype=complex)
    y = np.atleast_1d(t_arr.imag)
    y_max = float(np.max(np.abs(y))) if y.size else 0.0
    if half_width is None:
        half_width = _half_width(b, y_max, series_tol)
    # center the window at the per-point peak index
    centers = np.rint(-kappa - np.atleast_1d(t_arr).imag / b).astype(int)
    offsets = np.arange(-half_width, half_width + 1)
    m = centers[None, :] + offsets[:, None]
    s = m + kappa
    expo = 1j * np.pi * s * (s * tau + 2.0 * (np.atleast_1d(t_arr)[None, :] + kappa_prime))
    val = np.exp(expo).sum(axis=0)
    if t_arr.ndim == 0:
        return complex(val[0])
    return val.reshape(t_arr.shape)


def theta(t, cfg_or_tau, series_tol: float | None = None):
    """Odd theta: characteristics (1/2, 1/2)."""
    if isinstance(cfg_or_tau, ModuliConfig):
        tau = cfg_or_tau.tau
        tol = cfg_or_tau.series_tol if series_tol is None else series_tol
    else:
        tau = cfg_or_tau
        tol = 1e-12 if series_tol is None else series_tol
    return theta_char(0.5, 0.5, t, tau, tol)


def lattice_distance(u: complex, tau: complex) -> float:
    """Distance from u to Z + tau*Z in the lattice-adapted norm |a + b*tau|
    over real residues (a, b)."""
    b = u.imag / tau.imag
    a = u.real - b * tau.real
    af = a - round(a)
    bf = b - round(b)
    return abs(af + bf * tau)


def chi(z: complex, cfg: ModuliConfig) -> complex:
    """theta(z - (1 - 1/n)*gamma) / theta(z)."""
    if lattice_distance(z, cfg.tau) < cfg.exclusion:
        raise PoleError(f"chi: z={z} within {cfg.exclusion} of a zero of theta")
    shift = (1.0 - 1.0 / cfg.n) * cfg.gamma
    num, den = theta(np.array([z - shift, z]), cfg)
    return complex(num / den)


def alpha_beta(z: complex, l: complex, cfg: ModuliConfig) -> tuple[complex, complex]:
    """The coefficient pair
    alpha = theta(l+g)theta(z) / (theta(l)theta(z-g)),
    beta  = theta(z-l)theta(g) / (theta(l)theta(z-g)).
    """
    g = cfg.gamma
    if lattice_distance(l, cfg.tau) < cfg.exclusion:
        raise PoleError(f"alpha_beta: l={l} within exclusion of a zero of theta")
    if lattice_distance(z - g, cfg.tau) < cfg.exclusion:
        raise PoleError(f"alpha_beta: z={z} within exclusion of the pole at gamma")
    vals = theta(np.array([l + g, z, l, z - g, z - l, g]), cfg)
    den = vals[2] * vals[3]
    alpha = vals[0] * vals[1] / den
    beta = vals[4] * vals[5] / den
    if cfg.beta_skew:
        beta = beta * (1.0 + cfg.beta_skew)
    return complex(alpha), complex(beta)


def phi_vec(u: complex, cfg: ModuliConfig) -> np.ndarray:
    """Intertwining vector: component l (l = 0..n-1) is
    theta_{l/n, 0}(u; n*tau), i.e. exp(i*pi*(l^2*tau + 2*l*u)/n) *
    theta_{0,0}(u + l*tau; n*tau).

    This normalization is the one that satisfies the shift relations
    Phi(u+1) = A Phi(u) and Phi(u+tau) = e^{-i*pi*tau/n - 2*i*pi*u/n} B Phi(u)
    exactly.
    """
    n = cfg.n
    ls = np.arange(n)
    args = u + ls * cfg.tau
    base = theta_char(0.0, 0.0, args, n * cfg.tau, cfg.series_tol)
    pref = np.exp(1j * np.pi * (ls * ls * cfg.tau + 2.0 * ls * u) / n)
    return pref * base
