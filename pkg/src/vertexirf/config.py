"""Global moduli parameters shared by every evaluator and check."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import DomainError

# Golden-ratio fraction: any non-resonant irrational-looking float works here,
# the checks only need genericity.
DEFAULT_GAMMA = 0.6180339887


@dataclass(frozen=True)
class ModuliConfig:
    """Rank, modulus and the knobs of the verification harness.

    ``beta_skew`` multiplies the beta coefficient by (1 + skew); it exists
    only to drive negative-control runs and defaults to off.
    """

    n: int = 2
    tau: complex = 0.3 + 1.1j
    gamma: float = DEFAULT_GAMMA
    c: complex = 0.31 + 0.24j
    x: complex = 0.12 + 0.45j
    tol: float = 1e-8
    series_tol: float = 1e-12
    seed: int = 12345
    samples: int = 100
    exclusion: float = 0.05
    beta_skew: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"rank n must be >= 2, got {self.n}")
        if complex(self.tau).imag <= 0:
            raise DomainError(f"Im(tau) must be positive, got tau={self.tau}")
        if self.tol <= 0 or self.series_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.series_tol >= self.tol:
            raise DomainError(
                f"series_tol ({self.series_tol}) must be below tol ({self.tol})"
            )
        if self.samples < 1:
            raise DomainError("samples must be positive")

    def with_(self, **kw) -> "ModuliConfig":
        return replace(self, **kw)


_NUM = r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?"
_IMAG_RE = re.compile(rf"^\s*(?P<im>[+-]?({_NUM})?)i\s*$")
_FULL_RE = re.compile(
    rf"^\s*(?P<re>[+-]?{_NUM})((?P<im>[+-]({_NUM})?)i)?\s*$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' text (also plain 'a' or 'bi').

    Raises ValueError with the offending position on malformed input.
    """
    m = _IMAG_RE.match(text)
    if m is not None:
        imtxt = m.group("im")
        if imtxt in ("", "+"):
            return 1j
        if imtxt == "-":
            return -1j
        return complex(0.0, float(imtxt))
    m = _FULL_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse complex number {text!r} at position 0")
    re_part = float(m.group("re"))
    im_part = 0.0
    if m.group("im") is not None:
        imtxt = m.group("im")
        if imtxt == "+":
            im_part = 1.0
        elif imtxt == "-":
            im_part = -1.0
        else:
            im_part = float(imtxt)
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"
