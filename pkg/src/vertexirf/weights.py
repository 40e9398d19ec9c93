"""Weight bookkeeping: integer shift keys, sum-zero weight vectors, graded spaces.

Shift keys are kept in exact integer arithmetic (omega-basis tuples, canonical
modulo the all-ones vector) so distinct gamma-multiples never alias.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import WeightError


@dataclass(frozen=True)
class WeightKey:
    """Integer tuple a, read as sum_i a_i * omega_i with
    omega_i = E_ii^* - (1/n) sum_k E_kk^*.  Since the omegas sum to zero,
    tuples are canonicalized by subtracting the minimum entry."""

    a: tuple[int, ...]

    def __post_init__(self):
        lo = min(self.a)
        if lo != 0:
            object.__setattr__(self, "a", tuple(v - lo for v in self.a))

    @classmethod
    def zero(cls, n: int) -> "WeightKey":
        return cls((0,) * n)

    @classmethod
    def omega(cls, n: int, i: int) -> "WeightKey":
        return cls(tuple(1 if k == i else 0 for k in range(n)))

    def __add__(self, other: "WeightKey") -> "WeightKey":
        return WeightKey(tuple(x + y for x, y in zip(self.a, other.a)))

    def __neg__(self) -> "WeightKey":
        return WeightKey(tuple(-x for x in self.a))

    def __sub__(self, other: "WeightKey") -> "WeightKey":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.a)

    def coords(self) -> np.ndarray:
        """Coordinates in h^*: a - mean(a) (sum-zero n-vector)."""
        arr = np.array(self.a, dtype=float)
        return arr - arr.mean()


@dataclass(frozen=True)
class WeightVector:
    """Element of h^* (possibly complexified): n coordinates summing to zero."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        s = sum(self.coords)
        if abs(s) > 1e-12 * max(1.0, max(abs(c) for c in self.coords)):
            raise WeightError(f"coordinates must sum to zero, got sum {s}")

    @classmethod
    def from_array(cls, arr) -> "WeightVector":
        return cls(tuple(complex(v) for v in arr))

    @classmethod
    def projected(cls, arr) -> "WeightVector":
        a = np.asarray(arr, dtype=complex)
        return cls.from_array(a - a.mean())

    @property
    def n(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def shifted(self, key: WeightKey, step: complex) -> "WeightVector":
        """lambda + step * key (step is usually +/- gamma)."""
        return WeightVector.from_array(self.array() + step * key.coords())

    def diff(self, i: int, j: int) -> complex:
        return self.coords[i] - self.coords[j]


@dataclass(frozen=True)
class HModule:
    """Finite-dimensional graded space: one WeightKey per basis vector."""

    dim: int
    weights: tuple[WeightKey, ...] = field(default=())

    def __post_init__(self):
        if self.weights and len(self.weights) != self.dim:
            raise WeightError(
                f"{len(self.weights)} weights declared for dimension {self.dim}"
            )

    @classmethod
    def vector(cls, n: int) -> "HModule":
        """C^n with basis weights omega_0 .. omega_{n-1}."""
        return cls(n, tuple(WeightKey.omega(n, i) for i in range(n)))

    @classmethod
    def trivial(cls, n: int) -> "HModule":
        return cls(1, (WeightKey.zero(n),))

    @property
    def graded(self) -> bool:
        return bool(self.weights)

    def require_weights(self) -> tuple[WeightKey, ...]:
        if not self.weights:
            raise WeightError("operation requires declared weights on this leg")
        return self.weights

    def dual(self) -> "HModule":
        return HModule(self.dim, tuple(-w for w in self.weights))

    def tensor(self, other: "HModule") -> "HModule":
        """Kronecker order: self is the slow index."""
        w = tuple(
            a + b for a in self.require_weights() for b in other.require_weights()
        )
        return HModule(self.dim * other.dim, w)

    def weight_groups(self) -> dict[WeightKey, list[int]]:
        groups: dict[WeightKey, list[int]] = {}
        for idx, w in enumerate(self.require_weights()):
            groups.setdefault(w, []).append(idx)
        return groups
