"""
Orthonormal function families used to discretize a continuous variable.

Each family is an orthogonal polynomial set with the square root of its
weight absorbed, so the functions are orthonormal under plain ``dk``:

    HERMITE   O_n(k) = sqrt(b) (sqrt(pi) 2^n n!)^(-1/2) H_n(b k) exp(-(b k)^2 / 2)   on (-inf, inf)
    LAGUERRE  O_n(k) = sqrt(b) L_n(b k) exp(-b k / 2)                                 on (0, inf)
    LEGENDRE  O_n(k) = sqrt(b) sqrt((2n + 1) / 2) P_n(b k)                            on (-1/b, 1/b)

Evaluation never forms the raw polynomials. The three-term recurrence is run
on the normalized functions themselves, which keeps every intermediate O(1)
and avoids the overflow of ``2^n n!`` past n ~ 85.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

#: Largest index the recurrences are certified for.
MAX_STABLE_INDEX = 200


class BasisKind(str, enum.Enum):
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    LEGENDRE = "legendre"


_CANONICAL_DOMAIN = {
    BasisKind.HERMITE: (-math.inf, math.inf),
    BasisKind.LAGUERRE: (0.0, math.inf),
    BasisKind.LEGENDRE: (-1.0, 1.0),
}


@dataclass(frozen=True)
class BasisFamily:
    """A scaled orthonormal family ``O_n(k) = sqrt(scale) * O^1_n(scale * k)``."""

    kind: BasisKind = BasisKind.HERMITE
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise InputError(f"basis scale must be positive and finite, got {self.scale!r}")
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def domain(self) -> tuple[float, float]:
        a, b = _CANONICAL_DOMAIN[self.kind]
        return a / self.scale, b / self.scale

    @property
    def parity_definite(self) -> bool:
        """True when O_n(-k) = (-1)^n O_n(k)."""
        return self.kind in (BasisKind.HERMITE, BasisKind.LEGENDRE)

    def describe(self) -> dict:
        return {"kind": self.kind.value, "scale": self.scale}

    @classmethod
    def hermite(cls, beta: float = 1.0) -> "BasisFamily":
        return cls(BasisKind.HERMITE, beta)


def _check_domain(family: BasisFamily, k: np.ndarray) -> None:
    if not np.all(np.isfinite(k)):
        raise InputError("basis evaluation point must be finite")
    a, b = family.domain
    if np.any(k < a) or np.any(k > b):
        bad = k[(k < a) | (k > b)].flat[0]
        raise InputError(f"k={bad!r} lies outside the {family.kind.value} domain ({a}, {b})")


def _hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def _laguerre_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    # Laguerre polynomials are already orthonormal under exp(-x)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.exp(-0.5 * x)
    if n_max >= 1:
        out[1] = (1.0 - x) * out[0]
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1 - x) * out[n] - n * out[n - 1]) / (n + 1)
    return out


def _legendre_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    # x p_n = b_{n+1} p_{n+1} + b_n p_{n-1},  b_n = n / sqrt(4 n^2 - 1)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.full(x.shape, math.sqrt(0.5))
    if n_max >= 1:
        out[1] = math.sqrt(3.0) * x * out[0]
    for n in range(1, n_max):
        b_next = (n + 1) / math.sqrt(4.0 * (n + 1) ** 2 - 1.0)
        b_cur = n / math.sqrt(4.0 * n * n - 1.0)
        out[n + 1] = (x * out[n] - b_cur * out[n - 1]) / b_next
    return out


_KERNELS = {
    BasisKind.HERMITE: _hermite_functions,
    BasisKind.LAGUERRE: _laguerre_functions,
    BasisKind.LEGENDRE: _legendre_functions,
}


def eval_basis_batch(family: BasisFamily, n_max: int, k) -> np.ndarray:
    """
    Evaluate O_0 .. O_{n_max} at ``k``.

    Parameters
    ----------
    family : BasisFamily
    n_max : int
        Highest index, ``0 <= n_max <= MAX_STABLE_INDEX``.
    k : float or array_like
        Evaluation point(s), inside ``family.domain``.

    Returns
    -------
    np.ndarray
        Shape ``(n_max + 1,) + np.shape(k)``; row ``n`` holds O_n(k).
    """
    n_max = as_index(n_max, "n_max")
    if n_max > MAX_STABLE_INDEX:
        raise InputError(f"n_max={n_max} exceeds the stable limit {MAX_STABLE_INDEX}")
    k = np.asarray(k, dtype=float)
    _check_domain(family, k)
    out = _KERNELS[family.kind](n_max, family.scale * k)
    if family.scale != 1.0:
        out *= math.sqrt(family.scale)
    return out


def eval_basis(family: BasisFamily, n: int, k):
    """Evaluate the single function O_n at ``k``."""
    n = as_index(n, "n")
    return eval_basis_batch(family, n, k)[n]


def as_index(value, name: str) -> int:
    try:
        value = int(value) if float(value) == int(value) else None
    except (TypeError, ValueError):
        value = None
    if value is None or value < 0:
        raise InputError(f"{name} must be a nonnegative integer")
    return value
