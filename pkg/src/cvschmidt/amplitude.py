"""Bipartite amplitudes f(p, q): the type-II biphoton and user expressions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import InputError, NumericalError
from .quadrature import QuadratureRule, norm_squared

REAL_LINE = (-math.inf, math.inf)


@dataclass(frozen=True)
class Amplitude:
    """A wavefunction on a rectangle, evaluated elementwise on numpy arrays.

    ``norm_hint`` caches the squared norm when it is known in closed form or
    after normalization; ``None`` means it has to be integrated.
    """

    evaluate: Callable
    domain: tuple = (REAL_LINE, REAL_LINE)
    label: str = "f"
    norm_hint: float | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for lo, hi in self.domain:
            if not lo < hi:
                raise InputError(f"empty domain interval ({lo}, {hi})")

    def __call__(self, p, q):
        return self.evaluate(p, q)

    def scaled(self, factor) -> "Amplitude":
        """``factor * f``; the norm hint follows as ``|factor|^2`` times."""
        base = self.evaluate
        hint = None if self.norm_hint is None else abs(factor) ** 2 * self.norm_hint
        return replace(self, evaluate=lambda p, q: factor * base(p, q), norm_hint=hint)


def sinc(x):
    """``sin(x) / x`` with a series branch near zero; accepts complex input."""
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        x = x.astype(float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


@dataclass(frozen=True)
class PdcParams:
    """Biphoton parameters; ``L_p`` and ``L_q`` are the dimensionless lengths.

    Physical fields use ps and 1/ps. ``omega_bar`` drops out of the
    dimensionless amplitude and is carried only as metadata.
    """

    L_p: float
    L_q: float
    tau_o: float | None = None
    tau_e: float | None = None
    sigma: float | None = None
    omega_bar: float | None = None

    def describe(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def pdc_from_physical(tau_e: float, tau_o: float, sigma: float, omega_bar: float | None = None) -> PdcParams:
    """
    Map physical crystal/pump parameters to the dimensionless amplitude.

    Parameters
    ----------
    tau_e, tau_o : float
        Inverse-group-velocity mismatches times crystal length, ``(k - k'_e) L``
        and ``(k - k'_o) L``, in ps.
    sigma : float
        Pump bandwidth in 1/ps.
    omega_bar : float, optional
        Degenerate signal/idler frequency in 1/ps.
    """
    if not sigma > 0:
        raise InputError(f"sigma must be positive, got {sigma!r}")
    return PdcParams(L_p=tau_o * sigma, L_q=tau_e * sigma, tau_o=tau_o, tau_e=tau_e,
                     sigma=sigma, omega_bar=omega_bar)


#: Parameters quoted for the ultrashort-pump type-II source.
DEFAULT_PHYSICAL = {"tau_e": 0.213, "tau_o": 0.061, "sigma": 35.0, "omega_bar": 2700.0}


def pdc_norm_squared(L_p: float, L_q: float) -> float:
    """Closed form of the squared norm of ``exp(-(p+q)^2) sinc((L_p p + L_q q)/2)``.

    In ``s = p + q, u = p - q`` the sinc integrates over ``u`` to ``pi / |b|``
    with ``b = (L_p - L_q) / 4``, and the Gaussian over ``s`` to ``sqrt(pi/2)``.
    Infinite when ``L_p == L_q``: the amplitude is then constant along p = -q.
    """
    if L_p == L_q:
        return math.inf
    return math.sqrt(2.0) * math.pi ** 1.5 / abs(L_p - L_q)


def pdc_amplitude(params: PdcParams) -> Amplitude:
    """The dimensionless biphoton amplitude ``exp(-(p+q)^2) sinc((L_p p + L_q q) / 2)``."""
    L_p, L_q = float(params.L_p), float(params.L_q)

    def evaluate(p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        return np.exp(-(p + q) ** 2) * sinc(0.5 * (L_p * p + L_q * q))

    return Amplitude(evaluate, label=f"pdc(L_p={L_p:g}, L_q={L_q:g})",
                     norm_hint=pdc_norm_squared(L_p, L_q),
                     metadata={"kind": "pdc", **params.describe()})


def product_amplitude(g1: Callable, g2: Callable, label: str = "product", norm_hint=None) -> Amplitude:
    """Separable ``g1(p) * g2(q)``."""
    return Amplitude(lambda p, q: np.asarray(g1(p)) * np.asarray(g2(q)), label=label,
                     norm_hint=norm_hint, metadata={"kind": "product"})


def normalize(amp: Amplitude, rule_p: QuadratureRule | None = None,
              rule_q: QuadratureRule | None = None) -> Amplitude:
    """
    Rescale ``amp`` to unit norm.

    Uses ``amp.norm_hint`` when present, otherwise integrates with the given
    rules. The result carries ``norm_hint = 1``.
    """
    norm = amp.norm_hint
    if norm is None:
        if rule_p is None or rule_q is None:
            raise InputError("amplitude has no norm hint; quadrature rules are required")
        norm = norm_squared(amp, rule_p, rule_q)
    if not (math.isfinite(norm) and norm > 0):
        raise NumericalError(f"cannot normalize amplitude {amp.label!r}: norm^2 = {norm!r}")
    out = amp.scaled(1.0 / math.sqrt(norm))
    return replace(out, norm_hint=1.0, label=f"normalized {amp.label}")
