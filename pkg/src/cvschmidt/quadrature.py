"""
Gauss quadrature rules and tensor-product integration on the plane.

Nodes come from the Golub-Welsch eigenproblem on the Jacobi matrix of each
measure. Weights are taken from the Christoffel sum

    w_i = 1 / sum_{n < N} p_n(x_i)^2

over the measure's orthonormal polynomials, evaluated in log space. The
weight-compensated weights ``w_i / rho(x_i)`` then come out as a difference of
logs, so plain ``dx`` integrals never multiply a tiny weight by a huge
``exp(x^2)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .basis import BasisFamily, BasisKind
from .errors import InputError, NumericalError


class Measure(str, enum.Enum):
    GAUSS_HERMITE = "gauss-hermite"
    GAUSS_LAGUERRE = "gauss-laguerre"
    GAUSS_LEGENDRE = "gauss-legendre"


_BASIS_OF = {
    Measure.GAUSS_HERMITE: BasisKind.HERMITE,
    Measure.GAUSS_LAGUERRE: BasisKind.LAGUERRE,
    Measure.GAUSS_LEGENDRE: BasisKind.LEGENDRE,
}
_MEASURE_OF = {v: k for k, v in _BASIS_OF.items()}


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of an ``order``-point Gauss rule.

    ``weights`` integrate against the measure's weight function; ``compensated``
    are ``weights / rho(nodes)`` and integrate against plain ``dx``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    compensated: np.ndarray
    measure: Measure
    interval: tuple[float, float] | None = field(default=None)

    @property
    def order(self) -> int:
        return len(self.nodes)

    def describe(self) -> dict:
        out = {"measure": self.measure.value, "order": self.order}
        if self.interval is not None:
            out["interval"] = list(self.interval)
        return out


def _jacobi_matrix(measure: Measure, order: int):
    n = np.arange(1, order, dtype=float)
    if measure is Measure.GAUSS_HERMITE:
        return np.zeros(order), np.sqrt(n / 2.0)
    if measure is Measure.GAUSS_LAGUERRE:
        return 2.0 * np.arange(order) + 1.0, n
    return np.zeros(order), n / np.sqrt(4.0 * n * n - 1.0)


_MASS = {
    Measure.GAUSS_HERMITE: math.sqrt(math.pi),
    Measure.GAUSS_LAGUERRE: 1.0,
    Measure.GAUSS_LEGENDRE: 2.0,
}


def _log_density(measure: Measure, x: np.ndarray) -> np.ndarray:
    if measure is Measure.GAUSS_HERMITE:
        return -x * x
    if measure is Measure.GAUSS_LAGUERRE:
        return -x
    return np.zeros_like(x)


def _log_christoffel(measure: Measure, order: int, x: np.ndarray) -> np.ndarray:
    """``log sum_{n < order} p_n(x)^2`` for the measure's orthonormal polynomials.

    Runs the Jacobi-matrix recurrence with per-node rescaling so neither the
    polynomials nor the sum overflow at any order.
    """
    diag, off = _jacobi_matrix(measure, order)
    prev = np.zeros_like(x)
    cur = np.full_like(x, 1.0 / math.sqrt(_MASS[measure]))
    total = cur * cur
    log_scale = np.zeros_like(x)
    for n in range(order - 1):
        back = off[n - 1] * prev if n > 0 else 0.0
        prev, cur = cur, ((x - diag[n]) * cur - back) / off[n]
        total += cur * cur
        big = np.maximum(np.abs(cur), np.abs(prev)) > 1e100
        if big.any():
            f = np.where(big, 1e-100, 1.0)
            prev, cur, total = prev * f, cur * f, total * f * f
            log_scale += np.where(big, 200.0 * math.log(10.0), 0.0)
    return np.log(total) + log_scale


def gauss_rule(measure, order: int, interval: tuple[float, float] | None = None) -> QuadratureRule:
    """
    Build an ``order``-point Gauss rule for ``measure``.

    Parameters
    ----------
    measure : Measure or str
    order : int
        Number of nodes, at least 1.
    interval : (float, float), optional
        Finite target interval for Gauss-Legendre; the rule is mapped affinely
        from (-1, 1).

    Returns
    -------
    QuadratureRule
        Nodes ascending; exact for polynomials of degree ``2 * order - 1``.
    """
    measure = Measure(measure)
    if isinstance(order, bool) or int(order) != order or order < 1:
        raise InputError(f"quadrature order must be a positive integer, got {order!r}")
    order = int(order)
    if interval is not None and measure is not Measure.GAUSS_LEGENDRE:
        raise InputError("only Gauss-Legendre rules can be mapped to an interval")

    diag, off = _jacobi_matrix(measure, order)
    if order == 1:
        x = diag.copy()
    else:
        x = eigvalsh_tridiagonal(diag, off)
    x.sort()
    if measure is not Measure.GAUSS_LAGUERRE:
        x = 0.5 * (x - x[::-1])

    log_w = -_log_christoffel(measure, order, x)
    if measure is not Measure.GAUSS_LAGUERRE:
        log_w = 0.5 * (log_w + log_w[::-1])
    w = np.exp(log_w)
    comp = np.exp(log_w - _log_density(measure, x))

    if interval is not None:
        a, b = (float(v) for v in interval)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InputError(f"bad interval {interval!r}")
        half = 0.5 * (b - a)
        x = half * x + 0.5 * (a + b)
        w = w * half
        comp = comp * half
        interval = (a, b)
    return QuadratureRule(x, w, comp, measure, interval)


def rule_for_basis(family: BasisFamily, order: int) -> QuadratureRule:
    """The Gauss rule whose measure matches ``family``'s weight."""
    measure = _MEASURE_OF[family.kind]
    if measure is Measure.GAUSS_LEGENDRE:
        return gauss_rule(measure, order, family.domain)
    return gauss_rule(measure, order)


def auto_order(max_cutoff: int) -> int:
    """Default order: resolves the sinc oscillation of the biphoton amplitude."""
    return 4 * int(max_cutoff) + 40


def _rule_weights(rule: QuadratureRule, weight_compensation: bool) -> np.ndarray:
    return rule.compensated if weight_compensation else rule.weights


def evaluate_on_grid(f, rule_p: QuadratureRule, rule_q: QuadratureRule, workers: int = 1) -> np.ndarray:
    """Sample ``f(p, q)`` on the tensor grid, rows over ``rule_p`` nodes.

    With ``workers > 1`` row blocks are evaluated in threads; the result is the
    same array regardless of the split.
    """
    p, q = rule_p.nodes, rule_q.nodes
    if workers <= 1 or len(p) < 2 * workers:
        values = np.asarray(f(p[:, None], q[None, :]))
        values = np.broadcast_to(values, (len(p), len(q)))
    else:
        from concurrent.futures import ThreadPoolExecutor

        blocks = np.array_split(np.arange(len(p)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: np.broadcast_to(
                np.asarray(f(p[idx, None], q[None, :])), (len(idx), len(q))), blocks))
        values = np.concatenate(parts, axis=0)
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NumericalError(f"non-finite integrand at (p, q) = ({p[i]!r}, {q[j]!r})")
    return values


def _fsum(values: np.ndarray):
    flat = values.ravel()
    if np.iscomplexobj(flat):
        return complex(math.fsum(flat.real), math.fsum(flat.imag))
    return math.fsum(flat)


def integrate_2d(f, rule_p: QuadratureRule, rule_q: QuadratureRule,
                 weight_compensation: bool = False, workers: int = 1):
    """
    Tensor-product quadrature ``sum_ij w_i w'_j f(p_i, q_j)``.

    ``f`` must accept broadcastable arrays. With ``weight_compensation`` the
    rules integrate plain ``dp dq`` rather than against their weight functions.
    The final sum is exactly rounded (``math.fsum``) so the result does not
    depend on ``workers``.
    """
    values = evaluate_on_grid(f, rule_p, rule_q, workers)
    wp = _rule_weights(rule_p, weight_compensation)
    wq = _rule_weights(rule_q, weight_compensation)
    return _fsum(wp[:, None] * values * wq[None, :])


def norm_squared(amp, rule_p: QuadratureRule, rule_q: QuadratureRule, workers: int = 1) -> float:
    """Quadrature estimate of the squared L2 norm of ``amp`` over the plane."""
    return float(integrate_2d(lambda p, q: np.abs(amp(p, q)) ** 2, rule_p, rule_q,
                              weight_compensation=True, workers=workers).real)
