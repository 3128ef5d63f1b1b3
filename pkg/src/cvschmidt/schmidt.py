"""
Schmidt decomposition of a bipartite amplitude through a truncated basis
expansion.

    f(p, q) ~ sum_mn C_mn O1_m(p) O2_n(q)          (tensor quadrature)
    C = U diag(s) V^H                              (singular values)
    f(p, q) ~ sum_i s_i psi1_i(p) psi2_i(q),       lambda_i = s_i^2

``psi1_i = sum_m U_mi O1_m`` and ``psi2_i = sum_n (V^H)_in O2_n``. The row
``i`` of ``U^T`` is the eigenvector of ``M = C C^H`` with eigenvalue
``lambda_i``, and ``(V^H)_i = U_i^H C / s_i``; factorizing ``C`` directly
avoids squaring its condition number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .amplitude import Amplitude
from .basis import MAX_STABLE_INDEX, BasisFamily, BasisKind, as_index, eval_basis_batch
from .errors import InputError, NumericalError
from .quadrature import (QuadratureRule, auto_order, evaluate_on_grid, integrate_2d,
                         norm_squared, rule_for_basis)

#: Relative threshold below which Schmidt weights are treated as zero.
LAMBDA_CLIP = 1e-14


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Truncated expansion coefficients ``C_mn``, ``0 <= m <= m0``, ``0 <= n <= n0``.

    ``norm_f_squared`` is ``None`` for distributions outside L2 (the delta).
    ``norm_source`` records whether it came from a closed form or quadrature.
    """

    entries: np.ndarray
    basis_1: BasisFamily
    basis_2: BasisFamily
    norm_f_squared: float | None
    quadrature_order: tuple[int, int] | None = None
    norm_source: str | None = None
    label: str = ""

    @property
    def cutoffs(self) -> tuple[int, int]:
        m, n = self.entries.shape
        return m - 1, n - 1

    @property
    def captured(self) -> float:
        """``sum |C_mn|^2``."""
        return float(np.sum(np.abs(self.entries) ** 2))

    def truncate(self, m0: int, n0: int) -> "CoefficientMatrix":
        """The leading ``(m0+1) x (n0+1)`` block; nested cutoffs share one integration."""
        M0, N0 = self.cutoffs
        if not (0 <= m0 <= M0 and 0 <= n0 <= N0):
            raise InputError(f"cutoffs ({m0}, {n0}) exceed the computed ({M0}, {N0})")
        return replace(self, entries=self.entries[: m0 + 1, : n0 + 1].copy())


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt weights and mode coefficients.

    ``modes_1[i, m]`` and ``modes_2[i, n]`` expand mode ``i`` of each side in
    that side's basis. Rows are orthonormal; rows of ``modes_2`` whose weight
    was clipped are zero.
    """

    lambdas: np.ndarray
    modes_1: np.ndarray
    modes_2: np.ndarray
    source: CoefficientMatrix

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.lambdas))

    def basis(self, side: int) -> BasisFamily:
        return self.source.basis_1 if _side(side) == 1 else self.source.basis_2

    def modes(self, side: int) -> np.ndarray:
        return self.modes_1 if _side(side) == 1 else self.modes_2

    def reconstruct(self) -> np.ndarray:
        """``sum_i sqrt(lambda_i) modes_1[i]^T modes_2[i]``, which equals ``C``."""
        return (self.modes_1.T * np.sqrt(self.lambdas)) @ self.modes_2


def _side(side) -> int:
    if side not in (1, 2):
        raise InputError(f"side must be 1 or 2, got {side!r}")
    return side


def _check_nodes(rule: QuadratureRule, basis: BasisFamily, interval, name: str):
    lo, hi = basis.domain
    alo, ahi = interval
    nodes = rule.nodes
    if nodes[0] < max(lo, alo) or nodes[-1] > min(hi, ahi):
        raise InputError(f"{name} quadrature nodes leave the basis or amplitude domain")


def default_rules(basis_1: BasisFamily, basis_2: BasisFamily, m0: int, n0: int,
                  order: int | None = None) -> tuple[QuadratureRule, QuadratureRule]:
    """Gauss rules matched to each basis, of order ``4 max(m0, n0) + 40`` by default."""
    order = auto_order(max(m0, n0)) if order is None else order
    return rule_for_basis(basis_1, order), rule_for_basis(basis_2, order)


def compute_coefficients(amp: Amplitude, basis_1: BasisFamily, basis_2: BasisFamily,
                         m0: int, n0: int, rule_p: QuadratureRule | None = None,
                         rule_q: QuadratureRule | None = None, workers: int = 1) -> CoefficientMatrix:
    """
    Project ``amp`` onto ``O1_m(p) O2_n(q)`` for ``m <= m0, n <= n0``.

    Parameters
    ----------
    amp : Amplitude
    basis_1, basis_2 : BasisFamily
    m0, n0 : int
        Cutoffs, at most ``MAX_STABLE_INDEX``.
    rule_p, rule_q : QuadratureRule, optional
        Defaults from :func:`default_rules`.
    workers : int
        Threads for sampling ``amp``; results do not depend on it.

    Returns
    -------
    CoefficientMatrix
        ``norm_f_squared`` is ``amp.norm_hint`` when known, otherwise the
        quadrature value with the same rules.
    """
    m0, n0 = as_index(m0, "m0"), as_index(n0, "n0")
    if max(m0, n0) > MAX_STABLE_INDEX:
        raise InputError(f"cutoffs beyond {MAX_STABLE_INDEX} are not supported")
    if rule_p is None or rule_q is None:
        dp, dq = default_rules(basis_1, basis_2, m0, n0)
        rule_p, rule_q = rule_p or dp, rule_q or dq
    _check_nodes(rule_p, basis_1, amp.domain[0], "p")
    _check_nodes(rule_q, basis_2, amp.domain[1], "q")

    F = evaluate_on_grid(amp, rule_p, rule_q, workers)
    Op = eval_basis_batch(basis_1, m0, rule_p.nodes) * rule_p.compensated
    Oq = eval_basis_batch(basis_2, n0, rule_q.nodes) * rule_q.compensated
    # real bases: conjugation is a no-op
    C = Op @ F @ Oq.T

    if amp.norm_hint is not None:
        norm, source = float(amp.norm_hint), "closed-form"
    else:
        W = rule_p.compensated[:, None] * np.abs(F) ** 2 * rule_q.compensated[None, :]
        norm, source = math.fsum(W.ravel()), "quadrature"
    if not (math.isfinite(norm) and norm > 0):
        raise NumericalError(f"squared norm of {amp.label!r} is {norm!r}; amplitude is not normalizable")
    return CoefficientMatrix(C, basis_1, basis_2, norm, (rule_p.order, rule_q.order), source, amp.label)


def delta_coefficients(n_max: int, basis: BasisFamily | None = None) -> CoefficientMatrix:
    """
    Coefficients of ``delta(p - q)`` in a real basis: the identity.

    The delta is not square integrable, so ``norm_f_squared`` is ``None`` and the
    truncation distances refuse it; the decomposition itself is degenerate and
    therefore not unique.
    """
    n_max = as_index(n_max, "n_max")
    basis = basis or BasisFamily()
    return CoefficientMatrix(np.eye(n_max + 1), basis, basis, None, None, None, "delta(p - q)")


def _fix_phase(u_rows: np.ndarray, v_rows: np.ndarray) -> None:
    idx = np.argmax(np.abs(u_rows), axis=1)
    pivot = u_rows[np.arange(len(u_rows)), idx]
    mag = np.abs(pivot)
    phase = np.where(mag > 0, pivot / np.where(mag > 0, mag, 1.0), 1.0)
    u_rows *= np.conj(phase)[:, None]
    v_rows *= phase[:, None]


def decompose(C: CoefficientMatrix) -> SchmidtDecomposition:
    """
    Schmidt-decompose a coefficient matrix.

    Weights are descending; equal weights keep the order of the factorization.
    In each ``modes_1`` row the largest-magnitude entry is made real positive
    and the matching ``modes_2`` row takes the opposite phase. Weights below
    ``LAMBDA_CLIP * lambda_0`` are set to zero and their ``modes_2`` rows
    zero-filled.
    """
    A = np.asarray(C.entries)
    if not np.all(np.isfinite(A)):
        raise NumericalError("coefficient matrix has non-finite entries")
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    order = np.argsort(-s, kind="stable")
    s, U, Vh = s[order], U[:, order], Vh[order]
    lambdas = s * s

    modes_1 = U.T.copy()
    modes_2 = Vh.copy()
    if not np.iscomplexobj(A):
        modes_1, modes_2 = modes_1.real, modes_2.real
    _fix_phase(modes_1, modes_2)

    top = lambdas[0] if len(lambdas) else 0.0
    clipped = lambdas <= LAMBDA_CLIP * top
    lambdas = np.where(clipped, 0.0, lambdas)
    modes_2[clipped] = 0.0
    return SchmidtDecomposition(lambdas, modes_1, modes_2, C)


def schmidt_decompose(amp: Amplitude, basis_1: BasisFamily, basis_2: BasisFamily | None = None,
                      m0: int = 25, n0: int | None = None, order: int | None = None,
                      workers: int = 1) -> SchmidtDecomposition:
    """Coefficients plus decomposition in one call, with default rules."""
    basis_2 = basis_1 if basis_2 is None else basis_2
    n0 = m0 if n0 is None else n0
    rule_p, rule_q = default_rules(basis_1, basis_2, m0, n0, order)
    return decompose(compute_coefficients(amp, basis_1, basis_2, m0, n0, rule_p, rule_q, workers))


def eval_mode(dec: SchmidtDecomposition, side: int, i: int, k):
    """Mode ``i`` of ``side`` at ``k``: ``sum_n A_in O_n(k)``."""
    coeffs = dec.modes(side)
    i = as_index(i, "mode index")
    if i >= len(coeffs):
        raise InputError(f"mode index {i} out of range (have {len(coeffs)})")
    values = eval_basis_batch(dec.basis(side), coeffs.shape[1] - 1, k)
    return np.tensordot(coeffs[i], values, axes=1)


def hermite_monomials(n_max: int) -> np.ndarray:
    """
    Monomial coefficients of the orthonormal Hermite polynomial parts.

    Row ``n`` holds ``c`` with ``(sqrt(pi) 2^n n!)^(-1/2) H_n(x) = sum_d c_d x^d``,
    built with the same normalized recurrence as the functions.
    """
    out = np.zeros((n_max + 1, n_max + 1))
    out[0, 0] = np.pi ** -0.25
    if n_max >= 1:
        out[1, 1] = math.sqrt(2.0) * out[0, 0]
    for n in range(1, n_max):
        out[n + 1, 1:] = math.sqrt(2.0 / (n + 1)) * out[n, :-1]
        out[n + 1] -= math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def mode_to_monomial(dec: SchmidtDecomposition, side: int, i: int, max_degree: int) -> np.ndarray:
    """
    Polynomial prefactor of a Hermite-basis mode.

    Returns ``c_0 .. c_max_degree`` with
    ``psi(k) ~ exp(-(beta k)^2 / 2) * sum_d c_d k^d``; terms above
    ``max_degree`` are dropped.
    """
    basis = dec.basis(side)
    if basis.kind is not BasisKind.HERMITE:
        raise InputError("monomial export is defined for Hermite bases only")
    coeffs = dec.modes(side)
    i = as_index(i, "mode index")
    if i >= len(coeffs):
        raise InputError(f"mode index {i} out of range (have {len(coeffs)})")
    cutoff = coeffs.shape[1] - 1
    max_degree = as_index(max_degree, "max_degree")
    if max_degree > cutoff:
        raise InputError(f"max_degree {max_degree} exceeds the side's cutoff {cutoff}")
    beta = basis.scale
    full = coeffs[i] @ hermite_monomials(cutoff)
    full = full * math.sqrt(beta) * beta ** np.arange(cutoff + 1)
    return full[: max_degree + 1]


def _require_norm(dec: SchmidtDecomposition) -> float:
    norm = dec.source.norm_f_squared
    if norm is None:
        raise InputError("truncation distances are undefined for a non-normalizable amplitude")
    return norm


def distance_d2(dec: SchmidtDecomposition) -> float:
    """``1 - sum(lambda) / ||f||^2``, clamped to [0, 1]."""
    norm = _require_norm(dec)
    return float(min(1.0, max(0.0, 1.0 - math.fsum(dec.lambdas) / norm)))


def distance_d1(amp: Amplitude, dec: SchmidtDecomposition, rule_p: QuadratureRule | None = None,
                rule_q: QuadratureRule | None = None, workers: int = 1) -> float:
    """
    Relative mean-square residual ``||f - sum_i sqrt(lambda_i) psi1_i psi2_i||^2 / ||f||^2``.

    The residual is integrated on the tensor grid. When ``amp`` knows its norm
    in closed form, the part of ``||f||^2`` the grid misses (slowly decaying
    tails) is added back to the residual: the reconstruction is confined to the
    Gaussian envelope of the basis, so the missed mass belongs to the residual.
    """
    _require_norm(dec)
    b1, b2 = dec.source.basis_1, dec.source.basis_2
    if rule_p is None or rule_q is None:
        m0, n0 = dec.source.cutoffs
        dp, dq = default_rules(b1, b2, m0, n0)
        rule_p, rule_q = rule_p or dp, rule_q or dq
    F = evaluate_on_grid(amp, rule_p, rule_q, workers)
    P = eval_basis_batch(b1, dec.modes_1.shape[1] - 1, rule_p.nodes)
    Q = eval_basis_batch(b2, dec.modes_2.shape[1] - 1, rule_q.nodes)
    psi1 = dec.modes_1 @ P
    psi2 = dec.modes_2 @ Q
    R = F - (psi1.T * np.sqrt(dec.lambdas)) @ psi2
    wp, wq = rule_p.compensated[:, None], rule_q.compensated[None, :]
    residual = math.fsum((wp * np.abs(R) ** 2 * wq).ravel())
    grid_norm = math.fsum((wp * np.abs(F) ** 2 * wq).ravel())
    if amp.norm_hint is not None:
        norm = float(amp.norm_hint)
        residual += norm - grid_norm
    else:
        norm = grid_norm
    if not (math.isfinite(norm) and norm > 0):
        raise NumericalError(f"squared norm of {amp.label!r} is {norm!r}")
    return float(max(0.0, residual / norm))


def _weights(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise InputError("Schmidt weights must be a finite nonnegative vector")
    total = math.fsum(lam)
    if total <= 0:
        raise InputError("all Schmidt weights are zero")
    return lam / total


def entropy(lambdas) -> float:
    """
    Entanglement entropy in bits, ``-sum w log2 w`` over ``w = lambda / sum(lambda)``.

    Weights are renormalized by the captured total so the value stays
    meaningful for truncated spectra; ``0 log 0 = 0``.
    """
    w = _weights(lambdas)
    w = w[w > 0]
    return float(max(0.0, -math.fsum(w * np.log2(w))))


def schmidt_number(lambdas) -> float:
    """Participation ratio ``(sum lambda)^2 / sum lambda^2``."""
    w = _weights(lambdas)
    return float(1.0 / math.fsum(w * w))


def metrics(dec: SchmidtDecomposition, amp: Amplitude | None = None, rule_p=None, rule_q=None) -> dict:
    """The summary numbers reported for one decomposition; ``None`` where undefined."""
    out = {"d1": None, "d2": None, "entropy": None, "schmidt_number": None}
    if dec.source.norm_f_squared is not None:
        out["d2"] = distance_d2(dec)
        if amp is not None:
            out["d1"] = distance_d1(amp, dec, rule_p, rule_q)
    if np.any(dec.lambdas > 0):
        out["entropy"] = entropy(dec.lambdas)
        out["schmidt_number"] = schmidt_number(dec.lambdas)
    return out
