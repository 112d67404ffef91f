"""Functional calculus for square complex matrices.

f(T) is evaluated three ways that must agree: direct partial sums of
sum a_k T^k with a rigorous tail bound in the spectral norm, integration of
the function's tower measure against the orbit n -> sqrt(a_n) T^n, and a
classical eigendecomposition oracle for diagonalizable input.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .measure import pair, series_measure
from .series import ConvergenceError, PowerSeries, eval_scalar, truncation_point
from .tower import TowerPoint

__all__ = [
    "ConvergenceReport",
    "as_operator",
    "func_calc_series",
    "func_calc_via_measure",
    "oracle_eigen",
    "orbit_map",
    "spectral_norm",
]


def as_operator(mat) -> np.ndarray:
    """Validate and convert to a square complex matrix."""
    a = np.asarray(mat, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def spectral_norm(mat) -> float:
    """Largest singular value."""
    a = as_operator(mat)
    if a.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


@dataclass(frozen=True)
class ConvergenceReport:
    terms_used: int
    tail_bound: float
    op_norm: float
    stopped_by: str  # "tolerance" or "budget"


def _partial_sum(f: PowerSeries, a: np.ndarray, n: int) -> np.ndarray:
    acc = np.zeros_like(a)
    power = np.eye(a.shape[0], dtype=complex)
    for k in range(n + 1):
        acc = acc + f.coeff(k) * power
        if k < n:
            power = power @ a
    return acc


def func_calc_series(f: PowerSeries, mat, tol: float = 1e-12,
                     max_terms: int = 500) -> tuple[np.ndarray, ConvergenceReport]:
    """Partial sums of sum a_k T^k, stopped once sum_{k>n} |a_k| ||T||^k <= tol.

    Raises :class:`ConvergenceError` with the partial sum attached when the
    bound cannot be met within ``max_terms``.
    """
    a = as_operator(mat)
    if a.shape[0] == 0:
        return a.copy(), ConvergenceReport(0, 0.0, 0.0, "tolerance")
    norm = spectral_norm(a)
    try:
        n_stop, tail = truncation_point(f, norm, tol, max_terms)
    except ConvergenceError as exc:
        partial = _partial_sum(f, a, max_terms)
        report = ConvergenceReport(max_terms + 1, math.inf, norm, "budget")
        raise ConvergenceError(str(exc), partial=partial, report=report) from None
    return _partial_sum(f, a, n_stop), ConvergenceReport(n_stop + 1, tail, norm, "tolerance")


def orbit_map(f: PowerSeries, mat) -> Callable[[TowerPoint], np.ndarray]:
    """The orbit n -> sqrt(a_n) T^n, infinity -> 0, with cached matrix powers."""
    a = as_operator(mat)
    dim = a.shape[0]
    powers = [np.eye(dim, dtype=complex)]
    lock = threading.Lock()

    def orbit(x: TowerPoint) -> np.ndarray:
        if x.is_infinity:
            return np.zeros((dim, dim), dtype=complex)
        n = x.index
        with lock:
            while len(powers) <= n:
                powers.append(powers[-1] @ a)
            power = powers[n]
        return cmath.sqrt(f.coeff(n)) * power

    return orbit


def func_calc_via_measure(f: PowerSeries, mat, p: float = 1.0, depth: int = 64,
                          tol: float = 1e-12) -> np.ndarray:
    """f(T) as the integral of the orbit map against the function's tower measure.

    Each summand is sqrt(a_n) * (sqrt(a_n) T^n) = a_n T^n, so this agrees with
    :func:`func_calc_series` up to bookkeeping rounding.
    """
    mu = series_measure(f, p, depth)
    result = pair(mu, orbit_map(f, mat), tol)
    return result.value


def oracle_eigen(f: PowerSeries, mat, cond_limit: float = 1e6,
                 tol: float = 1e-14, max_terms: int = 600) -> np.ndarray:
    """Classical oracle: V diag(f(lambda_i)) V^{-1} for diagonalizable input.

    Rejects defective or badly conditioned eigenvector matrices rather than
    returning silently inaccurate results.
    """
    a = as_operator(mat)
    if a.shape[0] == 0:
        return a.copy()
    lam, vecs = np.linalg.eig(a)
    sing = np.linalg.svd(vecs, compute_uv=False)
    if sing[-1] == 0.0 or sing[0] / sing[-1] > cond_limit:
        raise ValueError("oracle requires well-conditioned diagonalizable input")
    flam = np.array([eval_scalar(f, complex(z), tol, max_terms) for z in lam])
    scaled = vecs * flam  # V @ diag(f(lambda))
    return np.linalg.solve(vecs.T, scaled.T).T
