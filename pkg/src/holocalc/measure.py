"""lp-bounded weight families on the level tower, and integration against them.

A :class:`TowerMeasure` stores, for every level i up to a chosen depth, a
complex weight per point of that level.  The family is *coherent*: pushing
level j forward along the transition map reproduces level i exactly, weight
for weight, because the infinity weight of each level is built by one shared
right-to-left fold over the deeper coefficients.  An entire function turns
into such a measure by placing the principal square root of its n-th
coefficient at the point n; integrating that measure against the orbit
n -> sqrt(a_n) T^n recovers sum a_n T^n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .series import PowerSeries
from .tower import INFINITY, TowerPoint

__all__ = [
    "LevelMeasure",
    "PairingResult",
    "TowerMeasure",
    "add_measures",
    "dirac",
    "dirac_tower",
    "lp_norm",
    "pair",
    "pushforward",
    "scale_measure",
    "series_measure",
]

_TERM_BUDGET = 10_000
_TERM_FLOOR = 1e-18
_CONSECUTIVE_SMALL = 5


@dataclass(frozen=True)
class LevelMeasure:
    """Weights on one level: entries 0..level are the finite points, the last is oo."""

    level: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex)  # private copy: frozen below
        if w.ndim != 1 or w.shape[0] != self.level + 2:
            raise ValueError(f"level {self.level} needs {self.level + 2} weights")
        if w.size and not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def weight_at(self, x: TowerPoint) -> complex:
        if x.is_infinity:
            return complex(self.weights[-1])
        if x.index > self.level:
            raise ValueError(f"point outside level: {x!r} not in level {self.level}")
        return complex(self.weights[x.index])


def lp_norm(m: LevelMeasure, p: float) -> float:
    """sum over the level of |weight|^p, for 0 < p <= 1."""
    if not 0 < p <= 1:
        raise ValueError("exponent p must lie in (0, 1]")
    return float(np.sum(np.abs(m.weights) ** p))


def dirac(x: TowerPoint, level: int) -> LevelMeasure:
    """Unit point mass at x within the given level."""
    w = np.zeros(level + 2, dtype=complex)
    if x.is_infinity:
        w[-1] = 1.0
    else:
        if x.index > level:
            raise ValueError(f"point outside level: {x!r} not in level {level}")
        w[x.index] = 1.0
    return LevelMeasure(level, w)


def pushforward(m: LevelMeasure, i: int) -> LevelMeasure:
    """Push weights from level m.level down to level i along the transition map.

    The collapsed mass is accumulated from the deepest finite point downward;
    this exact fold order is what makes coherence of tower measures an exact
    floating-point identity rather than an approximate one.
    """
    j = m.level
    if i < 0 or i > j:
        raise ValueError("pushforward target must satisfy 0 <= i <= level")
    acc = complex(m.weights[-1])
    for n in range(j, i, -1):
        acc = complex(m.weights[n]) + acc
    w = np.empty(i + 2, dtype=complex)
    w[: i + 1] = m.weights[: i + 1]
    w[-1] = acc
    return LevelMeasure(i, w)


@dataclass(frozen=True)
class TowerMeasure:
    """A coherent, lp-bounded family of level measures up to ``depth``.

    ``bound_c`` dominates every level's lp norm at exponent ``p``;
    ``witness_p`` (= p/2) and ``witness_bound`` certify that the same family
    is also bounded at a strictly smaller exponent.
    """

    p: float
    depth: int
    levels: tuple[LevelMeasure, ...]
    bound_c: float
    witness_p: float
    witness_bound: float

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError("exponent p must lie in (0, 1]")
        if len(self.levels) != self.depth + 1:
            raise ValueError("levels must cover 0..depth")
        for i, lv in enumerate(self.levels):
            if lv.level != i:
                raise ValueError("levels must be stored in ascending order")

    def level(self, i: int) -> LevelMeasure:
        return self.levels[i]

    def level_norms(self, p: float | None = None) -> list[float]:
        q = self.p if p is None else p
        return [lp_norm(lv, q) for lv in self.levels]

    def is_coherent(self) -> bool:
        """Exact (bitwise) coherence of adjacent levels under pushforward."""
        for j in range(1, self.depth + 1):
            lower = pushforward(self.levels[j], j - 1)
            if not np.array_equal(lower.weights, self.levels[j - 1].weights):
                return False
        return True


def series_measure(f: PowerSeries, p: float, depth: int,
                   term_budget: int = _TERM_BUDGET) -> TowerMeasure:
    """The tower measure of an entire function: weight sqrt(a_n) at the point n.

    The infinity weight of level i carries the tail mass sum_{n>i} sqrt(a_n),
    which keeps the family exactly coherent under pushforward.  The lp bound
    is c0 = sum |sqrt(a_n)|^p; summation stops once terms stay negligible, and
    a series whose terms never do (not entire, or p-mass divergent) raises.
    """
    if not 0 < p <= 1:
        raise ValueError("exponent p must lie in (0, 1]")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    witness_p = p / 2
    roots: list[complex] = []
    small_run = 0
    n = 0
    while True:
        w = cmath.sqrt(f.coeff(n))
        roots.append(w)
        small_run = small_run + 1 if abs(w) ** p < _TERM_FLOOR else 0
        if small_run >= _CONSECUTIVE_SMALL and n > depth:
            break
        n += 1
        if n > term_budget:
            raise ValueError("not p-summable at requested depth")
    moduli = np.abs(np.asarray(roots))
    bound_c = float(np.sum(moduli ** p))
    witness_bound = float(np.sum(moduli ** witness_p))

    cap = len(roots) - 1
    tails: list[complex] = [0j] * (depth + 1)
    acc = 0j
    for k in range(cap, depth, -1):
        acc = roots[k] + acc
    tails[depth] = acc
    for i in range(depth - 1, -1, -1):
        tails[i] = roots[i + 1] + tails[i + 1]

    levels = []
    for i in range(depth + 1):
        w = np.empty(i + 2, dtype=complex)
        w[: i + 1] = roots[: i + 1]
        w[-1] = tails[i]
        levels.append(LevelMeasure(i, w))
    return TowerMeasure(p, depth, tuple(levels), bound_c, witness_p, witness_bound)


def dirac_tower(x: TowerPoint, p: float, depth: int) -> TowerMeasure:
    """The coherent lift of a unit point mass: at shallow levels it sits at oo."""
    if not 0 < p <= 1:
        raise ValueError("exponent p must lie in (0, 1]")
    levels = []
    for i in range(depth + 1):
        if x.is_infinity or x.index > i:
            levels.append(dirac(INFINITY, i))
        else:
            levels.append(dirac(x, i))
    return TowerMeasure(p, depth, tuple(levels), 1.0, p / 2, 1.0)


def scale_measure(mu: TowerMeasure, alpha: complex) -> TowerMeasure:
    """Scalar multiple; coherence then holds up to rounding rather than exactly."""
    alpha = complex(alpha)
    levels = tuple(LevelMeasure(lv.level, alpha * lv.weights) for lv in mu.levels)
    s = abs(alpha)
    return TowerMeasure(mu.p, mu.depth, levels, s ** mu.p * mu.bound_c,
                        mu.witness_p, s ** mu.witness_p * mu.witness_bound)


def add_measures(mu: TowerMeasure, nu: TowerMeasure) -> TowerMeasure:
    """Levelwise sum; the lp bound adds by p-subadditivity of |.|^p for p <= 1."""
    if mu.p != nu.p or mu.depth != nu.depth:
        raise ValueError("measures must share exponent and depth to be added")
    levels = tuple(LevelMeasure(a.level, a.weights + b.weights)
                   for a, b in zip(mu.levels, nu.levels))
    return TowerMeasure(mu.p, mu.depth, levels, mu.bound_c + nu.bound_c,
                        mu.witness_p, mu.witness_bound + nu.witness_bound)


@dataclass(frozen=True)
class PairingResult:
    """Integral value plus a truncation estimate for the discarded deep terms."""

    value: np.ndarray
    truncation_estimate: float
    terms_used: int


def pair(mu: TowerMeasure, orbit: Callable[[TowerPoint], np.ndarray],
         tol: float = 1e-12) -> PairingResult:
    """Integrate an orbit map against a tower measure.

    Sums weight(n) * orbit(n) over the finite points of the deepest level, in
    ascending order.  The orbit must vanish at infinity (that is what lets the
    infinity weight be ignored) and take values of one fixed shape.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    at_inf = np.asarray(orbit(INFINITY), dtype=complex)
    if at_inf.size and np.any(at_inf != 0):
        raise ValueError("orbit must vanish at infinity")
    deepest = mu.levels[-1]
    acc = np.zeros_like(at_inf)
    recent = 0.0
    for n in range(mu.depth + 1):
        v = np.asarray(orbit(TowerPoint.finite(n)), dtype=complex)
        if v.shape != at_inf.shape:
            raise ValueError("orbit values must all have the same shape")
        acc = acc + complex(deepest.weights[n]) * v
        if n >= mu.depth - 2:
            recent = max(recent, float(np.linalg.norm(v.ravel())))
    estimate = abs(complex(deepest.weights[-1])) * recent
    return PairingResult(acc, estimate, mu.depth + 1)
