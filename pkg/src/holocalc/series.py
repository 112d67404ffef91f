"""Entire functions as coefficient streams, with convergence diagnostics.

A :class:`PowerSeries` represents f(z) = sum a_n z^n through one of three
rules: an explicit finite coefficient list, a first-order recurrence
a_{n+1} = r(n) * a_n with r a rational function of n, or a named builtin
(exp, sin, cos, sinh, cosh).  Coefficients are produced without ever forming
n! as a float, and every series tracks structural zeros and log-magnitudes
separately from the raw values, so ratio and root diagnostics keep working
far past the point where 1/n! underflows to zero in double precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "BUILTIN_NAMES",
    "ConvergenceError",
    "PowerSeries",
    "RatioReport",
    "eval_scalar",
    "power_ratio_check",
    "ratio_test",
    "root_test",
    "truncation_point",
]

BUILTIN_NAMES = ("exp", "sin", "cos", "sinh", "cosh")

#: ratios within this distance of 1 are treated as undecidable
RATIO_MARGIN = 1e-6

#: ratio estimates require at least this fraction of defined consecutive pairs
MIN_DEFINED_FRACTION = 0.9

# terms this far below the requested tolerance are treated as spent tail mass
_FLOOR_FACTOR = 1e-9
_CONSECUTIVE_SMALL = 5
_LOOKAHEAD = 256


class ConvergenceError(RuntimeError):
    """A partial-sum evaluation could not certify its tail within budget.

    ``partial`` holds the best partial result available (scalar or matrix);
    ``report`` holds the convergence report when the caller built one.
    """

    def __init__(self, message: str, partial=None, report=None):
        super().__init__(message)
        self.partial = partial
        self.report = report


def _builtin_is_zero(name: str, n: int) -> bool:
    if name == "exp":
        return False
    if name in ("sin", "sinh"):
        return n % 2 == 0
    return n % 2 == 1  # cos, cosh


def _builtin_sign(name: str, n: int) -> int:
    if name == "sin":
        return -1 if ((n - 1) // 2) % 2 else 1
    if name == "cos":
        return -1 if (n // 2) % 2 else 1
    return 1


class PowerSeries:
    """A complex power series with lazily cached coefficients.

    Instances are immutable from the caller's point of view; the internal
    coefficient cache is guarded by a lock so values may be shared freely
    between threads.
    """

    def __init__(self, kind: str, name: str, *, coeffs=None, a0=None,
                 num=None, den=None, builtin=None):
        self._kind = kind
        self.name = name
        self._lock = threading.Lock()
        self._vals: list[complex] = []
        self._logs: list[float] = []
        self._zero: list[bool] = []
        if kind == "explicit":
            self._coeffs = [complex(c) for c in coeffs]
            if not all(math.isfinite(c.real) and math.isfinite(c.imag)
                       for c in self._coeffs):
                raise ValueError("explicit coefficients must be finite")
        elif kind == "recurrence":
            self._a0 = complex(a0)
            self._num = [float(c) for c in num]
            self._den = [float(c) for c in den]
            if not self._num or not self._den:
                raise ValueError("recurrence needs numerator and denominator coefficients")
        elif kind == "builtin":
            if builtin not in BUILTIN_NAMES:
                raise ValueError(f"unknown builtin series {builtin!r}")
            self._builtin = builtin
        else:
            raise ValueError(f"unknown series rule {kind!r}")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs, name: str = "explicit") -> "PowerSeries":
        """Series from an explicit coefficient list; indices beyond the list are zero."""
        return cls("explicit", name, coeffs=list(coeffs))

    @classmethod
    def from_recurrence(cls, a0, num, den, name: str = "recurrence") -> "PowerSeries":
        """Series with a_{n+1} = r(n) a_n, where r = num/den in ascending powers of n."""
        return cls("recurrence", name, a0=a0, num=num, den=den)

    @classmethod
    def builtin(cls, name: str) -> "PowerSeries":
        return cls("builtin", name, builtin=name)

    def __repr__(self) -> str:
        return f"PowerSeries({self.name!r})"

    # -- coefficient access -------------------------------------------

    def _rational_factor(self, n: int) -> float:
        num = 0.0
        for c in reversed(self._num):
            num = num * n + c
        den = 0.0
        for c in reversed(self._den):
            den = den * n + c
        if den == 0.0:
            raise ValueError(f"recurrence denominator vanishes at n={n}")
        return num / den

    def _extend(self, n: int) -> None:
        while len(self._vals) <= n:
            k = len(self._vals)
            if self._kind == "explicit":
                v = self._coeffs[k] if k < len(self._coeffs) else 0j
                z = v == 0
                lg = -math.inf if z else math.log(abs(v))
            elif self._kind == "recurrence":
                if k == 0:
                    v = self._a0
                    z = v == 0
                    lg = -math.inf if z else math.log(abs(v))
                else:
                    r = self._rational_factor(k - 1)
                    v = self._vals[k - 1] * r
                    z = self._zero[k - 1] or r == 0.0
                    lg = -math.inf if z else self._logs[k - 1] + math.log(abs(r))
            elif _builtin_is_zero(self._builtin, k):
                v, z, lg = 0j, True, -math.inf
            else:
                # exact rounding of 1/k!; never forms k! as a float
                v = complex(_builtin_sign(self._builtin, k)
                            * float(Fraction(1, math.factorial(k))))
                z = False
                lg = -math.lgamma(k + 1)
            self._vals.append(v)
            self._logs.append(lg)
            self._zero.append(z)

    def coeff(self, n: int) -> complex:
        """Coefficient a_n.  Indices beyond an explicit list give zero."""
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        with self._lock:
            self._extend(n)
            return self._vals[n]

    def log_abs_coeff(self, n: int) -> float:
        """log |a_n|, tracked independently of value underflow; -inf for structural zeros."""
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        with self._lock:
            self._extend(n)
            return self._logs[n]

    def is_structural_zero(self, n: int) -> bool:
        """True when a_n is zero by the defining rule (not by underflow)."""
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        with self._lock:
            self._extend(n)
            return self._zero[n]

    def abs_ratio(self, n: int) -> float | None:
        """|a_{n+1} / a_n| when defined, else None.

        Defined means a_n is structurally nonzero; for explicit lists the
        pair must also lie inside the stored support, so trailing padding
        zeros do not manufacture spurious zero ratios.  The value is taken
        from the defining rule itself (the recurrence factor, the builtin
        factorial step), which keeps it accurate long after the raw
        coefficients underflow.
        """
        if self.is_structural_zero(n):
            return None
        if self._kind == "explicit":
            if n + 1 >= len(self._coeffs):
                return None
            return abs(self._coeffs[n + 1]) / abs(self._coeffs[n])
        if self._kind == "recurrence":
            return abs(self._rational_factor(n))
        if _builtin_is_zero(self._builtin, n + 1):
            return 0.0
        return 1.0 / (n + 1)  # exp is the only builtin with adjacent nonzeros

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if self._kind == "explicit" and other._kind == "explicit":
            n = max(len(self._coeffs), len(other._coeffs))
            mine = self._coeffs + [0j] * (n - len(self._coeffs))
            theirs = other._coeffs + [0j] * (n - len(other._coeffs))
            return PowerSeries.from_coeffs(
                [a + b for a, b in zip(mine, theirs)],
                name=f"{self.name}+{other.name}",
            )
        raise TypeError("series addition is supported for explicit coefficient lists")


@dataclass(frozen=True)
class RatioReport:
    """Outcome of the consecutive-coefficient ratio diagnostic.

    ``n_used`` counts the defined consecutive ratios; ``limit_estimate`` is
    the final defined ratio (None when no pair was defined);
    ``zero_coefficient_indices`` lists the structural zeros encountered.
    """

    n_used: int
    limit_estimate: float | None
    zero_coefficient_indices: list[int] = field(default_factory=list)
    verdict: str = "inconclusive"


def ratio_test(f: PowerSeries, n_max: int) -> RatioReport:
    """Estimate lim |a_{n+1}/a_n| from the first ``n_max`` coefficient pairs.

    The verdict is ``passes`` when the estimated limit is below 1,
    ``fails`` above 1, and ``inconclusive`` when the estimate sits within
    ``RATIO_MARGIN`` of 1 or fewer than 90% of the consecutive pairs have a
    nonzero denominator (sparse series such as sin; use :func:`root_test`
    for those).
    """
    if n_max < 2:
        raise ValueError("ratio test needs n_max >= 2")
    zero_idx = [n for n in range(n_max + 1) if f.is_structural_zero(n)]
    if len(zero_idx) == n_max + 1:
        # the zero function is entire
        return RatioReport(0, 0.0, zero_idx, "passes")

    last = None
    n_defined = 0
    for n in range(n_max):
        r = f.abs_ratio(n)
        if r is not None:
            n_defined += 1
            last = r
    if last is None:
        return RatioReport(0, None, zero_idx, "inconclusive")
    if n_defined / n_max < MIN_DEFINED_FRACTION:
        verdict = "inconclusive"
    elif abs(last - 1.0) <= RATIO_MARGIN:
        verdict = "inconclusive"
    elif last < 1.0:
        verdict = "passes"
    else:
        verdict = "fails"
    return RatioReport(n_defined, last, zero_idx, verdict)


def power_ratio_check(f: PowerSeries, r: float, n_max: int, tol: float = 1e-6) -> bool:
    """Check that the ratio limit of |a_n|^r equals the r-th power of the ratio limit.

    The two sides are computed through different bookkeeping: the base limit
    comes from the defining-rule ratios, the powered limit from scaled
    log-magnitudes of the coefficients themselves.
    """
    if r <= 0:
        raise ValueError("exponent r must be positive")
    report = ratio_test(f, n_max)
    if report.limit_estimate is None:
        raise ValueError("ratio limit undefined")
    target = report.limit_estimate ** r

    for n in range(n_max - 1, -1, -1):
        if f.abs_ratio(n) is not None:
            step = f.log_abs_coeff(n + 1) - f.log_abs_coeff(n)
            powered = 0.0 if step == -math.inf else math.exp(r * step)
            return abs(powered - target) <= tol
    raise ValueError("ratio limit undefined")


def root_test(f: PowerSeries, n_max: int) -> float:
    """Max of |a_n|^{1/n} over a trailing window; tends to 0 for entire functions."""
    if n_max < 2:
        raise ValueError("root test needs n_max >= 2")
    window = max(5, n_max // 5)
    worst = 0.0
    for n in range(max(1, n_max - window + 1), n_max + 1):
        lg = f.log_abs_coeff(n)
        if lg == -math.inf:
            continue
        worst = max(worst, math.exp(min(lg / n, 700.0)))
    return worst


def _exp_or_inf(x: float) -> float:
    if x == -math.inf:
        return 0.0
    if x > 700.0:
        return math.inf
    return math.exp(x)


def truncation_point(f: PowerSeries, radius: float, tol: float, max_terms: int,
                     lookahead: int = _LOOKAHEAD) -> tuple[int, float]:
    """Smallest n with sum_{k>n} |a_k| radius^k <= tol, plus that tail bound.

    The magnitude series is scanned (in log space) until ``_CONSECUTIVE_SMALL``
    successive terms drop below ``tol * _FLOOR_FACTOR``; the suffix sums of the
    scanned terms then bound the true tails up to mass that is orders of
    magnitude below ``tol``.  Raises :class:`ConvergenceError` when no such n
    exists within ``max_terms`` (the caller attaches its partial result).
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius == 0.0:
        return 0, 0.0
    log_radius = math.log(radius)
    log_floor = math.log(tol) + math.log(_FLOOR_FACTOR)

    logs: list[float] = []
    small_run = 0
    horizon = None
    for k in range(max_terms + lookahead + 1):
        lm = f.log_abs_coeff(k) + k * log_radius
        logs.append(lm)
        small_run = small_run + 1 if lm < log_floor else 0
        if small_run >= _CONSECUTIVE_SMALL:
            horizon = k
            break
    if horizon is None:
        raise ConvergenceError("did not converge within budget: terms never fell below the tail floor")

    suffix = [0.0] * (horizon + 1)
    for k in range(horizon, 0, -1):
        suffix[k - 1] = suffix[k] + _exp_or_inf(logs[k])
    for n in range(min(max_terms, horizon) + 1):
        if suffix[n] <= tol:
            return n, suffix[n]
    raise ConvergenceError("did not converge within budget: tail bound exceeds tolerance at the term limit")


def eval_scalar(f: PowerSeries, z: complex, tol: float = 1e-12,
                max_terms: int = 500) -> complex:
    """Evaluate f(z) by partial sums, stopping once the tail bound is below tol."""
    z = complex(z)
    try:
        n_stop, _ = truncation_point(f, abs(z), tol, max_terms)
    except ConvergenceError as exc:
        partial = 0j
        zp = 1 + 0j
        for k in range(max_terms + 1):
            partial += f.coeff(k) * zp
            zp *= z
        raise ConvergenceError(str(exc), partial=partial) from None
    acc = 0j
    zp = 1 + 0j
    for k in range(n_stop + 1):
        acc += f.coeff(k) * zp
        zp *= z
    return acc
