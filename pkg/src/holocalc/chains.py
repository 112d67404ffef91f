"""Bounded chain complexes of finite-dimensional spaces.

Uses homological (lower) grading: the differential leaving degree i lands in
degree i-1.  Homology bases are harmonic representatives (kernel of the
outgoing differential intersected with the orthogonal complement of the
incoming image), computed through SVD numerical rank.  The headline check,
:func:`verify_homology_compat`, confirms degree by degree that applying an
entire function to a chain endomorphism commutes with passing to homology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matfunc import func_calc_series, oracle_eigen
from .series import PowerSeries

__all__ = [
    "ChainComplex",
    "ChainEndo",
    "CompatEntry",
    "CompatReport",
    "HomologyBasis",
    "ValidationReport",
    "func_calc_chain",
    "homology_basis",
    "induced_on_homology",
    "validate",
    "verify_homology_compat",
]

_VALIDATE_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9


def _as_map(mat, rows: int, cols: int, what: str) -> np.ndarray:
    a = np.array(mat, dtype=complex)  # private copy: frozen below
    if a.ndim != 2 or a.shape != (rows, cols):
        raise ValueError(f"{what} must have shape {(rows, cols)}, got {a.shape}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError(f"{what} entries must be finite")
    a.setflags(write=False)
    return a


def _fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a)) if a.size else 0.0


@dataclass(frozen=True)
class ChainComplex:
    """Degrees d_min .. d_min+len(dims)-1 with differentials[j]: C_{d_min+j+1} -> C_{d_min+j}."""

    d_min: int
    dims: tuple[int, ...]
    differentials: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 0 for d in dims):
            raise ValueError("dims must be a nonempty list of nonnegative sizes")
        if len(self.differentials) != len(dims) - 1:
            raise ValueError("need exactly one differential per adjacent degree pair")
        diffs = tuple(
            _as_map(m, dims[j], dims[j + 1], f"differential into degree {self.d_min + j}")
            for j, m in enumerate(self.differentials)
        )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", diffs)

    @property
    def d_max(self) -> int:
        return self.d_min + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.d_min, self.d_max + 1)

    def dim(self, degree: int) -> int:
        return self.dims[degree - self.d_min]

    def d_out(self, degree: int) -> np.ndarray | None:
        """The differential leaving ``degree`` (None at the bottom)."""
        j = degree - self.d_min - 1
        return self.differentials[j] if j >= 0 else None

    def d_in(self, degree: int) -> np.ndarray | None:
        """The differential entering ``degree`` from above (None at the top)."""
        j = degree - self.d_min
        return self.differentials[j] if j < len(self.differentials) else None


@dataclass(frozen=True)
class ChainEndo:
    """Degreewise square maps, stored in the same order as the complex dims."""

    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        maps = tuple(_as_map(m, np.asarray(m).shape[0], np.asarray(m).shape[0],
                             f"endomorphism component {k}")
                     for k, m in enumerate(self.maps))
        object.__setattr__(self, "maps", maps)


def _check_aligned(cx: ChainComplex, endo: ChainEndo) -> None:
    if len(endo.maps) != len(cx.dims):
        raise ValueError("endomorphism must have one component per degree")
    for k, (m, d) in enumerate(zip(endo.maps, cx.dims)):
        if m.shape != (d, d):
            raise ValueError(f"endomorphism component {k} must be {d}x{d}")


@dataclass(frozen=True)
class ResidualEntry:
    degree: int
    residual: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    d_squared: list[ResidualEntry] = field(default_factory=list)
    chain_map: list[ResidualEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.d_squared) and all(e.ok for e in self.chain_map)


def validate(cx: ChainComplex, endo: ChainEndo | None = None,
             tol: float = _VALIDATE_TOL) -> ValidationReport:
    """Report d*d residuals and, when an endomorphism is given, chain-map residuals."""
    report = ValidationReport()
    for j in range(len(cx.differentials) - 1):
        upper = cx.differentials[j + 1]
        lower = cx.differentials[j]
        res = _fro(lower @ upper)
        bound = tol * (1.0 + _fro(lower) * _fro(upper))
        report.d_squared.append(ResidualEntry(cx.d_min + j, res, bound, res <= bound))
    if endo is not None:
        _check_aligned(cx, endo)
        for j, d in enumerate(cx.differentials):
            t_src = endo.maps[j + 1]
            t_dst = endo.maps[j]
            res = _fro(d @ t_src - t_dst @ d)
            bound = tol * (1.0 + _fro(d) * (_fro(t_src) + _fro(t_dst)))
            report.chain_map.append(ResidualEntry(cx.d_min + j, res, bound, res <= bound))
    return report


def _svd_rank(a: np.ndarray, rank_tol: float) -> tuple[int, np.ndarray, np.ndarray, bool]:
    """(rank, left singular vectors, right singular vectors as rows, ambiguity flag)."""
    u, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return 0, u, vh, False
    cut = rank_tol * s[0]
    rank = int(np.sum(s > cut))
    ambiguous = bool(np.any((s > cut / 10) & (s < cut * 10)))
    return rank, u, vh, ambiguous


def _kernel_basis(a: np.ndarray | None, ncols: int,
                  rank_tol: float) -> tuple[np.ndarray, int, bool]:
    """Orthonormal kernel basis, rank, ambiguity flag.  Absent/zero maps give identity."""
    if a is None or a.shape[0] == 0 or ncols == 0 or not a.size or not np.any(a):
        return np.eye(ncols, dtype=complex), 0, False
    rank, _, vh, amb = _svd_rank(a, rank_tol)
    return vh[rank:].conj().T, rank, amb


def _image_basis(a: np.ndarray | None, nrows: int,
                 rank_tol: float) -> tuple[np.ndarray, int, bool]:
    """Orthonormal image basis, rank, ambiguity flag."""
    if a is None or a.shape[1] == 0 or nrows == 0 or not a.size or not np.any(a):
        return np.zeros((nrows, 0), dtype=complex), 0, False
    rank, u, _, amb = _svd_rank(a, rank_tol)
    return u[:, :rank], rank, amb


@dataclass(frozen=True)
class HomologyBasis:
    """Per-degree orthonormal harmonic representatives and Betti numbers."""

    d_min: int
    representatives: tuple[np.ndarray, ...]
    betti: tuple[int, ...]
    ambiguous: tuple[bool, ...]


def homology_basis(cx: ChainComplex, rank_tol: float = DEFAULT_RANK_TOL) -> HomologyBasis:
    """Harmonic representatives ker(d_out) intersect im(d_in)^perp, degree by degree.

    Betti numbers follow dim - rank(d_out) - rank(d_in) with SVD ranks; a degree
    is flagged ambiguous when some singular value falls within a factor of 10
    of the rank threshold on either side.
    """
    reps: list[np.ndarray] = []
    betti: list[int] = []
    flags: list[bool] = []
    for degree in cx.degrees:
        n = cx.dim(degree)
        kernel, rank_out, amb_out = _kernel_basis(cx.d_out(degree), n, rank_tol)
        image, rank_in, amb_in = _image_basis(cx.d_in(degree), n, rank_tol)
        b = n - rank_out - rank_in
        ambiguous = amb_out or amb_in
        if b < 0:  # numerically inconsistent ranks; clamp and flag
            b = 0
            ambiguous = True
        if rank_in == 0:
            rep = kernel
        else:
            overlap = image.conj().T @ kernel
            _, _, vh = np.linalg.svd(overlap)
            rep = kernel @ vh[vh.shape[0] - b:].conj().T if b else kernel[:, :0]
        reps.append(rep)
        betti.append(b)
        flags.append(ambiguous)
    return HomologyBasis(cx.d_min, tuple(reps), tuple(betti), tuple(flags))


def induced_on_homology(cx: ChainComplex, endo: ChainEndo,
                        basis: HomologyBasis) -> list[np.ndarray]:
    """The maps a chain endomorphism induces on homology, in the harmonic bases.

    For a chain map, T applied to a cycle stays a cycle, and its class in the
    quotient is its orthogonal projection back onto the harmonic subspace, so
    the induced map is R^H T R.
    """
    _check_aligned(cx, endo)
    return [r.conj().T @ t @ r for r, t in zip(basis.representatives, endo.maps)]


def func_calc_chain(f: PowerSeries, endo: ChainEndo, tol: float = 1e-12,
                    max_terms: int = 500) -> ChainEndo:
    """Apply an entire function degreewise; sums and powers of chain maps stay chain maps."""
    return ChainEndo(tuple(func_calc_series(f, m, tol, max_terms)[0] for m in endo.maps))


@dataclass(frozen=True)
class CompatEntry:
    degree: int
    delta: float
    bound: float
    used_oracle: bool
    passed: bool


@dataclass(frozen=True)
class CompatReport:
    entries: tuple[CompatEntry, ...]
    max_delta: float

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def verify_homology_compat(cx: ChainComplex, endo: ChainEndo, f: PowerSeries,
                           tol: float = 1e-8, rank_tol: float = DEFAULT_RANK_TOL,
                           series_tol: float = 1e-12,
                           max_terms: int = 500) -> CompatReport:
    """Check degreewise that H(f(T)) equals f(H(T)).

    The left side applies f to the chain endomorphism and passes to homology;
    the right side passes to homology first and applies f classically through
    the eigendecomposition oracle (falling back to direct series summation
    when the oracle rejects the induced map).  Failures become report entries,
    never exceptions.
    """
    checks = validate(cx, endo)
    if not checks.passed:
        raise ValueError("complex or endomorphism fails validation")
    basis = homology_basis(cx, rank_tol)
    f_endo = func_calc_chain(f, endo, series_tol, max_terms)
    on_h = induced_on_homology(cx, endo, basis)
    on_h_after_f = induced_on_homology(cx, f_endo, basis)

    entries: list[CompatEntry] = []
    for idx, degree in enumerate(cx.degrees):
        h = on_h[idx]
        if h.shape[0] == 0:
            entries.append(CompatEntry(degree, 0.0, tol, False, True))
            continue
        try:
            rhs = oracle_eigen(f, h)
            used_oracle = True
        except ValueError:
            rhs, _ = func_calc_series(f, h, series_tol, max_terms)
            used_oracle = False
        delta = _fro(on_h_after_f[idx] - rhs)
        bound = tol * (1.0 + _fro(rhs))
        entries.append(CompatEntry(degree, delta, bound, used_oracle, delta <= bound))
    max_delta = max((e.delta for e in entries), default=0.0)
    return CompatReport(tuple(entries), max_delta)
