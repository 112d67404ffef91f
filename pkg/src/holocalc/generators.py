"""Random test objects with exactly known structure.

Complexes are direct sums of elementary pieces (two-term identity complexes,
which are acyclic, and one-term zero-differential summands, which each
contribute one to a Betti number), conjugated degreewise by integer
unimodular matrices.  Everything stays integer-valued, so d composed with d
is exactly zero in floating point and the Betti numbers are known by
construction.  Chain endomorphisms act blockwise on the pieces before
conjugation, which makes them exact chain maps up to rounding.
"""

from __future__ import annotations

import numpy as np

from .chains import ChainComplex, ChainEndo
from .matfunc import as_operator, spectral_norm

__all__ = [
    "random_chain_complex",
    "random_diagonalizable",
    "unimodular_pair",
]


def unimodular_pair(rng: np.random.Generator, n: int, steps: int = 4,
                    cond_cap: float = 1e4) -> tuple[np.ndarray, np.ndarray]:
    """An integer matrix with determinant +-1 and its exact integer inverse."""
    if n == 0:
        z = np.zeros((0, 0), dtype=np.int64)
        return z, z.copy()
    while True:
        p = np.eye(n, dtype=np.int64)
        pinv = np.eye(n, dtype=np.int64)
        for _ in range(steps):
            kind = rng.integers(0, 3)
            i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
            if kind == 0 and n > 1:
                c = int(rng.choice([-2, -1, 1, 2]))
                p[i] += c * p[j]
                pinv[:, j] -= c * pinv[:, i]
            elif kind == 1 and n > 1:
                p[[i, j]] = p[[j, i]]
                pinv[:, [i, j]] = pinv[:, [j, i]]
            else:
                p[i] = -p[i]
                pinv[:, i] = -pinv[:, i]
        if np.linalg.cond(p.astype(float)) <= cond_cap:
            return p, pinv


def random_chain_complex(
    rng: np.random.Generator,
    max_degrees: int = 4,
    max_dim: int = 6,
    endo_scale: float = 1.0,
    integer_only: bool = False,
) -> tuple[ChainComplex, ChainEndo, list[int]]:
    """A random valid complex, a chain endomorphism for it, and its Betti numbers.

    With ``integer_only`` the endomorphism blocks are small integers too, so
    the returned endo is an exact chain map; otherwise blocks are complex
    Gaussian.  Differentials are always integer with d*d exactly zero.
    """
    while True:
        k = int(rng.integers(1, max_degrees + 1))
        d_min = int(rng.integers(-2, 3))
        pieces = [int(rng.integers(0, 3)) for _ in range(max(k - 1, 0))]
        trivial = [int(rng.integers(0, 3)) for _ in range(k)]
        dims = []
        for pos in range(k):
            above = pieces[pos] if pos < k - 1 else 0
            below = pieces[pos - 1] if pos > 0 else 0
            cap = max_dim - above - below
            if cap < 0:
                dims = []
                break
            trivial[pos] = min(trivial[pos], cap)
            dims.append(trivial[pos] + above + below)
        if dims and sum(dims) > 0:
            break

    # block layout per degree: [trivial | piece targets (above) | piece sources (below)]
    diffs = []
    for pos in range(k - 1):
        m = pieces[pos]
        d = np.zeros((dims[pos], dims[pos + 1]), dtype=np.int64)
        row0 = trivial[pos]
        col0 = trivial[pos + 1] + (pieces[pos + 1] if pos + 1 < k - 1 else 0)
        for r in range(m):
            d[row0 + r, col0 + r] = 1
        diffs.append(d)

    def block(size: int) -> np.ndarray:
        if integer_only:
            return rng.integers(-2, 3, size=(size, size)).astype(complex)
        return endo_scale * (rng.standard_normal((size, size))
                             + 1j * rng.standard_normal((size, size)))

    trivial_blocks = [block(t) for t in trivial]
    piece_blocks = [block(m) for m in pieces]
    endos = []
    for pos in range(k):
        above = pieces[pos] if pos < k - 1 else 0
        below = pieces[pos - 1] if pos > 0 else 0
        t = np.zeros((dims[pos], dims[pos]), dtype=complex)
        t[: trivial[pos], : trivial[pos]] = trivial_blocks[pos]
        if above:
            s = trivial[pos]
            t[s : s + above, s : s + above] = piece_blocks[pos]
        if below:
            s = trivial[pos] + above
            t[s : s + below, s : s + below] = piece_blocks[pos - 1]
        endos.append(t)

    basis = [unimodular_pair(rng, d) for d in dims]
    conj_diffs = []
    for pos, d in enumerate(diffs):
        p_low, _ = basis[pos]
        _, pinv_high = basis[pos + 1]
        conj_diffs.append((p_low @ d @ pinv_high).astype(complex))
    conj_endos = []
    for pos, t in enumerate(endos):
        p, pinv = basis[pos]
        conj_endos.append(p.astype(complex) @ t @ pinv.astype(complex))

    cx = ChainComplex(d_min, tuple(dims), tuple(conj_diffs))
    endo = ChainEndo(tuple(conj_endos))
    return cx, endo, list(trivial)


def random_diagonalizable(rng: np.random.Generator, dim: int,
                          cond_cap: float = 100.0,
                          norm_cap: float = 2.0) -> np.ndarray:
    """A random diagonalizable matrix with bounded eigenvector conditioning and norm."""
    while True:
        vecs = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        sing = np.linalg.svd(vecs, compute_uv=False)
        if sing[-1] > 0 and sing[0] / sing[-1] <= cond_cap:
            break
    lam = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    mat = vecs @ np.diag(lam) @ np.linalg.inv(vecs)
    target = rng.uniform(0.4, 1.0) * norm_cap
    mat *= target / spectral_norm(mat)
    return as_operator(mat)
