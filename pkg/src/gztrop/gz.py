"""Gelfand-Zeitlin action and angle coordinates on Hermitian matrices.

Actions are the ordered eigenvalues lambda_i^(k) of the bottom-right k x k
submatrices.  Ladder coordinates are the partial sums ell_i^(k) =
lambda_1^(k) + ... + lambda_i^(k); the interlacing inequalities become the
rhombus inequalities

    ell_i^(k+1) + ell_{i-1}^(k) >= ell_{i-1}^(k+1) + ell_i^(k)
    ell_i^(k+1) + ell_i^(k)     >= ell_{i+1}^(k+1) + ell_{i-1}^(k)

with ell_0^(k) = 0.  Angles come from the phases of border eigen-components:
write the bottom-right (k+1) block as [[a, r], [r*, A^(k)]] and expand the
border row r in the eigenbasis of A^(k).  With eigenvector phases anchored on
the first (topmost) component, v = U^T r is invariant under every deeper
torus flow, so arg(v_i) is an exact angle conjugate to lambda_i^(k).  For
n = 2 this reduces to psi_1^(1) = Arg(A[0, 1]).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBorderError, DomainError
from .linalg import anchor_phases, eig_hermitian, hermitian_part, require_hermitian

TWO_PI = 2.0 * np.pi

H0_GAP_TOL = 1e-8
BORDER_TOL = 1e-12


def _as_levels(levels, count_of=None) -> tuple[np.ndarray, ...]:
    out = []
    for k, lev in enumerate(levels, start=1):
        arr = np.asarray(lev).reshape(-1)
        # keep extended precision when supplied; everything else becomes float64
        arr = arr.astype(np.longdouble if arr.dtype == np.longdouble else float)
        want = k if count_of is None else count_of(k)
        if arr.size != want:
            raise DomainError(f"level {k} must have {want} entries, got {arr.size}")
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True)
class GZPattern:
    """Triangular array levels[k-1][i-1] = lambda_i^(k), descending in i."""

    levels: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.levels)

    @classmethod
    def from_levels(cls, levels) -> "GZPattern":
        return cls(levels=_as_levels(levels))

    def value(self, i: int, k: int) -> float:
        return float(self.levels[k - 1][i - 1])

    def scaled(self, c: float) -> "GZPattern":
        return GZPattern(levels=tuple(c * lev for lev in self.levels))

    def mapped(self, fn) -> "GZPattern":
        return GZPattern(levels=tuple(fn(lev) for lev in self.levels))


@dataclass(frozen=True)
class LadderVector:
    """Triangular array levels[k-1][i-1] = ell_i^(k) of partial sums."""

    levels: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.levels)

    @classmethod
    def from_levels(cls, levels) -> "LadderVector":
        return cls(levels=_as_levels(levels))

    def value(self, i: int, k: int) -> float:
        return float(self.levels[k - 1][i - 1])

    def flat(self) -> np.ndarray:
        """Concatenate levels k = 1..n, i ascending within each level."""
        return np.concatenate(self.levels)

    @classmethod
    def from_flat(cls, vec, n: int) -> "LadderVector":
        vec = np.asarray(vec, dtype=float).reshape(-1)
        if vec.size != n * (n + 1) // 2:
            raise DomainError(f"flat ladder for n={n} needs {n*(n+1)//2} entries")
        levels, pos = [], 0
        for k in range(1, n + 1):
            levels.append(vec[pos : pos + k].copy())
            pos += k
        return cls(levels=tuple(levels))


@dataclass(frozen=True)
class AnglePattern:
    """Triangular array levels[k-1][i-1] = psi_i^(k) in [0, 2pi), k = 1..n-1."""

    levels: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return len(self.levels) + 1

    @classmethod
    def from_levels(cls, levels) -> "AnglePattern":
        lv = _as_levels(levels)
        return cls(levels=tuple(np.mod(a, TWO_PI) for a in lv))

    @classmethod
    def zero(cls, n: int) -> "AnglePattern":
        return cls(levels=tuple(np.zeros(k) for k in range(1, n)))

    def value(self, i: int, k: int) -> float:
        return float(self.levels[k - 1][i - 1])

    def flat(self) -> np.ndarray:
        return np.concatenate(self.levels) if self.levels else np.zeros(0)


def angle_distance(a, b) -> np.ndarray:
    """Elementwise distance on the circle R/2pi."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def bottom_right_block(a: np.ndarray, k: int) -> np.ndarray:
    n = a.shape[0]
    return a[n - k :, n - k :]


def gz_actions(a: np.ndarray) -> GZPattern:
    """Descending eigenvalues of every bottom-right k x k submatrix."""
    a = require_hermitian(a)
    n = a.shape[0]
    levels = []
    for k in range(1, n + 1):
        levels.append(eig_hermitian(bottom_right_block(a, k)).values.copy())
    return GZPattern(levels=tuple(levels))


def to_ladder(p: GZPattern) -> LadderVector:
    return LadderVector(levels=tuple(np.cumsum(lev) for lev in p.levels))


def from_ladder(l: LadderVector) -> GZPattern:
    return GZPattern(levels=tuple(np.diff(lev, prepend=0.0) for lev in l.levels))


def cone_gap(l: LadderVector) -> float:
    """Minimum slack over both rhombus inequality families; +inf when n = 1.

    Positive gap means the ladder lies in the interior cone; gap > delta
    means membership in the delta-deep subcone.
    """
    n = l.n
    if n <= 1:
        return np.inf
    gap = np.inf
    for k in range(1, n):
        lo = l.levels[k - 1]
        hi = l.levels[k]
        for i in range(1, k + 1):
            lo_im1 = lo[i - 2] if i >= 2 else 0.0
            hi_im1 = hi[i - 2] if i >= 2 else 0.0
            s1 = hi[i - 1] + lo_im1 - hi_im1 - lo[i - 1]
            s2 = hi[i - 1] + lo[i - 1] - hi[i] - lo_im1
            gap = min(gap, s1, s2)
    return float(gap)


def pattern_gap(p: GZPattern) -> float:
    return cone_gap(to_ladder(p))


def interlacing_gap(p: GZPattern) -> float:
    """Minimum interlacing slack, computed entrywise from the levels.

    Equals cone_gap(to_ladder(p)) in exact arithmetic, but stays accurate
    for patterns whose entries span many orders of magnitude (the ladder
    route loses small slacks to cancellation inside the partial sums).
    """
    n = p.n
    if n <= 1:
        return np.inf
    gap = np.inf
    for k in range(1, n):
        lo = p.levels[k - 1]
        hi = p.levels[k]
        gap = min(gap, float(np.min(hi[:k] - lo)), float(np.min(lo - hi[1:])))
    return gap


def _eig_first_anchor(block: np.ndarray):
    """Eigendecomposition with column phases anchored on the first component.

    The first component of every eigenvector is nonzero exactly when the
    interlacing with the one-smaller submatrix is strict, so on the strict
    region this anchor is well defined.  It is also untouched by every
    deeper torus flow, which is what makes the resulting angles canonical.
    """
    dec = eig_hermitian(block)
    top = np.abs(dec.vectors[0, :])
    if np.any(top < BORDER_TOL):
        raise DegenerateBorderError(
            f"first eigenvector component {top.min():.3e} below {BORDER_TOL:.0e}"
        )
    return dec.values, anchor_phases(dec.vectors, row=0)


def gz_angles(a: np.ndarray, gap_tol: float = H0_GAP_TOL) -> AnglePattern:
    """Angle coordinates psi_i^(k) = arg((U^T r)_i) for k = 1..n-1.

    Requires the strictly interlacing region (cone gap >= gap_tol).  The
    convention makes psi identically zero on the connected component of real
    symmetric matrices whose border eigen-components are all positive, and
    for n = 2 gives psi_1^(1) = Arg(A[0, 1]).
    """
    a = require_hermitian(a)
    n = a.shape[0]
    gap = pattern_gap(gz_actions(a))
    if not gap >= gap_tol:
        raise DomainError(f"matrix is outside the strict region: cone gap {gap:.3e} < {gap_tol:.0e}")
    levels = []
    for k in range(1, n):
        row = a[n - k - 1, n - k :]
        _, vectors = _eig_first_anchor(bottom_right_block(a, k))
        v = vectors.T @ row
        if np.any(np.abs(v) < BORDER_TOL):
            raise DegenerateBorderError(
                f"border eigen-component below {BORDER_TOL:.0e} at level {k}"
            )
        levels.append(np.mod(np.angle(v), TWO_PI))
    return AnglePattern(levels=tuple(levels))


def _border_moduli_sq(lam: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """|v_i|^2 = -prod_j (lam_i - mu_j) / prod_{j != i} (lam_i - lam_j).

    lam are the level-k values, mu the level-(k+1) values; strict interlacing
    makes every modulus strictly positive.
    """
    k = lam.size
    out = np.empty(k, dtype=lam.dtype)
    for i in range(k):
        num = -np.prod(lam[i] - mu)
        den = np.prod(lam[i] - np.delete(lam, i)) if k > 1 else lam.dtype.type(1.0)
        out[i] = num / den
    return out


def gz_inverse(p: GZPattern, angles: AnglePattern) -> np.ndarray:
    """Hermitian matrix with the prescribed actions and angles.

    Built level by level: the new diagonal entry matches the trace, the
    border eigen-component moduli come from the interlacing product formula,
    and their phases are the prescribed angles.  Exact inverse of
    (gz_actions, gz_angles) on the strict region.
    """
    n = p.n
    if angles.n != n:
        raise DomainError(f"pattern has n={n} but angles have n={angles.n}")
    gap = interlacing_gap(p)
    if not gap > 0.0:
        raise DomainError(f"pattern is not strictly interlacing: min slack {gap:.3e}")
    extended = any(lev.dtype == np.longdouble for lev in p.levels)
    cdtype = np.clongdouble if extended else np.complex128
    a = np.array([[p.value(1, 1)]], dtype=cdtype)
    if extended:
        a[0, 0] = p.levels[0][0]
    for k in range(1, n):
        lam = p.levels[k - 1]
        mu = p.levels[k]
        mod2 = _border_moduli_sq(lam, mu)
        if np.any(mod2 <= 0.0):
            raise DomainError("border modulus formula hit a nonpositive value")
        v = np.sqrt(mod2).astype(cdtype) * np.exp(1j * angles.levels[k - 1].astype(cdtype))
        _, vectors = _eig_first_anchor(a)
        col = vectors @ np.conj(v)
        diag = np.sum(mu) - np.sum(lam)
        nxt = np.empty((k + 1, k + 1), dtype=cdtype)
        nxt[0, 0] = diag
        nxt[0, 1:] = np.conj(col)
        nxt[1:, 0] = col
        nxt[1:, 1:] = a
        a = nxt
    return hermitian_part(a)


def symmetric_section_point(p: GZPattern) -> np.ndarray:
    """The psi = 0 point over the given actions: a real symmetric matrix in
    the component where every border eigen-component is positive."""
    return gz_inverse(p, AnglePattern.zero(p.n))
