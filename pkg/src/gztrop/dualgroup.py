"""Upper triangular matrices with positive diagonal and their coordinates.

Contains the quadratic identification b -> b b* with positive definite
matrices, corner minors and the t-dependent polar chart built from them,
the spectral ladder map (1/t) log of partial eigenvalue products of b b*,
sign chambers of the real locus, and the Cauchy-Binet consistency residual

    sum_{|I|=j, I in {1..k}} exp(t L_I(ell^(k)))
        = sum_{|I|=|J|=j} |minor_{I,J}(b^(k))|^2 .
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ChartDomainError, DomainError
from .gz import LadderVector, gz_actions
from .linalg import complex_dtype_of, eig_hermitian, hermitian_part, minor, upper_cholesky

MINOR_FLOOR = 1e-300

TWO_PI = 2.0 * np.pi


def require_an(b: np.ndarray) -> np.ndarray:
    """Validate an upper triangular matrix with positive real diagonal."""
    b = np.asarray(b, dtype=complex_dtype_of(b))
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {b.shape}")
    if not np.all(np.isfinite(b.real)) or not np.all(np.isfinite(b.imag)):
        raise DomainError("matrix has non-finite entries")
    if np.any(np.tril(b, -1) != 0):
        raise DomainError("entries below the diagonal must be exactly zero")
    d = np.diag(b)
    if np.any(d.imag != 0) or np.any(d.real <= 0):
        raise DomainError("diagonal entries must be real and positive")
    return b


def h_map(b: np.ndarray) -> np.ndarray:
    """b b*, a positive definite Hermitian matrix."""
    b = require_an(b)
    return hermitian_part(b @ b.conj().T)


def h_inverse(m: np.ndarray) -> np.ndarray:
    """Unique upper triangular positive-diagonal factor of a positive
    definite matrix; inverse of h_map."""
    return upper_cholesky(m, check=True)


def corner_rows_cols(i: int, k: int, n: int) -> tuple[list[int], list[int]]:
    """Row and column sets of the corner minor: rows n-k+1..n-k+i against the
    last i columns (1-based)."""
    if not (1 <= i <= k <= n):
        raise DomainError(f"need 1 <= i <= k <= n, got i={i}, k={k}, n={n}")
    return list(range(n - k + 1, n - k + i + 1)), list(range(n - i + 1, n + 1))


def corner_minor(b: np.ndarray, i: int, k: int) -> complex:
    b = np.asarray(b, dtype=complex)
    rows, cols = corner_rows_cols(i, k, b.shape[0])
    return minor(b, rows, cols)


@dataclass(frozen=True)
class ClusterPoint:
    """Polar chart values: corner minor (i, k) equals exp(t zeta + i phi).

    zeta covers 1 <= i <= k <= n; phi covers i < k (principal corner minors
    are positive, so their phase is identically zero).
    """

    zeta: tuple[np.ndarray, ...]
    phi: tuple[np.ndarray, ...]
    t: float

    @property
    def n(self) -> int:
        return len(self.zeta)

    def zeta_value(self, i: int, k: int) -> float:
        return float(self.zeta[k - 1][i - 1])

    def phi_value(self, i: int, k: int) -> float:
        return float(self.phi[k - 2][i - 1])

    def zeta_ladder(self) -> LadderVector:
        return LadderVector(levels=tuple(z.copy() for z in self.zeta))


def cluster_chart(b: np.ndarray, t: float) -> ClusterPoint:
    """zeta = log|corner minor|/t and phi = Arg(corner minor) mod 2pi."""
    b = require_an(b)
    if not t > 0:
        raise DomainError(f"chart scale t must be positive, got {t}")
    n = b.shape[0]
    zeta, phi = [], []
    for k in range(1, n + 1):
        zk = np.empty(k)
        pk = np.empty(max(k - 1, 0))
        for i in range(1, k + 1):
            d = corner_minor(b, i, k)
            if abs(d) < MINOR_FLOOR:
                raise ChartDomainError(i, k)
            zk[i - 1] = np.log(abs(d)) / t
            if i < k:
                pk[i - 1] = np.mod(np.angle(d), TWO_PI)
        zeta.append(zk)
        phi.append(pk)
    return ClusterPoint(zeta=tuple(zeta), phi=tuple(phi[1:]), t=float(t))


def minors_from_chart(point: ClusterPoint) -> list[list[complex]]:
    """Reconstruct the corner minors exp(t zeta + i phi) from a chart point."""
    out = []
    for k in range(1, point.n + 1):
        row = []
        for i in range(1, k + 1):
            ang = point.phi_value(i, k) if i < k else 0.0
            row.append(np.exp(point.t * point.zeta_value(i, k) + 1j * ang))
        out.append(row)
    return out


def _compound(block: np.ndarray, size: int) -> np.ndarray:
    """Matrix of all size x size minors of `block` (rows x cols combos)."""
    k = block.shape[0]
    combos = list(combinations(range(1, k + 1), size))
    c = np.empty((len(combos), len(combos)), dtype=complex_dtype_of(block))
    for a, rows in enumerate(combos):
        for bb, cols in enumerate(combos):
            c[a, bb] = minor(block, rows, cols)
    return c


def _top_product_log(block: np.ndarray, size: int) -> float:
    """log of the product of the `size` largest eigenvalues of block block*.

    Equal to log lambda_max of the size-th compound of block block*, computed
    from the scaled compound of block so that the answer stays accurate when
    the eigenvalues span hundreds of orders of magnitude.
    """
    c = _compound(block, size)
    scale = np.max(np.abs(c))
    if scale == 0.0 or not np.isfinite(float(scale)):
        raise DomainError("compound matrix is singular or non-finite")
    chat = c / scale
    gram = hermitian_part(chat @ chat.conj().T)
    lam = eig_hermitian(gram).values[0]
    return float(2.0 * np.log(scale) + np.log(lam))


def flaschka_ratiu(b: np.ndarray, t: float) -> LadderVector:
    """Ladder of (1/t) * sum_{j<=i} log lambda_j of the bottom-right k-block
    of b b*.

    The partial spectral products are evaluated as the top eigenvalue of the
    i-th compound Gram matrix, which stays relatively accurate at the t ~ 20
    dynamic ranges produced by the scaling maps (the direct route through
    individual small eigenvalues loses them to absolute roundoff).
    """
    b = require_an(b)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    n = b.shape[0]
    levels = []
    for k in range(1, n + 1):
        block = b[n - k :, n - k :]
        levels.append(np.array([_top_product_log(block, i) / t for i in range(1, k + 1)]))
    return LadderVector(levels=tuple(levels))


def flaschka_ratiu_direct(b: np.ndarray, t: float) -> LadderVector:
    """Same map through explicit eigenvalues of b b*; cross-check at small t."""
    pattern = gz_actions(h_map(b))
    logs = pattern.mapped(np.log)
    return LadderVector(levels=tuple(np.cumsum(lev) / t for lev in logs.levels))


def chamber_of(b: np.ndarray) -> tuple[int, ...]:
    """Signs of the non-principal corner minors of a real matrix, ordered by
    (k ascending, i ascending), i < k."""
    b = require_an(b)
    if np.max(np.abs(b.imag)) > 1e-10 * (1.0 + np.max(np.abs(b))):
        raise DomainError("chamber signs are defined for real matrices only")
    n = b.shape[0]
    signs = []
    for k in range(2, n + 1):
        for i in range(1, k):
            d = corner_minor(b, i, k).real
            if abs(d) < MINOR_FLOOR:
                raise ChartDomainError(i, k, f"corner minor ({i},{k}) vanishes; no chamber")
            signs.append(1 if d > 0 else -1)
    return tuple(signs)


def is_totally_positive(b: np.ndarray) -> bool:
    """All non-principal corner minors positive (principal ones always are)."""
    return all(s == 1 for s in chamber_of(b))


def _subsets(universe: list[int], size: int):
    return combinations(universe, size)


def master_equation_residual(b: np.ndarray, t: float, l: LadderVector) -> float:
    """Worst relative mismatch of the Cauchy-Binet identities over (j, k).

    Left side: sum over |I| = j, I in {1..k} of exp(t * sum_{i in I} lambda_i)
    with lambda read off the ladder.  Right side: sum of squared moduli of all
    j x j minors of the bottom-right k-block of b.  Both sides are accumulated
    after factoring out the dominant exponent, so t up to ~30 is safe.
    """
    b = require_an(b)
    n = b.shape[0]
    if n > 6:
        raise DomainError("subset enumeration supports n <= 6")
    if l.n != n:
        raise DomainError(f"ladder has n={l.n}, matrix has n={n}")
    worst = 0.0
    for k in range(1, n + 1):
        lam = np.diff(l.levels[k - 1], prepend=0.0)
        block = b[n - k :, n - k :]
        for j in range(1, k + 1):
            lhs_exps = [t * float(np.sum(lam[list(idx)])) for idx in _subsets(list(range(k)), j)]
            rhs_logs = []
            for rows in _subsets(list(range(1, k + 1)), j):
                for cols in _subsets(list(range(1, k + 1)), j):
                    d = abs(minor(block, rows, cols))
                    if d > 0.0:
                        rhs_logs.append(2.0 * np.log(d))
            top = max(max(lhs_exps), max(rhs_logs, default=-np.inf))
            lhs = float(np.sum(np.exp(np.asarray(lhs_exps) - top)))
            rhs = float(np.sum(np.exp(np.asarray(rhs_logs) - top)))
            worst = max(worst, abs(lhs - rhs) / max(lhs, rhs))
    return worst


def corner_laurent_trace_residual(b: np.ndarray) -> float:
    """n = 3 regression: the trace of b b* re-expressed through corner minors.

    tr(b b*) = |D_1^(3)|^2 + |D_1^(2)|^2 + |D_1^(1)|^2
               + |D_2^(2)|^2/|D_1^(1)|^2 + |D_3^(3)|^2/|D_2^(2)|^2
               + |(D_1^(1) D_2^(3) + D_1^(3) D_2^(2)) / (D_1^(2) D_1^(1))|^2

    Returns the relative mismatch; the identity is the j = 1, k = 3 instance
    of the Laurent rewriting of the Cauchy-Binet sums.
    """
    b = require_an(b)
    if b.shape[0] != 3:
        raise DomainError("this regression is the hardcoded n = 3 instance")
    d = {(i, k): corner_minor(b, i, k) for k in (1, 2, 3) for i in range(1, k + 1)}
    lhs = float(np.trace(h_map(b)).real)
    cross = (d[(1, 1)] * d[(2, 3)] + d[(1, 3)] * d[(2, 2)]) / (d[(1, 2)] * d[(1, 1)])
    rhs = (
        abs(d[(1, 3)]) ** 2
        + abs(d[(1, 2)]) ** 2
        + abs(d[(1, 1)]) ** 2
        + abs(d[(2, 2)]) ** 2 / abs(d[(1, 1)]) ** 2
        + abs(d[(3, 3)]) ** 2 / abs(d[(2, 2)]) ** 2
        + abs(cross) ** 2
    )
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))
