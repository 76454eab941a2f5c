"""Dense complex linear algebra at small n.

Hermitian eigendecomposition by cyclic complex Jacobi rotations, an upper
triangular Cholesky-type factorization of positive definite matrices, and
minor extraction.  Everything targets n <= 5 or so; no attempt is made at
large-n performance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def _jacobi_tol(dtype) -> float:
    """1e-13 in the standard lane; scaled down with machine epsilon for the
    extended lane so it does not waste the extra precision."""
    if dtype == np.clongdouble:
        return JACOBI_TOL * float(np.finfo(np.clongdouble).eps / np.finfo(np.complex128).eps)
    return JACOBI_TOL


def complex_dtype_of(a: np.ndarray):
    """complex128 normally, clongdouble when the input already carries
    extended precision (the high-dynamic-range verification lane)."""
    dt = np.asarray(a).dtype
    if dt in (np.clongdouble, np.longdouble):
        return np.clongdouble
    return np.complex128


def _frobenius(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """(a + a*)/2; the result satisfies m[i,j] == conj(m[j,i]) bit for bit."""
    a = np.asarray(a, dtype=complex_dtype_of(a))
    return (a + a.conj().T) / 2.0


def is_hermitian(a: np.ndarray, tol: float = 0.0) -> bool:
    a = np.asarray(a)
    return bool(np.all(np.abs(a - a.conj().T) <= tol))


def require_hermitian(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate Hermitianness to `tol`, return the exactly Hermitian average."""
    a = np.asarray(a, dtype=complex_dtype_of(a))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise DomainError("matrix has non-finite entries")
    scale = 1.0 + float(np.max(np.abs(a))) if a.size else 1.0
    if not np.all(np.abs(a - a.conj().T) <= tol * scale):
        raise DomainError("matrix is not Hermitian to the requested tolerance")
    return hermitian_part(a)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order and a matching unitary of column vectors.

    Column phases are anchored: in each column the entry of largest modulus
    (lowest index on ties) is real and >= 0.
    """

    values: np.ndarray
    vectors: np.ndarray


def anchor_phases(vectors: np.ndarray, row: int | None = None) -> np.ndarray:
    """Rescale each column by a unit phase making the anchor entry real >= 0.

    row=None anchors on the entry of largest modulus (lowest index on ties);
    an explicit row anchors on that component of every column.
    """
    v = np.array(vectors, dtype=complex_dtype_of(vectors))
    for j in range(v.shape[1]):
        col = v[:, j]
        k = int(np.argmax(np.abs(col))) if row is None else row
        z = col[k]
        m = abs(z)
        if m > 0.0:
            v[:, j] = col * (np.conj(z) / m)
    return v


def eig_hermitian(a: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Deterministic for identical input bits: the pivot order is fixed, the
    rotation at (p, q) first removes the phase of a[p, q] and then applies
    the standard symmetric Jacobi rotation with |t| <= 1.  Stops when the
    off-diagonal Frobenius norm falls below JACOBI_TOL * (1 + ||a||_F).
    """
    a = require_hermitian(a, tol=1e-10)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    if n == 1:
        return EigenDecomposition(values=a.real.diagonal().copy(), vectors=v)

    norm0 = _frobenius(a)
    thresh = _jacobi_tol(a.dtype) * (1.0 + norm0)

    def offdiag(m: np.ndarray) -> float:
        o = m - np.diag(np.diag(m))
        return _frobenius(o)

    converged = False
    for _ in range(JACOBI_MAX_SWEEPS):
        if offdiag(a) <= thresh:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                m = abs(apq)
                if m <= thresh / max(n, 1):
                    continue
                ph = apq / m
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * m)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: A <- A U with U = W(phase) G(c, s) on the (p, q) plane
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * np.conj(ph) * colq
                a[:, q] = s * colp + c * np.conj(ph) * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(ph) * vq
                v[:, q] = s * vp + c * np.conj(ph) * vq
    else:
        converged = offdiag(a) <= thresh
    if not converged:
        raise ConvergenceError(
            f"Jacobi failed after {JACOBI_MAX_SWEEPS} sweeps; "
            f"off-diagonal residual {offdiag(a):.3e} exceeds {thresh:.3e}"
        )

    values = a.real.diagonal().copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = anchor_phases(v[:, order])
    return EigenDecomposition(values=values, vectors=vectors)


def _cholesky_lower(m: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor by the standard left-looking loop; any complex
    dtype (LAPACK has no extended-precision path)."""
    n = m.shape[0]
    low = np.zeros_like(m)
    for i in range(n):
        for j in range(i + 1):
            acc = m[i, j] - np.sum(low[i, :j] * np.conj(low[j, :j]))
            if i == j:
                piv = acc.real
                if not piv > 0.0:
                    raise DomainError(f"nonpositive Cholesky pivot {piv:.6g} at index {i + 1}")
                low[i, j] = np.sqrt(piv)
            else:
                low[i, j] = acc / low[j, j]
    return low


def upper_cholesky(m: np.ndarray, check: bool = True) -> np.ndarray:
    """Unique upper triangular b with positive real diagonal and b b* = m.

    Computed as J L J where L is the standard lower Cholesky factor of J m J
    and J is the index-reversal permutation.  With check=True positive
    definiteness is verified first through eig_hermitian and a failure names
    the offending eigenvalue.  Callers that construct m positive definite by
    design may pass check=False; at extreme dynamic ranges (entries spanning
    ~e^{40} and more) the eigenvalue pre-check itself suffers absolute
    roundoff of order eps*||m|| and would reject valid input.  A nonpositive
    pivot still raises either way.
    """
    m = require_hermitian(m, tol=1e-10)
    n = m.shape[0]
    if check:
        vals = eig_hermitian(m).values
        if vals[-1] <= 0.0:
            raise DomainError(f"matrix is not positive definite: eigenvalue {vals[-1]:.6g} <= 0")
    rev = np.ascontiguousarray(m[::-1, ::-1])
    if m.dtype == np.clongdouble:
        low = _cholesky_lower(rev)
    else:
        try:
            low = np.linalg.cholesky(rev)
        except np.linalg.LinAlgError as exc:
            raise DomainError(f"Cholesky factorization failed: {exc}") from exc
    b = np.ascontiguousarray(low[::-1, ::-1])
    idx = np.diag_indices(n)
    b[idx] = b[idx].real
    return b


def _validate_index_sets(n: int, rows, cols) -> tuple[list[int], list[int]]:
    r = sorted(int(i) for i in rows)
    c = sorted(int(j) for j in cols)
    if len(r) != len(c) or len(r) < 1:
        raise DomainError(f"index sets must be nonempty and of equal size, got {rows} and {cols}")
    if len(set(r)) != len(r) or len(set(c)) != len(c):
        raise DomainError("index sets must not contain repeats")
    if r[0] < 1 or r[-1] > n or c[0] < 1 or c[-1] > n:
        raise DomainError(f"indices must lie in 1..{n}")
    return r, c


def _lu_det(sub: np.ndarray):
    """Determinant by in-place LU with partial pivoting (any complex dtype)."""
    m = sub.copy()
    k = m.shape[0]
    det = m.dtype.type(1.0)
    for col in range(k):
        piv = col + int(np.argmax(np.abs(m[col:, col])))
        if m[piv, col] == 0:
            return m.dtype.type(0.0)
        if piv != col:
            m[[col, piv], :] = m[[piv, col], :]
            det = -det
        det = det * m[col, col]
        m[col + 1 :, col:] -= np.outer(m[col + 1 :, col] / m[col, col], m[col, col:])
    return det


def minor(a: np.ndarray, rows, cols):
    """Determinant of the submatrix with 1-based row set `rows`, column set `cols`.

    Closed forms are used up to 3x3; larger sizes go through LU with partial
    pivoting.
    """
    a = np.asarray(a, dtype=complex_dtype_of(a))
    n = a.shape[0]
    r, c = _validate_index_sets(n, rows, cols)
    sub = a[np.ix_([i - 1 for i in r], [j - 1 for j in c])]
    k = len(r)
    if k == 1:
        out = sub[0, 0]
    elif k == 2:
        out = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    elif k == 3:
        out = (
            sub[0, 0] * (sub[1, 1] * sub[2, 2] - sub[1, 2] * sub[2, 1])
            - sub[0, 1] * (sub[1, 0] * sub[2, 2] - sub[1, 2] * sub[2, 0])
            + sub[0, 2] * (sub[1, 0] * sub[2, 1] - sub[1, 1] * sub[2, 0])
        )
    else:
        out = _lu_det(sub)
    return out if a.dtype == np.clongdouble else complex(out)
