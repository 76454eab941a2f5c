"""Words, planar networks, positive minor polynomials, and tropical limits.

A word in the alphabet {1..n-1} drives the factorization diag(x) *
prod_j (I + z_j E_{a_j, a_j+1}) onto upper triangular matrices.  Minors of
the factorization are sums over vertex-disjoint multipath families of the
associated wiring diagram (Lindstrom), hence polynomials in (x, z) with
positive coefficients; corner minors are single monomials.  Tropicalizing
the squared-modulus sums

    p_i^(k) = sum_{|I|=|J|=i, I,J in {n-k+1..n}} |minor_{I,J}|^2

gives the piecewise linear functions m_i^(k)(w) = 2 max over monomial
exponent rows of <row, w>; on the full-rank linearity chamber the max is
attained by the corner monomial, which makes the map invertible by one
integer linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedSizeError
from .gz import LadderVector, cone_gap


@dataclass(frozen=True)
class Word:
    """Letters in {1..n-1}; letter a encodes the crossing of lines a, a+1."""

    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        for a in self.letters:
            if not 1 <= a <= self.n - 1:
                raise DomainError(f"letter {a} outside 1..{self.n - 1}")

    def __len__(self) -> int:
        return len(self.letters)


def standard_word(n: int) -> Word:
    """(1..n-1, 1..n-2, ..., 1, 2, 1): the standard reduced word for the
    longest permutation, of length n(n-1)/2."""
    if n < 1:
        raise DomainError("n must be at least 1")
    letters: list[int] = []
    for top in range(n - 1, 0, -1):
        letters.extend(range(1, top + 1))
    return Word(letters=tuple(letters), n=n)


def word_permutation(word: Word) -> list[int]:
    """The permutation s_{a_1} ... s_{a_m} evaluated as a sorting network."""
    perm = list(range(1, word.n + 1))
    for a in word.letters:
        perm[a - 1], perm[a] = perm[a], perm[a - 1]
    return perm


def is_reduced(word: Word) -> bool:
    """True when the word length equals the inversion count of its permutation."""
    perm = word_permutation(word)
    inv = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return inv == len(word.letters)


@dataclass(frozen=True)
class PlanarNetwork:
    """Wiring diagram of a word: n horizontal lines, one crossing per letter.

    Crossing j (0-based, left to right) joins line letters[j] to line
    letters[j] + 1 and carries variable z_{j+1}; the horizontal source edge
    of line i carries x_i.
    """

    word: Word

    @property
    def n(self) -> int:
        return self.word.n

    @property
    def num_crossings(self) -> int:
        return len(self.word.letters)

    @classmethod
    def from_word(cls, word: Word) -> "PlanarNetwork":
        return cls(word=word)


def matrix_factorization(word: Word, x, z) -> np.ndarray:
    """diag(x) * prod_j (I + z_j E_{a_j, a_j+1}); upper triangular, diagonal x."""
    if not is_reduced(word):
        raise DomainError("word is not reduced")
    x = np.asarray(x, dtype=float).reshape(-1)
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = word.n
    if x.size != n:
        raise DomainError(f"need {n} diagonal parameters, got {x.size}")
    if np.any(x <= 0):
        raise DomainError("diagonal parameters must be positive")
    if z.size != len(word.letters):
        raise DomainError(f"need {len(word.letters)} crossing parameters, got {z.size}")
    b = np.diag(x).astype(complex)
    for j, a in enumerate(word.letters):
        # right-multiply by I + z_j E_{a, a+1}: adds z_j * column a to column a+1
        b[:, a] = b[:, a] + z[j] * b[:, a - 1]
    return b


@dataclass(frozen=True)
class PositiveLaurentPoly:
    """Sum of positive-coefficient monomials in x_1..x_n, z_1..z_m.

    Exponent vectors are integers over the concatenated (x, z) variables and
    are pairwise distinct.
    """

    nx: int
    nz: int
    monomials: tuple[tuple[float, tuple[int, ...]], ...]

    @property
    def num_monomials(self) -> int:
        return len(self.monomials)

    @property
    def is_monomial(self) -> bool:
        return len(self.monomials) == 1

    @property
    def is_zero(self) -> bool:
        return len(self.monomials) == 0

    def evaluate(self, x, z) -> complex:
        x = np.asarray(x, dtype=complex).reshape(-1)
        z = np.asarray(z, dtype=complex).reshape(-1)
        vals = np.concatenate([x, z])
        total = 0.0 + 0.0j
        for coeff, exps in self.monomials:
            term = complex(coeff)
            for v, e in zip(vals, exps):
                if e:
                    term = term * v**e
            total += term
        return total

    def exponent_rows(self) -> np.ndarray:
        if not self.monomials:
            return np.zeros((0, self.nx + self.nz), dtype=int)
        return np.array([exps for _, exps in self.monomials], dtype=int)


def minor_polynomial(network: PlanarNetwork, rows, cols) -> PositiveLaurentPoly:
    """Lindstrom sum over vertex-disjoint multipath families from `rows` to
    `cols` (1-based source/sink sets of equal size).

    A family is simulated crossing by crossing: the occupied lines stay
    pairwise distinct, and at a crossing a -> a+1 the path on line a may
    descend only when line a+1 is free.  No family reaching the sinks means
    the zero polynomial.
    """
    word = network.word
    n = network.n
    src = tuple(sorted(int(r) for r in rows))
    snk = tuple(sorted(int(c) for c in cols))
    if len(src) != len(snk) or len(src) < 1:
        raise DomainError("row and column sets must be nonempty and of equal size")
    if len(set(src)) != len(src) or len(set(snk)) != len(snk):
        raise DomainError("index sets must not contain repeats")
    if src[0] < 1 or src[-1] > n or snk[0] < 1 or snk[-1] > n:
        raise DomainError(f"indices must lie in 1..{n}")

    m = network.num_crossings
    found: dict[tuple[int, ...], float] = {}

    def dfs(pos: int, state: tuple[int, ...], taken: tuple[int, ...]):
        if pos == m:
            if state == snk:
                exps = [0] * (n + m)
                for s in src:
                    exps[s - 1] = 1
                for j in taken:
                    exps[n + j] = 1
                key = tuple(exps)
                found[key] = found.get(key, 0.0) + 1.0
            return
        a = word.letters[pos]
        dfs(pos + 1, state, taken)
        if a in state and (a + 1) not in state:
            nxt = tuple(sorted(x if x != a else a + 1 for x in state))
            dfs(pos + 1, nxt, taken + (pos,))

    dfs(0, src, ())
    monos = tuple((found[e], e) for e in sorted(found.keys()))
    return PositiveLaurentPoly(nx=n, nz=m, monomials=monos)


@dataclass(frozen=True)
class TropicalPoly:
    """max over affine forms <gradient, w>; offsets (log coefficients) are
    stored for reference but excluded from the evaluation."""

    gradients: np.ndarray
    offsets: np.ndarray

    def evaluate(self, w) -> float:
        w = np.asarray(w, dtype=float).reshape(-1)
        return float(np.max(self.gradients @ w))


def tropicalize(p: PositiveLaurentPoly) -> TropicalPoly:
    if p.is_zero:
        raise DomainError("cannot tropicalize the zero polynomial")
    merged: dict[tuple[int, ...], float] = {}
    for coeff, exps in p.monomials:
        merged[exps] = merged.get(exps, 0.0) + coeff
    grads = np.array(sorted(merged.keys()), dtype=float)
    offs = np.array([np.log(merged[tuple(g.astype(int))]) for g in grads])
    return TropicalPoly(gradients=grads, offsets=offs)


class TropicalGZMap:
    """Piecewise linear ladder map w -> (m_i^(k)(w)) for a reduced word.

    m_i^(k)(w) = 2 max over all monomials of all i x i minors with rows and
    columns in the last k indices.  Exponent rows are enumerated once at
    construction; evaluation is a handful of small matrix products.
    """

    def __init__(self, n: int, word: Word | None = None):
        word = word or standard_word(n)
        if word.n != n:
            raise DomainError(f"word is for n={word.n}, expected {n}")
        if not is_reduced(word):
            raise DomainError("word is not reduced")
        self.n = n
        self.word = word
        self.network = PlanarNetwork.from_word(word)
        self.nvars = n + len(word.letters)
        self._rows: dict[tuple[int, int], np.ndarray] = {}
        self._corner: dict[tuple[int, int], np.ndarray] = {}
        for k in range(1, n + 1):
            universe = list(range(n - k + 1, n + 1))
            for i in range(1, k + 1):
                rows_list = []
                for ii in combinations(universe, i):
                    for jj in combinations(universe, i):
                        poly = minor_polynomial(self.network, ii, jj)
                        rows_list.extend(exps for _, exps in poly.monomials)
                if not rows_list:
                    raise DomainError(f"no multipath at all for level ({i},{k})")
                self._rows[(i, k)] = np.unique(np.array(rows_list, dtype=float), axis=0)
                crows, ccols = (
                    list(range(n - k + 1, n - k + i + 1)),
                    list(range(n - i + 1, n + 1)),
                )
                corner = minor_polynomial(self.network, crows, ccols)
                if not corner.is_monomial:
                    raise ConvergenceError(
                        f"corner minor ({i},{k}) is not a single monomial for this word"
                    )
                self._corner[(i, k)] = np.array(corner.monomials[0][1], dtype=float)

    def value(self, w, i: int, k: int) -> float:
        w = np.asarray(w, dtype=float).reshape(-1)
        return float(2.0 * np.max(self._rows[(i, k)] @ w))

    def ladder(self, w) -> LadderVector:
        w = np.asarray(w, dtype=float).reshape(-1)
        if w.size != self.nvars:
            raise DomainError(f"weight vector needs {self.nvars} entries, got {w.size}")
        levels = []
        for k in range(1, self.n + 1):
            levels.append(
                np.array([2.0 * np.max(self._rows[(i, k)] @ w) for i in range(1, k + 1)])
            )
        return LadderVector(levels=tuple(levels))

    def ladder_many(self, ws: np.ndarray) -> np.ndarray:
        """Rows of flattened ladders for a batch of weight vectors."""
        ws = np.asarray(ws, dtype=float)
        cols = []
        for k in range(1, self.n + 1):
            for i in range(1, k + 1):
                cols.append(2.0 * np.max(ws @ self._rows[(i, k)].T, axis=1))
        return np.stack(cols, axis=1)

    def corner_matrix(self) -> np.ndarray:
        """Rows 2 * (corner monomial exponents), ordered (k asc, i asc)."""
        rows = []
        for k in range(1, self.n + 1):
            for i in range(1, k + 1):
                rows.append(2.0 * self._corner[(i, k)])
        return np.array(rows)

    def corner_attained(self, w, slack: float = 1e-9) -> bool:
        """True when every m_i^(k)(w) max is attained by the corner monomial."""
        w = np.asarray(w, dtype=float).reshape(-1)
        for (i, k), rows in self._rows.items():
            top = float(np.max(rows @ w))
            corner = float(self._corner[(i, k)] @ w)
            if corner < top - slack * (1.0 + abs(top)):
                return False
        return True


@lru_cache(maxsize=8)
def _cached_map(n: int, letters: tuple[int, ...]) -> TropicalGZMap:
    return TropicalGZMap(n, Word(letters=letters, n=n))


def gz_map_for(n: int, word: Word | None = None) -> TropicalGZMap:
    word = word or standard_word(n)
    return _cached_map(n, word.letters)


def tropical_gz_map(w, n: int, word: Word | None = None) -> LadderVector:
    return gz_map_for(n, word).ladder(w)


@lru_cache(maxsize=8)
def _ternary_table(nvars: int, n: int):
    """All sign vectors c in {-1,0,1}^nvars encoding disjoint subset pairs.

    Keeps c with at least one +1 and one -1 (two nonempty disjoint subsets),
    plus one-sided vectors supported on the z variables alone (a z-monomial
    against the empty set; these arise between same-row minors).
    """
    grids = np.meshgrid(*([np.array([-1, 0, 1])] * nvars), indexing="ij")
    c = np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int8)
    pos = (c > 0).sum(axis=1)
    neg = (c < 0).sum(axis=1)
    x_support = (c[:, :n] != 0).any(axis=1)
    two_sided = (pos >= 1) & (neg >= 1)
    z_one_sided = (~x_support) & ((pos + neg) >= 1) & ((pos == 0) | (neg == 0))
    return np.asarray(c[two_sided | z_one_sided], dtype=float)


def in_w_delta(w, delta: float, n: int, word: Word | None = None) -> bool:
    """Uniform-gap region membership: strict delta-rhombus inequalities on the
    tropical ladder, and |w(alpha) - w(beta)| > delta for disjoint nonempty
    edge subsets alpha, beta (plus z-only one-sided sums |w(alpha)| > delta).

    Exhaustive over subset pairs; supported for n <= 4 (at most 10 weighted
    edges).  Larger n raises rather than silently sampling.
    """
    word = word or standard_word(n)
    gz = gz_map_for(n, word)
    if gz.nvars > 10 or n > 4:
        raise UnsupportedSizeError(f"exhaustive subset check supports n <= 4, got n={n}")
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != gz.nvars:
        raise DomainError(f"weight vector needs {gz.nvars} entries, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite")
    if cone_gap(gz.ladder(w)) <= delta:
        return False
    table = _ternary_table(gz.nvars, n)
    return bool(np.min(np.abs(table @ w)) > delta)


def invert_tropical(l: LadderVector, word: Word | None = None) -> np.ndarray:
    """Unique weight vector with 2 <corner exponents, w> = ell on the interior
    cone; the result lies in the closure of the full-rank chamber.

    Solves the integer corner system and verifies both the round trip and
    that every max is attained by the corner monomial.
    """
    n = l.n
    gz = gz_map_for(n, word)
    if not cone_gap(l) > 0.0:
        raise DomainError("ladder must lie strictly inside the rhombus cone")
    m = gz.corner_matrix()
    try:
        w = np.linalg.solve(m, l.flat())
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"corner system unexpectedly singular: {exc}") from exc
    back = gz.ladder(w).flat()
    scale = 1.0 + float(np.max(np.abs(l.flat())))
    if np.max(np.abs(back - l.flat())) > 1e-12 * scale:
        raise ConvergenceError("tropical inversion failed to round-trip")
    if not gz.corner_attained(w):
        raise ConvergenceError("corner monomial does not attain the max at the solution")
    return w
