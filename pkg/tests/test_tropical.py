"""Words, factorizations, Lindstrom minors, tropicalization, and inversion."""

import numpy as np
import pytest

from gztrop.dualgroup import corner_minor
from gztrop.errors import ConvergenceError, DomainError, UnsupportedSizeError
from gztrop.gz import LadderVector, cone_gap, to_ladder
from gztrop.linalg import minor
from gztrop.tropical import (
    PlanarNetwork,
    Word,
    gz_map_for,
    in_w_delta,
    invert_tropical,
    is_reduced,
    matrix_factorization,
    minor_polynomial,
    standard_word,
    tropical_gz_map,
    tropicalize,
)

RNG = np.random.default_rng(3344)


class TestWords:
    def test_standard_words(self):
        assert standard_word(2).letters == (1,)
        assert standard_word(3).letters == (1, 2, 1)
        assert standard_word(4).letters == (1, 2, 3, 1, 2, 1)
        for n in range(2, 6):
            w = standard_word(n)
            assert len(w.letters) == n * (n - 1) // 2
            assert is_reduced(w)

    def test_non_reduced(self):
        assert not is_reduced(Word(letters=(1, 1), n=3))
        assert is_reduced(Word(letters=(2, 1), n=3))

    def test_letter_bounds(self):
        with pytest.raises(DomainError):
            Word(letters=(3,), n=3)


class TestFactorization:
    def test_n3_entries(self):
        x = np.array([1.1, 0.8, 1.7])
        z = np.array([0.3, 1.2, 0.9])
        b = matrix_factorization(standard_word(3), x, z)
        assert b[0, 0] == pytest.approx(x[0])
        assert b[0, 1] == pytest.approx(x[0] * (z[0] + z[2]))
        assert b[0, 2] == pytest.approx(x[0] * z[0] * z[1])
        assert b[1, 2] == pytest.approx(x[1] * z[1])
        assert np.all(np.tril(b, -1) == 0)

    def test_zero_z_is_diagonal(self):
        x = np.array([2.0, 3.0, 4.0])
        b = matrix_factorization(standard_word(3), x, np.zeros(3))
        assert np.allclose(b, np.diag(x))

    def test_n2_product(self):
        b = matrix_factorization(standard_word(2), [1.5, 2.5], [0.7])
        assert np.allclose(b, [[1.5, 1.5 * 0.7], [0, 2.5]])

    def test_rejects_nonpositive_x(self):
        with pytest.raises(DomainError):
            matrix_factorization(standard_word(2), [1.0, -1.0], [0.5])


class TestMinorPolynomial:
    def test_corner_single_monomial(self):
        net = PlanarNetwork.from_word(standard_word(3))
        # rows {1,2} x cols {2,3}: the single multipath x1 x2 z2 z3
        p = minor_polynomial(net, [1, 2], [2, 3])
        assert p.is_monomial
        coeff, exps = p.monomials[0]
        assert coeff == 1.0
        assert exps == (1, 1, 0, 0, 1, 1)

    def test_two_path_minor(self):
        net = PlanarNetwork.from_word(standard_word(3))
        # rows {1} x cols {2}: x1 z1 + x1 z3
        p = minor_polynomial(net, [1], [2])
        assert p.num_monomials == 2
        exp_sets = {exps for _, exps in p.monomials}
        assert exp_sets == {(1, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 1)}

    def test_all_corners_are_monomials(self):
        for n in (2, 3, 4, 5):
            net = PlanarNetwork.from_word(standard_word(n))
            for k in range(1, n + 1):
                for i in range(1, k + 1):
                    rows = list(range(n - k + 1, n - k + i + 1))
                    cols = list(range(n - i + 1, n + 1))
                    assert minor_polynomial(net, rows, cols).is_monomial

    def test_zero_polynomial_when_no_multipath(self):
        net = PlanarNetwork.from_word(standard_word(3))
        p = minor_polynomial(net, [3], [1])
        assert p.is_zero

    def test_lindstrom_consistency_random(self):
        # polynomial evaluation agrees with the numeric minor of the
        # factorization at random positive substitutions
        for n in (2, 3, 4):
            word = standard_word(n)
            net = PlanarNetwork.from_word(word)
            m = len(word.letters)
            for _ in range(25):
                x = RNG.uniform(0.3, 1.8, size=n)
                z = RNG.uniform(0.2, 1.5, size=m)
                b = matrix_factorization(word, x, z)
                size = int(RNG.integers(1, n + 1))
                rows = sorted(RNG.choice(n, size=size, replace=False) + 1)
                cols = sorted(RNG.choice(n, size=size, replace=False) + 1)
                want = minor(b, rows, cols)
                got = minor_polynomial(net, rows, cols).evaluate(x, z)
                assert abs(got - want) <= 1e-10 * (1 + abs(want))

    def test_positivity(self):
        net = PlanarNetwork.from_word(standard_word(4))
        for _ in range(30):
            size = int(RNG.integers(1, 4))
            rows = sorted(RNG.choice(4, size=size, replace=False) + 1)
            cols = sorted(RNG.choice(4, size=size, replace=False) + 1)
            p = minor_polynomial(net, rows, cols)
            assert all(c > 0 for c, _ in p.monomials)

    def test_corner_minor_matches_dualgroup(self):
        word = standard_word(4)
        net = PlanarNetwork.from_word(word)
        x = RNG.uniform(0.4, 1.6, size=4)
        z = RNG.uniform(0.2, 1.4, size=6) * np.exp(1j * RNG.uniform(0, 6.28, size=6))
        b = matrix_factorization(word, x, z)
        for k in range(1, 5):
            for i in range(1, k + 1):
                rows = list(range(4 - k + 1, 4 - k + i + 1))
                cols = list(range(4 - i + 1, 4 + 1))
                want = corner_minor(b, i, k)
                got = minor_polynomial(net, rows, cols).evaluate(x, z)
                assert abs(got - want) <= 1e-10 * (1 + abs(want))


class TestTropicalize:
    def test_literal_polynomial(self):
        # x1^2 x2 + 5 x1 -> max(2w1 + w2, w1); coefficients only set the
        # stored offsets, never the evaluation
        from gztrop.tropical import PositiveLaurentPoly

        p = PositiveLaurentPoly(nx=2, nz=0, monomials=((1.0, (2, 1)), (5.0, (1, 0))))
        tp = tropicalize(p)
        assert tp.evaluate(np.array([1.0, 0.0])) == pytest.approx(2.0)
        assert tp.evaluate(np.array([-1.0, 0.0])) == pytest.approx(-1.0)

    def test_max_of_forms(self):
        net = PlanarNetwork.from_word(standard_word(3))
        p = minor_polynomial(net, [1], [2])
        tp = tropicalize(p)
        w = np.array([1.0, 0.0, 0.0, 0.5, 0.2, -0.3])
        # max(w_x1 + w_z1, w_x1 + w_z3) = max(1.5, 0.7)
        assert tp.evaluate(w) == pytest.approx(1.5)

    def test_single_monomial_is_linear(self):
        net = PlanarNetwork.from_word(standard_word(3))
        tp = tropicalize(minor_polynomial(net, [1, 2], [2, 3]))
        assert tp.gradients.shape[0] == 1

    def test_zero_poly_rejected(self):
        net = PlanarNetwork.from_word(standard_word(3))
        with pytest.raises(DomainError):
            tropicalize(minor_polynomial(net, [3], [1]))


class TestTropicalMap:
    def test_n2_by_hand(self):
        gz = gz_map_for(2)
        w = np.array([0.7, -0.2, 0.4])  # (w_x1, w_x2, w_z)
        lad = gz.ladder(w)
        assert lad.value(1, 1) == pytest.approx(2 * w[1])
        assert lad.value(2, 2) == pytest.approx(2 * (w[0] + w[1]))
        assert lad.value(1, 2) == pytest.approx(2 * max(w[0], w[0] + w[2], w[1]))

    def test_zero_maps_to_zero(self):
        for n in (2, 3, 4):
            lad = tropical_gz_map(np.zeros(n + n * (n - 1) // 2), n)
            assert np.max(np.abs(lad.flat())) == 0.0

    def test_rhombus_feasible_random(self):
        for n in (2, 3, 4):
            gz = gz_map_for(n)
            ws = RNG.uniform(-2, 2, size=(500, gz.nvars))
            flat = gz.ladder_many(ws)
            for row in flat:
                lad = LadderVector.from_flat(row, n)
                assert cone_gap(lad) >= -1e-12

    def test_n5_map_and_inverse(self):
        # the full machinery stays exact at the top of the supported range
        from helpers import strict_pattern

        gz = gz_map_for(5)
        assert gz.nvars == 15
        ws = RNG.uniform(-1.5, 1.5, size=(50, 15))
        for row in gz.ladder_many(ws):
            assert cone_gap(LadderVector.from_flat(row, 5)) >= -1e-12
        for _ in range(10):
            lad = to_ladder(strict_pattern(RNG, 5, min_gap=0.05))
            w = invert_tropical(lad)
            back = gz_map_for(5).ladder(w).flat()
            assert np.max(np.abs(back - lad.flat())) <= 1e-12 * (
                1 + np.max(np.abs(lad.flat()))
            )


class TestWDelta:
    def test_hand_example(self):
        # w = (0.9, 0, 0.4) at delta = 0.3: nonempty disjoint pair sums and
        # the z-singleton all clear 0.3, and the rhombus slacks are 2.6, 0.8
        assert in_w_delta(np.array([0.9, 0.0, 0.4]), 0.3, n=2)

    def test_zero_fails(self):
        assert not in_w_delta(np.zeros(3), 0.1, n=2)

    def test_scaling(self):
        w = np.array([0.9, 0.0, 0.4])
        for c in (1.5, 3.0):
            assert in_w_delta(c * w, c * 0.3 * 0.999, n=2)

    def test_unsupported_size(self):
        with pytest.raises(UnsupportedSizeError):
            in_w_delta(np.zeros(5 + 10), 0.1, n=5)


class TestInvertTropical:
    def test_hand_n2(self):
        lad = LadderVector.from_levels([[0.0], [1.0, 0.0]])
        w = invert_tropical(lad)
        assert np.allclose(w, [0.0, 0.0, 0.5], atol=1e-14)

    def test_linearity_in_scale(self):
        lad = LadderVector.from_levels([[0.1], [1.0, 0.2]])
        w1 = invert_tropical(lad)
        lad3 = LadderVector.from_levels([[0.3], [3.0, 0.6]])
        w3 = invert_tropical(lad3)
        assert np.allclose(w3, 3 * w1, atol=1e-12)

    def test_roundtrip_random(self):
        from helpers import strict_pattern

        for n in (2, 3, 4):
            gz = gz_map_for(n)
            for _ in range(60):
                p = strict_pattern(RNG, n, min_gap=0.1)
                lad = to_ladder(p)
                w = invert_tropical(lad)
                back = gz.ladder(w).flat()
                assert np.max(np.abs(back - lad.flat())) <= 1e-12 * (
                    1 + np.max(np.abs(lad.flat()))
                )

    def test_boundary_rejected(self):
        lad = LadderVector.from_levels([[1.0], [1.0, 2.0]])  # slack 0 at one rhombus
        with pytest.raises((DomainError, ConvergenceError)):
            invert_tropical(lad)
