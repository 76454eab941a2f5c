"""Seeded samplers: determinism, gap guarantees, and failure modes."""

import numpy as np
import pytest

from gztrop.errors import SamplingError
from gztrop.gz import cone_gap, pattern_gap
from gztrop.sampling import (
    lattice_gap_pattern,
    nested_gap_pattern,
    sample_h0,
    sample_ladder,
    sample_rng,
    sample_w_delta,
    slack_matrix,
)
from gztrop.tropical import in_w_delta


class TestStreams:
    def test_reproducible(self):
        a = sample_rng(123, 4).uniform(size=8)
        b = sample_rng(123, 4).uniform(size=8)
        assert np.array_equal(a, b)

    def test_independent_indices(self):
        a = sample_rng(123, 0).uniform(size=8)
        b = sample_rng(123, 1).uniform(size=8)
        assert not np.array_equal(a, b)


class TestSlackMatrix:
    def test_matches_cone_gap(self):
        from gztrop.gz import LadderVector

        rng = np.random.default_rng(5)
        for n in (2, 3, 4, 5):
            s = slack_matrix(n)
            for _ in range(50):
                flat = rng.uniform(-2, 2, size=n * (n + 1) // 2)
                lad = LadderVector.from_flat(flat, n)
                assert cone_gap(lad) == pytest.approx(float(np.min(s @ flat)), abs=1e-12)


class TestSampleH0:
    def test_deterministic(self):
        s1 = sample_h0(3, 0.5, 4, seed=99)
        s2 = sample_h0(3, 0.5, 4, seed=99)
        for a, b in zip(s1, s2):
            assert np.array_equal(a.matrix, b.matrix)

    def test_gap_postcondition(self):
        for s in sample_h0(3, 0.5, 10, seed=7):
            assert s.gap > 0.5
            assert np.max(np.abs(s.pattern.levels[-1])) <= 1.3

    def test_seed_changes_samples(self):
        s1 = sample_h0(2, 0.4, 1, seed=1)[0]
        s2 = sample_h0(2, 0.4, 1, seed=2)[0]
        assert not np.array_equal(s1.matrix, s2.matrix)

    def test_thin_cone_raises(self):
        # n = 3 with a unit box cannot reach gap 2.5 (nor even 0.51)
        with pytest.raises(SamplingError):
            sample_h0(3, 2.5, 1, seed=0, box=1.0)
        with pytest.raises(SamplingError):
            sample_h0(3, 0.51, 1, seed=0, box=1.0)


class TestPatternSamplers:
    def test_nested_gap(self):
        rng = sample_rng(0, 0)
        for n in (2, 3, 4):
            p = nested_gap_pattern(rng, n, 0.3, box=1.3)
            assert pattern_gap(p) > 0.3

    def test_lattice_gap(self):
        rng = sample_rng(0, 1)
        p = lattice_gap_pattern(rng, 4, 0.3, box=1.03)
        assert pattern_gap(p) > 0.3
        assert np.max(np.abs(p.levels[-1])) <= 1.04

    def test_lattice_infeasible(self):
        rng = sample_rng(0, 2)
        with pytest.raises(SamplingError):
            lattice_gap_pattern(rng, 4, 0.5, box=1.0)


class TestLadderBox:
    def test_gap_and_box(self):
        rng = sample_rng(3, 0)
        for _ in range(5):
            lad = sample_ladder(rng, 3, 0.2, box=1.5)
            assert cone_gap(lad) > 0.2
            assert np.max(np.abs(lad.flat())) <= 1.5

    def test_budget_exhaustion(self):
        rng = sample_rng(3, 1)
        with pytest.raises(SamplingError, match="smaller delta"):
            sample_ladder(rng, 4, 0.3, box=1.0, budget=50000)


class TestWDeltaSampler:
    def test_membership(self):
        for n in (2, 3):
            rng = sample_rng(11, n)
            w = sample_w_delta(rng, n, 0.5)
            assert in_w_delta(w, 0.5, n)

    def test_deterministic(self):
        w1 = sample_w_delta(sample_rng(11, 5), 3, 0.5)
        w2 = sample_w_delta(sample_rng(11, 5), 3, 0.5)
        assert np.array_equal(w1, w2)
