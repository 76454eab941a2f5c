"""Experiment drivers: determinism, report shape, and small-n behavior."""

import pytest

from gztrop.errors import DomainError
from gztrop.experiments import (
    ExperimentConfig,
    bracket_limit,
    bracket_prediction,
    chambers,
    converge_action,
    converge_angle,
    tropical_estimate,
    tropical_map_experiment,
)
from gztrop.reports import rows_to_csv


def small_cfg(**kw):
    base = dict(n=2, delta=0.4, t_grid=(1.0, 2.0, 4.0, 8.0), samples=3, seed=321)
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            ExperimentConfig(n=7).validate()
        with pytest.raises(DomainError):
            ExperimentConfig(t_grid=(2.0, 1.0)).validate()
        with pytest.raises(DomainError):
            ExperimentConfig(t_grid=(500.0,), box=1.3).validate()
        with pytest.raises(DomainError):
            ExperimentConfig(fmt="xml").validate()

    def test_tolerance_override(self):
        cfg = ExperimentConfig(tolerances={"action_final": 0.5})
        assert cfg.tol("action_final") == 0.5
        assert cfg.tol("angle_rounding") == 1e-2


class TestConvergeAction:
    def test_u2_pauli_style_errors(self):
        # for n = 2 the only fitted coordinate is (1, 2); principal ones exact
        rep = converge_action(small_cfg(t_grid=tuple(float(t) for t in range(1, 21))))
        assert rep.passed
        for c in rep.summary["coordinates"]:
            assert (c["i"], c["k"]) == (1, 2)
        assert rep.summary["monotone_fraction"] >= 0.95

    def test_rows_carry_replay_keys(self):
        rep = converge_action(small_cfg())
        for row in rep.rows:
            assert {"seed", "sample", "t", "err"} <= set(row)

    def test_deterministic_reports(self):
        r1 = converge_action(small_cfg())
        r2 = converge_action(small_cfg())
        c1 = rows_to_csv(r1.fieldnames, r1.rows)
        c2 = rows_to_csv(r2.fieldnames, r2.rows)
        assert c1 == c2

    def test_principal_coordinates_exact(self):
        rep = converge_action(small_cfg())
        for row in rep.rows:
            if row["i"] == row["k"]:
                assert row["err"] <= 1e-12


class TestConvergeAngle:
    def test_n2_identity_fit(self):
        cfg = small_cfg(samples=25, t_grid=tuple(float(t) for t in range(1, 16)))
        rep = converge_angle(cfg)
        assert rep.passed
        assert rep.summary["b_rounded"] == [[1]]
        assert rep.summary["det_rounded"] in (-1, 1)
        assert rep.summary["max_rounding_error"] <= 1e-2

    def test_needs_enough_samples(self):
        from gztrop.errors import SamplingError

        with pytest.raises(SamplingError):
            converge_angle(small_cfg(n=3, samples=3))


class TestBracketPrediction:
    def test_spot_values(self):
        # shared column, no shared row, one level apart
        assert bracket_prediction(1, 2, 1, 3, 3) == pytest.approx(-0.5)
        assert bracket_prediction(1, 1, 1, 2, 2) == pytest.approx(-0.5)
        # same minor: C = R
        assert bracket_prediction(1, 2, 1, 2, 3) == 0.0
        # higher level first: eps = +1 kills the factor
        assert bracket_prediction(1, 3, 1, 2, 3) == 0.0

    def test_casimir_rows_vanish(self):
        for q, p in ((1, 2), (1, 3), (2, 3)):
            assert bracket_prediction(3, 3, q, p, 3) == 0.0


class TestBracketLimit:
    def test_n2_table(self):
        cfg = small_cfg(samples=2, t_grid=(8.0,), delta=0.45)
        rep = bracket_limit(cfg)
        assert rep.passed
        assert rep.summary["sigma"] in (-1.0, 1.0)
        # the only zeta-phi pairing with nonzero prediction is (1,1) x (1,2)
        preds = {
            ((r["f_i"], r["f_k"]), (r["g_i"], r["g_k"])): r["predicted"]
            for r in rep.rows
            if r["kind"] == "zp"
        }
        assert preds[((1, 1), (1, 2))] == pytest.approx(-0.5)
        assert preds[((1, 2), (1, 2))] == 0.0
        assert preds[((2, 2), (1, 2))] == 0.0

    def test_n4_rejected(self):
        with pytest.raises(DomainError):
            bracket_limit(small_cfg(n=4))


class TestChambers:
    def test_n2_signs(self):
        rep = chambers(small_cfg(samples=2, t_grid=(12.0,)))
        assert rep.passed
        fiber = [r for r in rep.rows if r["part"] == "fiber"]
        for row in fiber:
            want = "+" if row["pattern"] == "0" else "-"
            assert row["chamber"] == want
        assert rep.summary["positive_sections"] == ["0", "0"]

    def test_unique_positive_section_n3(self):
        cfg = ExperimentConfig(
            n=3, delta=0.5, t_grid=(20.0,), samples=2, seed=5, box=1.3
        )
        rep = chambers(cfg)
        assert rep.passed
        assert rep.summary["unique_positive_section"]

    def test_symmetric_section_has_zero_phases(self):
        # the zero-angle section lands in the all-positive chamber at large
        # t, so every chart phase sits at 0 (mod 2pi)
        import numpy as np

        from gztrop.dualgroup import cluster_chart
        from gztrop.gz import angle_distance, symmetric_section_point
        from gztrop.gwmap import gw
        from gztrop.sampling import nested_gap_pattern, sample_rng

        rng = sample_rng(17, 0)
        for _ in range(5):
            a = symmetric_section_point(nested_gap_pattern(rng, 3, 0.5, box=1.3))
            point = cluster_chart(gw(a, 15.0, extended=True).b, 15.0)
            for k in range(2, 4):
                for i in range(1, k):
                    assert angle_distance(point.phi_value(i, k), 0.0) <= 1e-8


class TestTropicalDrivers:
    def test_map_experiment(self):
        rep = tropical_map_experiment(
            small_cfg(n=3), feasibility_samples=2000, roundtrip_samples=100
        )
        assert rep.passed
        assert rep.summary["min_rhombus_slack"] >= -1e-12

    def test_estimate_decay(self):
        cfg = ExperimentConfig(
            n=2, delta=0.5, t_grid=tuple(float(t) for t in range(1, 21)), samples=4, seed=9
        )
        rep = tropical_estimate(cfg)
        assert rep.passed
        assert rep.summary["worst_final"] <= 1e-3
        assert rep.summary["worst_slope"] <= -0.4
