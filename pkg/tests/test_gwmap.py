"""The action-exponentiating map, its scalings, and the 2x2 closed form."""

import numpy as np
import pytest

from gztrop.dualgroup import cluster_chart, corner_minor, flaschka_ratiu
from gztrop.errors import DomainError, ScaleError
from gztrop.gz import (
    angle_distance,
    gz_actions,
    gz_angles,
    gz_inverse,
    to_ladder,
)
from gztrop.gwmap import gamma, gw, gw_u2_closed_form, verify_gw_result
from gztrop.linalg import hermitian_part

from helpers import random_angles, strict_pattern

RNG = np.random.default_rng(555)


def sample_point(rng, n, gap=0.3, scale=0.8):
    return gz_inverse(strict_pattern(rng, n, min_gap=gap, scale=scale), random_angles(rng, n))


def u2_matrix(x, y, rho, theta):
    z = rho * np.exp(1j * theta)
    return np.array([[x + y, z], [np.conj(z), x - y]], dtype=complex)


class TestGamma:
    def test_pauli_closed_value(self):
        g = gamma(np.array([[0, 1], [1, 0]], dtype=complex))
        e = np.e
        off = np.sqrt(e + 1 / e - 2)
        assert np.allclose(g, [[e + 1 / e - 1, off], [off, 1]], atol=1e-10)

    def test_action_intertwining(self):
        for _ in range(20):
            n = int(RNG.integers(2, 5))
            a = sample_point(RNG, n)
            pg = gz_actions(gamma(a))
            pa = gz_actions(a)
            for x, y in zip(pa.levels, pg.levels):
                assert np.max(np.abs(np.exp(x) - y)) <= 1e-9 * (1 + np.max(np.exp(x)))

    def test_angles_preserved(self):
        for _ in range(20):
            n = int(RNG.integers(2, 5))
            a = sample_point(RNG, n)
            sa, sg = gz_angles(a), gz_angles(gamma(a))
            for x, y in zip(sa.levels, sg.levels):
                assert np.max(angle_distance(x, y)) <= 1e-9

    def test_shift_scaling_property(self):
        for _ in range(100):
            n = int(RNG.integers(2, 4))
            a = sample_point(RNG, n)
            u = float(RNG.uniform(-1, 1))
            lhs = gamma(a + u * np.eye(n))
            rhs = np.exp(u) * gamma(a)
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.max(np.abs(rhs)))

    def test_conjugation_property(self):
        for _ in range(100):
            n = int(RNG.integers(2, 4))
            a = sample_point(RNG, n)
            lhs = gamma(np.conj(a))
            rhs = np.conj(gamma(a))
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.max(np.abs(rhs)))

    def test_symmetric_component_preserved(self):
        for _ in range(100):
            n = int(RNG.integers(2, 5))
            p = strict_pattern(RNG, n, min_gap=0.2)
            from gztrop.gz import symmetric_section_point

            a = symmetric_section_point(p)
            g = gamma(a)
            assert np.max(np.abs(g.imag)) <= 1e-10 * (1 + np.max(np.abs(g)))
            assert np.max(np.abs(g - g.T)) <= 1e-9 * (1 + np.max(np.abs(g)))

    def test_torus_equivariance(self):
        for _ in range(100):
            n = int(RNG.integers(2, 4))
            a = sample_point(RNG, n)
            u = np.diag(np.exp(1j * RNG.uniform(0, 2 * np.pi, size=n)))
            lhs = gamma(hermitian_part(u @ a @ u.conj().T))
            rhs = u @ gamma(a) @ u.conj().T
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.max(np.abs(rhs)))

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            gamma(np.eye(3, dtype=complex))


class TestGW:
    def test_pauli_formula(self):
        for t in (0.5, 1.0, 3.0, 8.0):
            res = gw(np.array([[0, 1], [1, 0]], dtype=complex), t)
            want = np.array(
                [[1.0, np.exp(t / 2) - np.exp(-t / 2)], [0.0, 1.0]], dtype=complex
            )
            assert np.max(np.abs(res.b - want)) <= 1e-9 * (1 + np.max(np.abs(want)))
            assert verify_gw_result(res) <= 1e-9

    def test_matches_closed_form(self):
        for _ in range(100):
            x, y = RNG.uniform(-0.6, 0.6, size=2)
            rho = RNG.uniform(0.2, 1.0)
            theta = RNG.uniform(0, 2 * np.pi)
            for t in (1.0, 5.0, 10.0):
                res = gw(u2_matrix(x, y, rho, theta), t)
                want = gw_u2_closed_form(x, y, rho, theta, t)
                err = np.max(np.abs(res.b - want) / (1 + np.abs(want)))
                assert err <= 1e-8

    def test_ladder_intertwining(self):
        # 200 samples with cone gap > 0.3 and spectra in [-1.3, 1.3] ([-1, 1]
        # at n = 4, where the minor cancellations are deepest); t = 10 runs
        # through the extended-precision lane
        from gztrop.sampling import lattice_gap_pattern, nested_gap_pattern

        for trial in range(200):
            n = 2 + trial % 3
            if n == 4:
                p = lattice_gap_pattern(RNG, 4, delta=0.3, box=1.03)
            else:
                p = nested_gap_pattern(RNG, n, delta=0.3, box=1.3)
            a = gz_inverse(p, random_angles(RNG, n))
            lad = to_ladder(p)
            for t, ext in ((1.0, False), (5.0, False), (10.0, True)):
                res = gw(a, t, extended=ext)
                fr = np.asarray(flaschka_ratiu(res.b, t).flat(), dtype=float)
                assert np.max(np.abs(fr - lad.flat())) <= 1e-8

    def test_scalar_matrix_rejected(self):
        with pytest.raises(DomainError):
            gw(np.eye(3, dtype=complex) * 0.7, 1.0)

    def test_overflow_guard(self):
        a = sample_point(RNG, 2, gap=0.3)
        top = np.max(np.abs(gz_actions(a).levels[-1]))
        with pytest.raises(ScaleError):
            gw(a, 601.0 / top)

    def test_symmetric_input_gives_real_b(self):
        from gztrop.gz import symmetric_section_point

        for _ in range(20):
            n = int(RNG.integers(2, 5))
            a = symmetric_section_point(strict_pattern(RNG, n, min_gap=0.25))
            res = gw(a, 4.0)
            assert np.max(np.abs(res.b.imag)) <= 1e-9 * (1 + np.max(np.abs(res.b)))

    def test_torus_equivariance_of_chart(self):
        # conjugating by a diagonal unitary leaves |corner minors| fixed and
        # shifts phases by theta_rows - theta_cols
        for _ in range(25):
            n = int(RNG.integers(2, 4))
            a = sample_point(RNG, n, gap=0.3)
            thetas = RNG.uniform(0, 2 * np.pi, size=n)
            u = np.diag(np.exp(1j * thetas))
            t = 3.0
            b0 = gw(a, t).b
            b1 = gw(hermitian_part(u @ a @ u.conj().T), t).b
            for k in range(1, n + 1):
                for i in range(1, k + 1):
                    d0 = corner_minor(b0, i, k)
                    d1 = corner_minor(b1, i, k)
                    assert abs(abs(d1) - abs(d0)) <= 1e-8 * (1 + abs(d0))
                    rows = range(n - k + 1, n - k + i + 1)
                    cols = range(n - i + 1, n + 1)
                    shift = sum(thetas[r - 1] for r in rows) - sum(thetas[c - 1] for c in cols)
                    assert (
                        angle_distance(np.angle(d1), np.angle(d0) + shift) <= 1e-7
                    )


class TestClosedForm:
    def test_literal_values(self):
        b = gw_u2_closed_form(0.0, 0.0, 1.0, 0.0, 1.0)
        e = np.e
        assert np.allclose(b, [[1.0, np.sqrt(e + 1 / e - 2)], [0, 1.0]], atol=1e-12)

    def test_phase_factor(self):
        b0 = gw_u2_closed_form(0.2, 0.1, 0.8, 0.0, 2.0)
        b1 = gw_u2_closed_form(0.2, 0.1, 0.8, np.pi / 3, 2.0)
        assert b1[0, 1] == pytest.approx(b0[0, 1] * np.exp(1j * np.pi / 3))
        assert b1[0, 0] == b0[0, 0] and b1[1, 1] == b0[1, 1]

    def test_large_t_limit_of_zeta(self):
        # zeta_1^(2) -> lambda_1^(2) / 2 = (x + r)/2; at x=y=0, rho=1, t=20
        b = gw_u2_closed_form(0.0, 0.0, 1.0, 0.0, 20.0)
        zeta = np.log(abs(b[0, 1])) / 20.0
        assert abs(zeta - 0.5) <= 1e-8

    def test_rho_positive_required(self):
        with pytest.raises(DomainError):
            gw_u2_closed_form(0.0, 0.0, 0.0, 0.0, 1.0)


class TestChartConvergence:
    def test_u2_explicit_error_decay(self):
        # err(t) = |2 zeta_1^(2) - ell_1^(2)| for the Pauli point:
        # 2 ln(e^{t/2} - e^{-t/2}) / t - 1 -> 0 like e^{-t}/t
        a = np.array([[0, 1], [1, 0]], dtype=complex)
        lad = to_ladder(gz_actions(a))
        for t, bound in ((5.0, 1e-2), (20.0, 1e-8)):
            res = gw(a, t)
            pt = cluster_chart(res.b, t)
            err = abs(2 * pt.zeta_value(1, 2) - lad.value(1, 2))
            assert err <= bound
            # principal coordinates are exact for every t
            assert abs(2 * pt.zeta_value(1, 1) - lad.value(1, 1)) <= 1e-12
            assert abs(2 * pt.zeta_value(2, 2) - lad.value(2, 2)) <= 1e-12
