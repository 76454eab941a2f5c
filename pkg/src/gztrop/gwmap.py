"""The action-exponentiating diffeomorphism and its t-scalings.

gamma sends a strictly interlacing Hermitian matrix to the positive definite
matrix with the entrywise-exponentiated action pattern and the same angles;
it is constructed directly from the inverse action/angle parametrization, so
action intertwining holds by construction, angles are preserved, and real
symmetric matrices in the positive-border component stay real symmetric.

The t-scaled map is b = upper_cholesky(gamma(t A)); its cluster chart then
converges to half the ladder coordinates of A as t grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualgroup import h_map
from .errors import ConvergenceError, DomainError, ScaleError
from .gz import (
    H0_GAP_TOL,
    gz_actions,
    gz_angles,
    gz_inverse,
    pattern_gap,
)
from .linalg import require_hermitian, upper_cholesky

SCALE_EXPONENT_CAP = 600.0


@dataclass(frozen=True)
class GWResult:
    """Scaled map output: b upper triangular, gamma = b b* the intermediate
    positive definite point, the scale t, and the source cone gap."""

    b: np.ndarray
    gamma: np.ndarray
    t: float
    source_gap: float


def gamma(a: np.ndarray, extended: bool = False) -> np.ndarray:
    """Positive definite matrix with actions exp(lambda_i^(k)(a)) and the
    angles of a.  Requires the strictly interlacing region.

    extended=True assembles the result in clongdouble: the exponentiated
    pattern spans e^{|lambda| * t} orders of magnitude under scaling, and the
    downstream Cholesky/minor cancellations eat roughly e^{spread * t} of
    relative precision.
    """
    a = require_hermitian(a)
    p = gz_actions(a)
    gap = pattern_gap(p)
    if not gap >= H0_GAP_TOL:
        raise DomainError(f"input is outside the strict region: cone gap {gap:.3e}")
    psi = gz_angles(a)
    if extended:
        exp_pattern = p.mapped(lambda lev: np.exp(lev.astype(np.longdouble)))
    else:
        exp_pattern = p.mapped(np.exp)
    return gz_inverse(exp_pattern, psi)


def gw(a: np.ndarray, t: float, extended: bool = False) -> GWResult:
    """b = upper_cholesky(gamma(t a)).

    Guards t * max |top-level eigenvalue| <= 600 so that exp stays inside
    double range.  The positive definiteness of gamma(t a) holds by
    construction, so the Cholesky pre-check is skipped; at t ~ 20 the
    eigenvalue pre-check would reject valid input through pure roundoff.
    """
    a = require_hermitian(a)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    p = gz_actions(a)
    gap = pattern_gap(p)
    if not gap >= H0_GAP_TOL:
        raise DomainError(f"input is outside the strict region: cone gap {gap:.3e}")
    top = float(np.max(np.abs(p.levels[-1])))
    if t * top > SCALE_EXPONENT_CAP:
        raise ScaleError(
            f"t * max|eigenvalue| = {t * top:.1f} exceeds {SCALE_EXPONENT_CAP:.0f}"
        )
    g = gamma(t * a, extended=extended)
    b = upper_cholesky(g, check=False)
    return GWResult(b=b, gamma=g, t=float(t), source_gap=gap)


def gw_u2_closed_form(x: float, y: float, rho: float, theta: float, t: float) -> np.ndarray:
    """The explicit 2 x 2 scaled map for [[x+y, rho e^{i theta}],
    [rho e^{-i theta}, x-y]] with r = sqrt(y^2 + rho^2):

        [[e^{t(x+y)/2},  e^{i theta} sqrt(e^{t(x+r)} + e^{t(x-r)}
                                          - e^{t(x+y)} - e^{t(x-y)})],
         [0,             e^{t(x-y)/2}]]
    """
    if not rho > 0:
        raise DomainError("rho must be positive (strict interlacing)")
    if not t > 0:
        raise DomainError("t must be positive")
    r = np.sqrt(y * y + rho * rho)
    radicand = np.exp(t * (x + r)) + np.exp(t * (x - r)) - np.exp(t * (x + y)) - np.exp(
        t * (x - y)
    )
    if radicand < -1e-12 * np.exp(t * (x + r)):
        raise ConvergenceError(f"negative radicand {radicand:.3e} in the closed form")
    radicand = max(radicand, 0.0)
    return np.array(
        [
            [np.exp(t * (x + y) / 2.0), np.exp(1j * theta) * np.sqrt(radicand)],
            [0.0, np.exp(t * (x - y) / 2.0)],
        ],
        dtype=complex,
    )


def verify_gw_result(res: GWResult, tol: float = 1e-9) -> float:
    """Relative defect of h_map(b) against the stored gamma."""
    m = h_map(res.b)
    scale = 1.0 + float(np.max(np.abs(res.gamma)))
    return float(np.max(np.abs(m - res.gamma)) / scale)
