"""Linear Poisson bracket on Hermitian matrices, gradients, and flows.

Functions on Hermitian matrices are paired with matrix directions through
tr(X Y).  The bracket of two scalar fields is

    {f, g}(A) = s * tr(A * i[grad f, grad g]),

with the global sign s calibrated once so that {lambda_1^(1), psi_1^(1)} = +1
on 2 x 2 matrices.  The Hamiltonian flow of f integrates dA/dt = s*i[A, grad f]
(so that along the flow of f any observable g moves at rate {f, g}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, FlowDegenerationError, StepSizeError
from .gz import H0_GAP_TOL, gz_actions, gz_angles, pattern_gap
from .linalg import hermitian_part

BRACKET_SIGN = 1.0
"""Global bracket sign; +1 makes {lambda_1^(1), psi_1^(1)} = +1 with the
angle convention of gz.gz_angles (calibrated by test_poisson)."""

DEFAULT_FD_STEP = 1e-5


@dataclass
class ScalarField:
    """Deterministic real-valued function of a Hermitian matrix.

    circle=True marks values living on R/2pi; finite differences then use
    wrapped deltas so the branch cut does not pollute derivatives.
    """

    fn: Callable[[np.ndarray], float]
    label: str = ""
    circle: bool = False

    def __call__(self, a: np.ndarray) -> float:
        return float(self.fn(a))


def _wrap_pi(x: float) -> float:
    return float(np.mod(x + np.pi, 2.0 * np.pi) - np.pi)


def hermitian_basis(n: int):
    """Real basis of Hermitian n x n matrices with squared trace norms.

    E_ii (norm 1), E_ij + E_ji and i(E_ij - E_ji) for i < j (norm 2).
    """
    out = []
    for i in range(n):
        b = np.zeros((n, n), dtype=complex)
        b[i, i] = 1.0
        out.append((b, 1.0))
    for i in range(n):
        for j in range(i + 1, n):
            b = np.zeros((n, n), dtype=complex)
            b[i, j] = 1.0
            b[j, i] = 1.0
            out.append((b, 2.0))
            c = np.zeros((n, n), dtype=complex)
            c[i, j] = 1.0j
            c[j, i] = -1.0j
            out.append((c, 2.0))
    return out


def _directional(f: ScalarField, a: np.ndarray, b: np.ndarray, step: float) -> float:
    up = f(hermitian_part(a + step * b))
    dn = f(hermitian_part(a - step * b))
    if not (np.isfinite(up) and np.isfinite(dn)):
        raise DomainError(f"field {f.label or f.fn}: non-finite sample in finite difference")
    d = up - dn
    if f.circle:
        d = _wrap_pi(d)
    return d / (2.0 * step)


def gradient(
    f: ScalarField,
    a: np.ndarray,
    step: float = DEFAULT_FD_STEP,
    verify_step: bool = False,
    verify_tol: float = 1e-4,
) -> np.ndarray:
    """Hermitian gradient of f at a: tr(B grad f) is the derivative along B.

    Central differences along the n^2 real basis directions.  verify_step
    repeats the computation at half the step and raises StepSizeError when
    the two disagree beyond verify_tol (Richardson consistency check).
    """
    if not 1e-7 <= step <= 1e-3:
        raise DomainError(f"finite-difference step {step} outside [1e-7, 1e-3]")
    a = hermitian_part(np.asarray(a, dtype=complex))
    n = a.shape[0]
    g = np.zeros((n, n), dtype=complex)
    for b, norm2 in hermitian_basis(n):
        g += (_directional(f, a, b, step) / norm2) * b
    if verify_step:
        g2 = np.zeros((n, n), dtype=complex)
        for b, norm2 in hermitian_basis(n):
            g2 += (_directional(f, a, b, step / 2.0) / norm2) * b
        dev = float(np.max(np.abs(g - g2)))
        if dev > verify_tol:
            raise StepSizeError(
                f"gradient of {f.label or 'field'} differs by {dev:.3e} after halving the step"
            )
    return g


def bracket_from_gradients(a: np.ndarray, gf: np.ndarray, gg: np.ndarray) -> float:
    comm = gf @ gg - gg @ gf
    return float(BRACKET_SIGN * np.trace(a @ (1j * comm)).real)


def bracket(f: ScalarField, g: ScalarField, a: np.ndarray, step: float = DEFAULT_FD_STEP) -> float:
    """{f, g}(a) = s * tr(a * i[grad f, grad g])."""
    a = hermitian_part(np.asarray(a, dtype=complex))
    return bracket_from_gradients(a, gradient(f, a, step), gradient(g, a, step))


def hamiltonian_flow(
    f: ScalarField,
    a: np.ndarray,
    time: float,
    steps: int,
    step: float = DEFAULT_FD_STEP,
    gap_tol: float = H0_GAP_TOL,
) -> np.ndarray:
    """Integrate dA/dt = s*i[A, grad f] with classical fourth-order Runge-Kutta.

    Requires steps >= 10*|time|.  Raises FlowDegenerationError with the exit
    time if the trajectory leaves the strictly interlacing region.
    """
    if steps < 10 * abs(time):
        raise DomainError(f"steps={steps} below 10*|time|={10 * abs(time):.1f}")
    a = hermitian_part(np.asarray(a, dtype=complex))
    h = time / steps

    def rhs(m: np.ndarray) -> np.ndarray:
        gf = gradient(f, m, step)
        return hermitian_part(BRACKET_SIGN * 1j * (m @ gf - gf @ m))

    for j in range(steps):
        k1 = rhs(a)
        k2 = rhs(hermitian_part(a + 0.5 * h * k1))
        k3 = rhs(hermitian_part(a + 0.5 * h * k2))
        k4 = rhs(hermitian_part(a + h * k3))
        a = hermitian_part(a + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
        if pattern_gap(gz_actions(a)) < gap_tol:
            raise FlowDegenerationError(exit_time=(j + 1) * h)
    return a


def action_field(i: int, k: int) -> ScalarField:
    """lambda_i^(k) as a scalar field (1-based indices)."""
    return ScalarField(
        fn=lambda a: gz_actions(a).value(i, k), label=f"lambda_{i}^({k})", circle=False
    )


def angle_field(i: int, k: int) -> ScalarField:
    """psi_i^(k) as a circle-valued scalar field (1-based indices)."""
    return ScalarField(
        fn=lambda a: gz_angles(a).value(i, k), label=f"psi_{i}^({k})", circle=True
    )


def trace_field() -> ScalarField:
    return ScalarField(fn=lambda a: float(np.trace(a).real), label="trace")
