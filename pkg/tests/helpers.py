"""Shared sampling helpers for the test suite."""

import numpy as np

from gztrop.gz import AnglePattern, gz_actions, pattern_gap
from gztrop.linalg import hermitian_part


def random_hermitian(rng, n, scale=1.0):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return hermitian_part(scale * z)


def strict_pattern(rng, n, min_gap=0.1, scale=1.0, tries=10000):
    """Strictly interlacing pattern with cone gap above `min_gap`.

    Drawn as the action pattern of a random Gaussian Hermitian matrix;
    acceptance rates are ~0.2 even at n = 5 for min_gap = 0.1.
    """
    for _ in range(tries):
        p = gz_actions(random_hermitian(rng, n, scale=scale))
        if pattern_gap(p) > min_gap:
            return p
    raise RuntimeError(f"no pattern with gap > {min_gap} found in {tries} draws")


def random_angles(rng, n):
    return AnglePattern.from_levels(
        [rng.uniform(0, 2 * np.pi, size=k) for k in range(1, n)]
    )
