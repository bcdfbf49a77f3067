"""Shared corpus generators for the test suite.

Random fields are band-limited trigonometric polynomials with 1/(1+k)
amplitude decay, seeded per test so every run sees the same corpus.
"""

import numpy as np
import pytest

from muskatlab.grid import PeriodicGrid, RealField


def random_field(grid: PeriodicGrid, rng, k_max: int = 10, decay: float = 1.0) -> RealField:
    x = grid.nodes
    base = 2.0 * np.pi / grid.length
    f = np.zeros(grid.n_points)
    for k in range(1, k_max + 1):
        amp = 1.0 / (1.0 + k) ** decay
        f += amp * (rng.randn() * np.cos(base * k * x) + rng.randn() * np.sin(base * k * x))
    f -= np.mean(f)
    return RealField(grid, f, mean_removed=True)


def smooth_unit_slope_field(grid: PeriodicGrid, rng, k_max: int = 8, slope: float = 0.5) -> RealField:
    """Random band-limited field rescaled to a prescribed maximum slope."""
    from muskatlab.grid import derivative

    f = random_field(grid, rng, k_max=k_max, decay=2.0)
    peak = np.max(np.abs(derivative(f, 1).samples))
    return RealField(grid, f.samples * (slope / peak), mean_removed=True)


@pytest.fixture
def rng():
    return np.random.RandomState(12345)


@pytest.fixture
def grid_2pi():
    return PeriodicGrid(256, 2.0 * np.pi)
