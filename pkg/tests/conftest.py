import numpy as np
import pytest

from longwave.fields import ScalarField, VectorField, make_grid


def band_limited(grid, rng, bandwidth=None, vector=False):
    """Random real field containing only modes with |n| <= bandwidth on every axis."""
    bandwidth = bandwidth if bandwidth is not None else min(grid.points) // 4
    idx = np.meshgrid(*[np.fft.fftfreq(n, 1.0 / n) for n in grid.points], indexing="ij")
    mask = np.all([np.abs(i) <= bandwidth for i in idx], axis=0)

    def one():
        spec = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * mask
        return np.fft.ifftn(spec).real * np.sqrt(grid.size)

    if vector:
        return VectorField(grid, np.stack([one() for _ in range(3)]))
    return ScalarField(grid, one())


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def grid1():
    return make_grid(1, [2 * np.pi], [32])


@pytest.fixture
def grid3():
    return make_grid(3, [2 * np.pi] * 3, [16] * 3)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
