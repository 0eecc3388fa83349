import numpy as np
import pytest

from casimir_qubit.modes import Mode, SlabGeometry


def sample_slab_modes(rng, count, *, massive=False, window=None):
    """Random (geometry, mode) pairs.

    ``window`` narrows the draw to the sub-range used by the realignment
    criterion, where the operator-Schmidt ratio stays above 0.1.
    """
    out = []
    for _ in range(count):
        if window == "realignment":
            geom = SlabGeometry(rng.uniform(1, 3), rng.uniform(1, 3), rng.uniform(0.5, 2),
                                rng.uniform(1, 1.5), rng.uniform(0, 1) if massive else 0.0)
            mode = Mode(int(rng.integers(-1, 2)), int(rng.integers(-1, 2)),
                        int(rng.integers(1, 3)), int(rng.integers(-2, 2)))
        else:
            geom = SlabGeometry(rng.uniform(0.5, 3), rng.uniform(0.5, 3), rng.uniform(0.25, 3),
                                rng.uniform(0.2, 5), rng.uniform(0.05, 3) if massive else 0.0)
            mode = Mode(int(rng.integers(-4, 5)), int(rng.integers(-4, 5)),
                        int(rng.integers(1, 6)), int(rng.integers(-6, 6)))
        out.append((geom, mode))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20231016)


@pytest.fixture
def random_complex():
    def make(rng, shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return make


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
