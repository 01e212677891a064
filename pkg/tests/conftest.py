import numpy as np
import pytest

from phasesep import (DoubleWell, FlatStrip, Icosphere, Interpolant, generate,
                      measures)


@pytest.fixture(scope="session")
def quartic():
    return DoubleWell.quartic()


@pytest.fixture(scope="session")
def ip_unit():
    return Interpolant(1.0, 1.0)


@pytest.fixture(scope="session")
def unit_strip():
    mesh = generate(FlatStrip(1, 1, 1.0, 1.0))
    return mesh, measures(mesh)


@pytest.fixture(scope="session")
def strip8():
    mesh = generate(FlatStrip(8, 8, 1.0, 1.0))
    return mesh, measures(mesh)


@pytest.fixture(scope="session")
def ico2():
    mesh = generate(Icosphere(2, 1.0))
    return mesh, measures(mesh)


@pytest.fixture(scope="session")
def ico3():
    mesh = generate(Icosphere(3, 1.0))
    return mesh, measures(mesh)


@pytest.fixture(scope="session")
def ico4():
    mesh = generate(Icosphere(4, 1.0))
    return mesh, measures(mesh)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
