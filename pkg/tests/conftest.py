"""
Fixtures compartidas: dominios pequeños a h = 1/16 y h = 1/32
"""

import os
import sys

import numpy as np
import pytest

# Añadir la raíz del repositorio al path, igual que main.py
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from numerics.shapes import disk_domain, l_shape_domain, square_domain  # noqa: E402

COARSE_H = 1.0 / 16.0
FINE_H = 1.0 / 32.0


@pytest.fixture(scope="session")
def square16():
    return square_domain(1.0, COARSE_H)


@pytest.fixture(scope="session")
def disk16():
    return disk_domain(1.0, COARSE_H)


@pytest.fixture(scope="session")
def lshape16():
    return l_shape_domain(COARSE_H)


@pytest.fixture(scope="session")
def square32():
    return square_domain(1.0, FINE_H)


@pytest.fixture(scope="session")
def disk32():
    return disk_domain(1.0, FINE_H)


@pytest.fixture(scope="session")
def lshape32():
    return l_shape_domain(FINE_H)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
