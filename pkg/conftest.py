"""
Shared fixtures: the test algebras and a few small modules over them.
"""
from pathlib import Path

import numpy as np
import pytest

from algebra import dual_numbers, path_A2, prime_field_algebra, three_dim_local, triangular_over
from fpmod import free_module, from_presentation

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def field2():
    return prime_field_algebra(2)


@pytest.fixture(scope="session")
def dual2():
    """F_2[x]/(x^2)."""
    return dual_numbers(2, 2)


@pytest.fixture(scope="session")
def local3():
    """F_2[x,y]/(x^2, xy, y^2)."""
    return three_dim_local(2)


@pytest.fixture(scope="session")
def path2():
    return path_A2(2)


@pytest.fixture(scope="session")
def tri_dual():
    return triangular_over(dual_numbers(2, 2))


@pytest.fixture
def k_dual(dual2):
    """The simple module A / (x)."""
    return from_presentation(dual2, np.array([[[0, 1]]]), name="k")


@pytest.fixture
def k_local(local3):
    return from_presentation(local3, np.array([[[0, 1, 0]], [[0, 0, 1]]]), name="k")


@pytest.fixture
def regular_dual(dual2):
    return free_module(dual2, 1, name="A")


@pytest.fixture
def s1_path(path2):
    """The simple projective A e1 = A / (A e2 + A alpha)."""
    return from_presentation(path2, np.array([[[0, 1, 0]], [[0, 0, 1]]]), name="S1")


@pytest.fixture
def s2_path(path2):
    """The non-projective simple A / (A e1 + A alpha)."""
    return from_presentation(path2, np.array([[[1, 0, 0]], [[0, 0, 1]]]), name="S2")
