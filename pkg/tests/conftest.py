"""Shared fixtures: the four reference algebras and their pipelines.

Everything heavy is session-scoped so the acceptance suite reuses one
bar model / transferred structure per algebra.
"""

from pathlib import Path

import pytest

from quiveralg.ainf import cyclic_complete_ainf, transfer_ainfinity
from quiveralg.barmodel import BarModel
from quiveralg.cyclic import cyclic_complete_presentation
from quiveralg.dsl import parse_path, parse_text

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def _load(name):
    return parse_path(DATA / name).presentation()


@pytest.fixture(scope="session")
def beilinson():
    return _load("beilinson.quiver")


@pytest.fixture(scope="session")
def commutative_xy():
    return _load("commutative_xy.quiver")


@pytest.fixture(scope="session")
def cubic_loop():
    return _load("cubic_loop.quiver")


@pytest.fixture(scope="session")
def free_two():
    return _load("free_two.quiver")


@pytest.fixture(scope="session")
def x_squared():
    return parse_text(
        "nodes: 1\n"
        "arrow x: 0 -> 0 deg 1\n"
        "rel r: x*x\n"
    ).presentation()


@pytest.fixture(scope="session")
def model_beilinson(beilinson):
    return BarModel(beilinson, 6)


@pytest.fixture(scope="session")
def model_xy(commutative_xy):
    return BarModel(commutative_xy, 6)


@pytest.fixture(scope="session")
def model_cubic(cubic_loop):
    return BarModel(cubic_loop, 6)


@pytest.fixture(scope="session")
def model_free(free_two):
    return BarModel(free_two, 6)


@pytest.fixture(scope="session")
def model_x2(x_squared):
    return BarModel(x_squared, 6)


@pytest.fixture(scope="session")
def ext_beilinson(model_beilinson):
    return transfer_ainfinity(model_beilinson, max_degree=6, max_arity=6)


@pytest.fixture(scope="session")
def ext_xy(model_xy):
    return transfer_ainfinity(model_xy, max_degree=6, max_arity=6)


@pytest.fixture(scope="session")
def ext_cubic(model_cubic):
    return transfer_ainfinity(model_cubic, max_degree=6, max_arity=6)


@pytest.fixture(scope="session")
def ext_free(model_free):
    return transfer_ainfinity(model_free, max_degree=6, max_arity=6)


@pytest.fixture(scope="session")
def completed_beilinson(ext_beilinson):
    return cyclic_complete_ainf(ext_beilinson, 3)


@pytest.fixture(scope="session")
def completed_xy(ext_xy):
    return cyclic_complete_ainf(ext_xy, 3)


@pytest.fixture(scope="session")
def completed_cubic(ext_cubic):
    # the cube relation sits in degree 3, so the pairing weight must be 4
    return cyclic_complete_ainf(ext_cubic, 3, weight=4)


@pytest.fixture(scope="session")
def completed_free(ext_free):
    return cyclic_complete_ainf(ext_free, 3)


@pytest.fixture(scope="session")
def p2(beilinson):
    """Completed projective-plane quiver and its superpotential."""
    return cyclic_complete_presentation(beilinson, 3)
