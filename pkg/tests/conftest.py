import pytest
from fractions import Fraction as F
from hypothesis import settings

from assouad import CubeParams, build_tree, third_cantor

# property tests replay identically across runs and machines
settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")


@pytest.fixture(scope="session")
def cantor():
    return third_cantor()


@pytest.fixture(scope="session")
def cantor_tree_tight(cantor):
    """Tight-constant tree whose nodes coincide with triadic cylinders."""
    tree = build_tree(cantor, CubeParams(s=F(1, 9), c=F(1, 3), C=F(1, 1), max_level=5))
    tree.materialize()
    return tree


@pytest.fixture(scope="session")
def cantor_tree_padded(cantor):
    """Default-constant tree: padded cubes, no boundary children."""
    tree = build_tree(cantor, CubeParams(s=F(1, 9), max_level=4))
    tree.materialize()
    return tree
