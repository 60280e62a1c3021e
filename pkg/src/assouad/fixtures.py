"""Bundled concrete objects used by the CLI demos and the acceptance suite."""

from fractions import Fraction as F

from .cubes import CubeParams
from .measures import (
    GeometricMasses,
    HarmonicTailMasses,
    cantor_measure_pair,
    discrete_geometric,
    double_exp_measure,
)
from .sets import DoubleExponential, FinitePoints, GeometricClosure, third_cantor

EXAMPLE_P = F(2, 5)  # the skewed-pair parameter (0.4)


def cantor_desc():
    return third_cantor()


def cantor_params(depth, tight=True):
    """Tight constants give triadic-cylinder cubes and boundary spines; the
    looser defaults give padded interior-only cubes (the splitting-strategy
    testbed)."""
    if tight:
        return CubeParams(s=F(1, 9), c=F(1, 3), C=F(1, 1), max_level=depth)
    return CubeParams(s=F(1, 9), max_level=depth)


def geometric_desc():
    return GeometricClosure(F(1, 4))


def geometric_params(depth):
    return CubeParams(s=F(1, 4), max_level=depth)


def double_exp_desc():
    return DoubleExponential(F(1, 2), 2)


def double_exp_params(depth):
    return CubeParams(s=F(1, 8), max_level=depth)


def finite_points_desc():
    return FinitePoints([0, F(1, 7), F(1, 2), F(6, 7), 1])


def finite_points_params(depth):
    return CubeParams(s=F(1, 5), max_level=depth)


def example_pair(depth=12, p=EXAMPLE_P):
    return cantor_measure_pair(p, depth)


def geometric_measure():
    return discrete_geometric(F(1, 2), F(1, 4))


def dexp_bounded_tails():
    """Geometric masses 2^-n: tail ratios exactly 2 (dimension-zero class)."""
    return double_exp_measure(F(1, 2), 2, GeometricMasses(F(1, 2)))


def dexp_atom_at_limit():
    """Mass at the limit point: the non-doubling branch."""
    return double_exp_measure(F(1, 2), 2, GeometricMasses(F(1, 2)), at_zero=F(1, 10))


def dexp_slow_tails():
    """Masses 1/(n(n+1)): tails exactly 1/N, ratios drift to one."""
    return double_exp_measure(F(1, 2), 2, HarmonicTailMasses())


ALL_SET_FIXTURES = {
    "cantor": (cantor_desc, cantor_params),
    "geometric": (geometric_desc, geometric_params),
    "double_exp": (double_exp_desc, double_exp_params),
    "points": (finite_points_desc, finite_points_params),
}
