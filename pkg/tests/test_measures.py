from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assouad import (
    CodingTree,
    CubeParams,
    DomainError,
    ExplicitMasses,
    GeometricMasses,
    HarmonicTailMasses,
    StructureError,
    add_atom,
    assign_weights,
    build_tree,
    cantor_measure_pair,
    discrete_geometric,
    double_exp_measure,
    sum_measures,
    uniform_measure,
)


def test_uniform_coding_masses():
    tree = CodingTree(8)
    mu = uniform_measure(tree)
    assert mu.node_mass(tree.node_at((0,))) == F(1, 2)
    assert mu.node_mass(tree.node_at((0, 1, 0))) == F(1, 8)
    # ball exactly covering the left cylinder
    assert mu.ball_mass(F(0), F(1, 3) + F(1, 100)).value == F(1, 2)
    assert mu.ball_mass(F(0), F(2)).value == 1


def test_single_child_weight_one():
    from assouad import FinitePoints

    tree = build_tree(FinitePoints([0]), CubeParams(s=F(1, 5), max_level=5))
    mu = uniform_measure(tree)
    node = tree.root
    while node.level < 5:
        node = tree.children(node)[0]
        assert mu.node_mass(node) == 1  # chains keep the parent's mass


def test_pair_exact_values():
    p = F(2, 5)
    mu, nu = cantor_measure_pair(p, 8)
    T = mu.tree
    assert mu.node_mass(T.node_at((0,))) == p
    assert mu.node_mass(T.node_at((0, 0))) == p * p  # 0.16
    assert mu.node_mass(T.node_at((0, 1))) == p * (1 - p)  # 0.24
    assert mu.node_mass(T.node_at((0, 1, 1))) == p * (1 - p) / 2  # 0.12
    assert nu.node_mass(T.node_at((1, 1))) == p * p
    # every level sums to exactly one
    for level in (1, 2, 3, 6):
        total = F(0)
        words = [()]
        for _ in range(level):
            words = [w + (j,) for w in words for j in (0, 1)]
        for w in words:
            total += mu.node_mass(T.node_at(w))
        assert total == 1


def test_pair_rejects_bad_p():
    with pytest.raises(DomainError):
        cantor_measure_pair(F(1, 2), 6)
    with pytest.raises(DomainError):
        cantor_measure_pair(F(0), 6)


def test_sum_measure():
    p = F(2, 5)
    mu, nu = cantor_measure_pair(p, 8)
    sig = sum_measures(mu, nu)
    T = sig.tree
    assert sig.node_mass(T.node_at((0,))) == 1  # p + (1 - p)
    assert sig.base_mass == 2
    assert not sig.normalized
    # nodewise additivity, and the documented envelope (mu+nu)(I_w) = O(2^-|w|)
    words = [()]
    for level in range(1, 7):
        words = [w + (j,) for w in words for j in (0, 1)]
        for w in words:
            node = T.node_at(w)
            assert sig.node_mass(node) == mu.node_mass(node) + nu.node_mass(node)
            assert sig.node_mass(node) <= 4 * F(1, 2**level)

    other = uniform_measure(CodingTree(8))
    with pytest.raises(StructureError):
        sum_measures(mu, other)


def test_sum_with_itself_doubles():
    mu, _ = cantor_measure_pair(F(2, 5), 6)
    twice = sum_measures(mu, mu)
    node = mu.tree.node_at((0, 1))
    assert twice.node_mass(node) == 2 * mu.node_mass(node)


def test_weight_rule_validation():
    tree = CodingTree(4)

    def bad_sum(t, node, kids):
        return [F(1, 3), F(1, 3)]

    with pytest.raises(DomainError):
        assign_weights(tree, bad_sum).node_mass(tree.node_at((0,)))

    def bad_sign(t, node, kids):
        return [F(3, 2), F(-1, 2)]

    with pytest.raises(DomainError):
        assign_weights(tree, bad_sign).node_mass(tree.node_at((0,)))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_random_rules_keep_exact_mass(seed):
    import random

    rng = random.Random(seed)
    tree = CodingTree(5)

    def rule(t, node, kids):
        a = rng.randint(1, 99)
        b = rng.randint(1, 99)
        return [F(a, a + b), F(b, a + b)]

    mu = assign_weights(tree, rule)
    words = [()]
    for _ in range(5):
        words = [w + (j,) for w in words for j in (0, 1)]
    assert sum(mu.node_mass(tree.node_at(w)) for w in words) == 1


def test_ball_mass_monotone_in_radius():
    tree = CodingTree(10)
    mu = uniform_measure(tree)
    x = F(1, 4)  # a set point (0.020202... in base 3)
    radii = [F(1, 3**k) for k in range(1, 9)]
    masses = [mu.ball_mass(x, r).hi for r in radii]
    assert all(a >= b for a, b in zip(masses, masses[1:]))


def test_ball_mass_bracket_and_tolerance():
    tree = CodingTree(6)
    mu = uniform_measure(tree)
    # this ball boundary lands inside the leaf cylinder [2/729, 3/729]
    radius = F(5, 2 * 3**6)
    bracket = mu.ball_mass(F(0), radius)
    assert bracket.lo < bracket.hi
    from assouad import PrecisionError

    with pytest.raises(PrecisionError):
        mu.ball_mass(F(0), radius, tol=F(1, 10**9))


def test_discrete_geometric_exact():
    dm = discrete_geometric(F(1, 2), F(1, 4))
    assert dm.total_mass == 1
    assert dm.tail(1) / dm.tail(2) == 4
    assert dm.tail(5) == F(1, 4) ** 4
    # ball isolating the top point
    assert dm.ball_mass(F(1, 2), F(1, 8)).value == dm.mass_at_index(1) == F(3, 4)
    # open ball: the boundary point q^2 = 1/4 is excluded
    assert dm.ball_mass(F(0), F(1, 4)).value == dm.tail(3)
    assert dm.ball_mass(F(0), F(1, 4) + F(1, 100)).value == dm.tail(2)
    masses = [dm.mass_at_index(n) for n in range(1, 6)]
    assert all(a > b for a, b in zip(masses, masses[1:]))


def test_double_exp_profiles():
    hm = double_exp_measure(F(1, 2), 2, HarmonicTailMasses())
    assert hm.tail(5) == F(1, 5)
    assert hm.tail(1) == 1
    geom = double_exp_measure(F(1, 2), 2, GeometricMasses(F(1, 2)))
    assert geom.tail(3) / geom.tail(4) == 2
    x3 = geom.point(3)
    assert geom.ball_mass(x3, x3 / 2).value == geom.mass_at_index(3)
    # the wide ball catches the whole tail below x2
    assert geom.ball_mass(x3, 2 * x3).value == geom.tail(3)

    expl = double_exp_measure(F(1, 2), 2, ExplicitMasses([0, F(1, 1)]))
    assert expl.tail(2) == 1 and expl.tail(3) == 0


def test_atom_mixture():
    mu = uniform_measure(CodingTree(8))
    with_atom = add_atom(mu, F(0))
    assert with_atom.total_mass == 2
    assert not with_atom.normalized
    assert with_atom.ball_mass(F(0), F(1, 100)).lo >= 1
    with pytest.raises(DomainError):
        add_atom(mu, F(1, 2))  # not in the support

    dm = discrete_geometric(F(1, 2), F(1, 4))
    dm2 = add_atom(dm, F(1, 4))
    assert dm2.ball_mass(F(1, 4), F(1, 100)).value == dm.mass_at_index(2) + 1
    with pytest.raises(DomainError):
        add_atom(dm, F(3, 10))


def test_weighted_measure_on_cube_tree(cantor_tree_tight):
    mu = uniform_measure(cantor_tree_tight)
    node = cantor_tree_tight.node_at((0,))
    assert mu.node_mass(node) == F(1, 4)
    assert mu.ball_mass(F(0), F(1, 9)).value == F(1, 4)
