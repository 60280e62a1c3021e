from fractions import Fraction as F

import pytest

from assouad import (
    ConstructionError,
    CubeParams,
    DomainError,
    DoubleExponential,
    FinitePoints,
    GeometricClosure,
    boundary_paths,
    build_tree,
    dump_tree,
    split_rate,
    verify_properties,
)
from assouad.cubes import brute_force_split_rate


def test_params_validation():
    with pytest.raises(DomainError):
        CubeParams(s=F(1, 3))  # must be strictly below 1/3
    with pytest.raises(DomainError):
        CubeParams(s=F(1, 9), c=F(1, 2), C=F(1, 4))
    with pytest.raises(DomainError):
        CubeParams(s=F(1, 9), max_level=0)


def test_tight_cantor_nodes_are_triadic_cylinders(cantor_tree_tight):
    """With c = 1/3, C = 1 the level-k cubes coincide with the level-2k
    triadic intervals and every node has four children."""
    tree = cantor_tree_tight
    for k in (0, 1, 2, 3):
        nodes = tree.levels(k)
        cylinders = [(F(0), F(1))]
        for _ in range(2 * k):
            nxt = []
            for a, b in cylinders:
                t = (b - a) / 3
                nxt.append((a, a + t))
                nxt.append((b - t, b))
            cylinders = sorted(nxt)
        assert [(n.lo, n.hi) for n in nodes] == cylinders
        if k < 3:
            for n in nodes:
                assert len(tree.children(n)) == 4


def test_verify_passes_on_fixture_family(cantor_tree_tight, cantor_tree_padded):
    for tree in (cantor_tree_tight, cantor_tree_padded):
        rep = verify_properties(tree)
        assert rep.passed, rep.failures[:3]

    for desc, params in (
        (GeometricClosure(F(1, 4)), CubeParams(s=F(1, 4), max_level=8)),
        (DoubleExponential(F(1, 2), 2), CubeParams(s=F(1, 8), max_level=8)),
        (FinitePoints([0, F(1, 7), F(1, 2), F(6, 7), 1]), CubeParams(s=F(1, 5), max_level=8)),
        (FinitePoints([0]), CubeParams(s=F(1, 5), max_level=6)),
    ):
        tree = build_tree(desc, params)
        tree.materialize()
        rep = verify_properties(tree, check_membership="full")
        assert rep.passed, rep.failures[:3]


def test_verify_catches_injected_length_defect(cantor):
    tree = build_tree(cantor, CubeParams(s=F(1, 9), c=F(1, 3), C=F(1, 1), max_level=3))
    tree.materialize()
    victim = tree.levels(2)[3]
    victim.hi = victim.lo + 3 * tree.max_len(2)  # force property (i) to fail
    rep = verify_properties(tree)
    assert not rep.passed
    assert any(f.prop == "i" and f.word == victim.word for f in rep.failures)


def test_verify_catches_moved_distinguished_point(cantor):
    tree = build_tree(cantor, CubeParams(s=F(1, 9), c=F(1, 3), C=F(1, 1), max_level=3))
    tree.materialize()
    node = tree.levels(1)[0]
    # the leftmost child hugs the node's edge; planting x_w there breaks the
    # margin and the classification at once
    node.x_w = node.lo
    rep = verify_properties(tree)
    assert not rep.passed
    assert any(f.prop in ("ii", "class") for f in rep.failures)


def test_boundary_paths_on_spines(cantor_tree_tight):
    paths = boundary_paths(cantor_tree_tight, min_len=2)
    assert paths
    # the extreme left spine is a maximal boundary path from the root
    spine = [p for p in paths if p.start_level == 0 and all(j == 0 for w in p.words for j in w)]
    assert spine and spine[0].length == cantor_tree_tight.params.max_level
    for p in paths:
        assert p.is_boundary_path
        assert p.split_count >= p.length - 1
        assert 0 <= p.split_count <= p.length


def test_no_boundary_paths_without_huggers(cantor_tree_padded):
    assert boundary_paths(cantor_tree_padded, min_len=1) == []


def test_singleton_chain():
    tree = build_tree(FinitePoints([0]), CubeParams(s=F(1, 5), max_level=6))
    tree.materialize()
    node = tree.root
    while node.level < 6:
        kids = tree.children(node)
        assert len(kids) == 1
        node = kids[0]
    assert boundary_paths(tree) == []


def test_geometric_zero_node_splits_point_and_tail():
    tree = build_tree(GeometricClosure(F(1, 4)), CubeParams(s=F(1, 4), max_level=8))
    node = tree.root
    for _ in range(6):
        kids = tree.children(node)
        holders = [k for k in kids if k.lo <= 0 <= k.hi]
        assert len(holders) == 1
        assert len(kids) >= 2  # a point child split off at every level
        node = holders[0]


def test_split_rates(cantor_tree_tight, cantor_tree_padded):
    for tree in (cantor_tree_tight, cantor_tree_padded):
        est = split_rate(tree)
        assert est.rate_hat == 1
        rates = [r for _, r, _ in est.per_n]
        assert all(b <= a for a, b in zip(rates, rates[1:]))  # nonincreasing

    geo = build_tree(GeometricClosure(F(1, 4)), CubeParams(s=F(1, 4), max_level=8))
    assert split_rate(geo).rate_hat == 1

    pts = build_tree(FinitePoints([0, F(1, 2), 1]), CubeParams(s=F(1, 5), max_level=8))
    est = split_rate(pts)
    assert est.per_n[-1][1] == 0  # deep chains never split


def test_split_rate_matches_enumeration():
    jobs = [
        (GeometricClosure(F(1, 4)), CubeParams(s=F(1, 4), max_level=6)),
        (DoubleExponential(F(1, 2), 2), CubeParams(s=F(1, 8), max_level=6)),
        (FinitePoints([0, F(1, 7), F(1, 2), F(6, 7), 1]), CubeParams(s=F(1, 5), max_level=6)),
    ]
    for desc, params in jobs:
        tree = build_tree(desc, params)
        est = split_rate(tree)
        for n, rate, witness in est.per_n:
            assert brute_force_split_rate(tree, n) == rate
            assert witness.split_count == rate * witness.length


def test_split_rate_witness_records(cantor_tree_tight):
    est = split_rate(cantor_tree_tight)
    for n, rate, witness in est.per_n:
        assert witness.start_level >= n
        assert witness.length >= n
        assert F(witness.split_count, witness.length) == rate


def test_adjacency_relation_bound():
    # engineered equality case: two padded singletons exactly one margin apart
    desc = FinitePoints([0, F(1, 2), F(1, 2) + F(9, 1000), 1])
    tree = build_tree(desc, CubeParams(s=F(1, 5), max_level=4))
    tree.materialize()
    for k in range(1, 5):
        nodes = tree.levels(k)
        marg = tree.margin(k)
        for node in nodes:
            neighbours = [
                other
                for other in nodes
                if other is not node
                and (other.lo - node.hi <= marg if other.lo > node.hi else node.lo - other.hi <= marg)
                and (other.lo > node.hi or other.hi < node.lo)
            ]
            assert len(neighbours) <= 2
            non_sibling = [o for o in neighbours if o.word[:-1] != node.word[:-1]]
            assert len(non_sibling) <= 1


def test_dump_format(cantor):
    tree = build_tree(cantor, CubeParams(s=F(1, 9), c=F(1, 3), C=F(1, 1), max_level=2))
    tree.materialize()
    text = dump_tree(tree)
    lines = text.strip().split("\n")
    assert lines[0] == "0\t-\t0\t1\t1/3\troot"
    assert len(lines) == 1 + 4 + 16
    for line in lines:
        level, word, lo, hi, x_w, cls = line.split("\t")
        assert cls in ("root", "boundary", "interior", "distinguished")
    # deterministic
    assert text == dump_tree(tree)


def test_construction_error_message():
    # only the hull endpoints carry set points, and the length window leaves
    # no room to pad the root far enough for the required margin
    desc = FinitePoints([0, 1])
    with pytest.raises(ConstructionError):
        tree = build_tree(desc, CubeParams(s=F(1, 5), c=F(49, 100), C=F(98, 100), max_level=3))
        tree.materialize()
