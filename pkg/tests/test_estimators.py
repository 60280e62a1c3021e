import json
import math
from fractions import Fraction as F

import pytest

from assouad import (
    DomainError,
    FinitePoints,
    GeometricClosure,
    InconclusiveError,
    ScaleWindow,
    add_atom,
    classify_tail_ratios,
    discrete_geometric,
    doubling_check,
    measure_dimension,
    set_dimension,
    uniform_measure,
    uniform_perfectness_check,
    window_for_measure,
)
from assouad.fixtures import (
    dexp_atom_at_limit,
    dexp_bounded_tails,
    dexp_slow_tails,
    example_pair,
)
from assouad.measures import CodingTree, WeightedMeasure, sum_measures
from assouad.estimators import set_scan

LOG2_3 = math.log(2) / math.log(3)


def cantor_window(depth=10):
    return ScaleWindow(s=F(1, 3), j_min=1, j_max=depth, ratio_floor=F(3) ** 6)


def test_cantor_set_dimensions(cantor):
    window = cantor_window(10)
    scan = set_scan(cantor, window)
    upper = set_dimension(cantor, "upper", window, scan=scan)
    lower = set_dimension(cantor, "lower", window, scan=scan)
    box = set_dimension(cantor, "box", window)
    assert abs(upper.value - LOG2_3) < 0.03
    assert abs(lower.value - LOG2_3) < 0.03
    assert abs(box.value - LOG2_3) < 0.03
    assert lower.value <= box.value + 0.03 <= upper.value + 0.06


def test_dense_grid_looks_one_dimensional():
    grid = FinitePoints([F(i, 256) for i in range(257)])
    window = ScaleWindow(s=F(1, 2), j_min=1, j_max=7, ratio_floor=F(2) ** 5)
    est = set_dimension(grid, "upper", window)
    assert abs(est.value - 1.0) < 0.1


def test_geometric_set_dimension_decays():
    g = GeometricClosure(F(1, 2))
    est = set_dimension(
        g, "upper", ScaleWindow(s=F(1, 2), j_min=1, j_max=40, ratio_floor=F(2) ** 30)
    )
    assert est.value < 0.2


def test_pair_measure_dimensions():
    mu, nu = example_pair(12)
    window = ScaleWindow(s=F(1, 3), j_min=2, j_max=8, ratio_floor=F(3) ** 5)
    est = measure_dimension(mu, "upper", window)
    assert abs(est.value - abs(math.log(0.4)) / math.log(3)) < 0.05
    sig = sum_measures(mu, nu)
    est_sum = measure_dimension(sig, "upper", window)
    assert abs(est_sum.value - LOG2_3) < 0.05


def test_geometric_measure_dimension():
    dm = discrete_geometric(F(1, 2), F(1, 4))
    est = measure_dimension(dm, "upper")
    assert abs(est.value - 2.0) < 0.05
    est_lower = measure_dimension(dm, "lower")
    assert est_lower.value <= est.value


def test_scale_invariance_is_exact():
    mu = uniform_measure(CodingTree(10))
    tripled = WeightedMeasure(mu.tree, mu.rule, base_mass=F(3), label="3x")
    window = ScaleWindow(s=F(1, 3), j_min=1, j_max=6, ratio_floor=F(3) ** 4)
    a = measure_dimension(mu, "upper", window)
    b = measure_dimension(tripled, "upper", window)
    assert a.value == b.value
    assert a.slope_series == b.slope_series


def test_doubling_and_perfectness_uniform():
    mu = uniform_measure(CodingTree(10))
    window = ScaleWindow(s=F(1, 3), j_min=1, j_max=6, ratio_floor=F(3) ** 4)
    rep = doubling_check(mu, window)
    assert not rep.flagged_infinite
    assert rep.constant < 16
    const, witness = uniform_perfectness_check(mu, F(3), window)
    assert const >= 1.8  # inflating by 3 captures a sibling cylinder


def test_atom_breaks_doubling():
    atom = dexp_atom_at_limit()
    rep = doubling_check(atom, window_for_measure(atom, depth=10))
    assert rep.flagged_infinite


def test_perfectness_drops_near_atom():
    mu = add_atom(uniform_measure(CodingTree(10)), F(0))
    window = ScaleWindow(s=F(1, 3), j_min=1, j_max=6, ratio_floor=F(3) ** 4)
    const, witness = uniform_perfectness_check(mu, F(3), window)
    assert const < 1.1


def test_perfectness_range_violation():
    mu = uniform_measure(CodingTree(8))
    with pytest.raises(DomainError):
        uniform_perfectness_check(
            mu, F(10**9), ScaleWindow(s=F(1, 3), j_min=1, j_max=4, ratio_floor=F(9))
        )


def test_classifier_cases():
    atom = classify_tail_ratios(dexp_atom_at_limit())
    assert atom.case == "atom_at_limit" and math.isinf(atom.verdict)

    bounded = classify_tail_ratios(dexp_bounded_tails())
    assert bounded.case == "tail_ratios_bounded"
    assert bounded.lam == 2 == bounded.big_lam
    assert bounded.verdict == 0.0

    slow = classify_tail_ratios(dexp_slow_tails())
    assert slow.case == "tail_ratios_near_one" and math.isinf(slow.verdict)
    # exact rational ratios (n+1)/n
    assert slow.ratios[0] == F(2, 1) and slow.ratios[3] == F(5, 4)


def test_classifier_diverging_case():
    from assouad import ExplicitMasses, double_exp_measure

    masses = [F(1, 2 ** (n * n)) for n in range(1, 12)]
    dm = double_exp_measure(F(1, 2), 2, ExplicitMasses(masses))
    result = classify_tail_ratios(dm, n_max=9)
    assert result.case == "tail_ratios_diverge" and math.isinf(result.verdict)


def test_classifier_inconclusive_short_range():
    with pytest.raises(InconclusiveError):
        classify_tail_ratios(dexp_bounded_tails(), n_min=1, n_max=3)


def test_classifier_rejects_wrong_support():
    with pytest.raises(DomainError):
        classify_tail_ratios(discrete_geometric(F(1, 2), F(1, 4)))


def test_bounded_tails_have_tiny_dimension():
    est = measure_dimension(dexp_bounded_tails(), "upper")
    assert est.value < 0.1


def test_doubling_agrees_with_infinity_flag():
    # a doubling measure must trigger neither diagnostic; the both-flag side
    # of the equivalence is exercised by the infinite-target acceptance run
    mu = uniform_measure(CodingTree(10))
    window = ScaleWindow(s=F(1, 3), j_min=1, j_max=6, ratio_floor=F(3) ** 4)
    est = measure_dimension(mu, "upper", window)
    dbl = doubling_check(mu, window)
    assert not est.infinite and not dbl.flagged_infinite


def test_thread_determinism():
    mu, _ = example_pair(10)
    reports = []
    for threads in (1, 2, 8):
        window = ScaleWindow(
            s=F(1, 3), j_min=1, j_max=6, ratio_floor=F(3) ** 4, threads=threads
        )
        est = measure_dimension(mu, "upper", window)
        reports.append(json.dumps(est.report(), sort_keys=True))
    assert len(set(reports)) == 1


def test_estimate_report_shape():
    dm = discrete_geometric(F(1, 2), F(1, 4))
    est = measure_dimension(dm, "upper")
    rep = est.report()
    assert set(rep) >= {"kind", "value", "witness", "slope_series", "fit_constant", "window"}
    assert rep["kind"] == "upper"
    assert isinstance(rep["slope_series"], list)
