"""Empirical dimension estimation by exhaustive multi-scale ball scans.

The estimators sample covering counts (for sets) or exact ball masses (for
measures) on geometric scale grids rho = const * s^level, anchored at nets of
set points.  Within one scale family the ratio of two sampled scales is an
exact power of s, so the *chord*

    slope = log(quantity_1 / quantity_2) / ((level_2 - level_1) * log(1/s))

is free of the multiplicative constants that pollute absolute log-log slopes.
Upper estimates take the maximum chord, lower estimates the minimum, over the
deepest scale windows; regression is deliberately avoided since the target
quantities are sups and infs, not averages.

Infinity detection: a measure fails to be doubling exactly when slopes blow
up, which at desk scale shows as chord maxima that exceed a cap and keep
increasing with depth.  Short-span chords are admitted into this diagnostic
series (they are the ones that diverge) while the reported finite value only
uses chords whose scale ratio clears ``ratio_floor``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InconclusiveError, PrecisionError
from .measures import CodingTree, DiscreteMeasure
from .rational import flog, frac, frac_repr
from .sets import covering_count, sample_net

UPPER = "upper"
LOWER = "lower"
BOX = "box"


@dataclass
class ScaleWindow:
    """Scale grid and thresholds for one scan.

    Scales are rho = base * s^level for level in [j_min, j_max]; chords used
    for the reported value need scale ratio >= ratio_floor; the value itself
    is the extremal chord whose fine end lies in the last ``tail_windows``
    levels.  ``slope_cap`` with an increasing trend marks the infinity flag.
    """

    s: Fraction
    j_min: int = 1
    j_max: int = 8
    ratio_floor: Fraction = Fraction(50)
    tail_windows: int = 3
    slope_cap: float = 50.0
    net_delta: Fraction = None
    r_max: Fraction = None
    bracket_rel_tol: Fraction = Fraction(1, 16)
    threads: int = 1

    def __post_init__(self):
        self.s = frac(self.s)
        if not (0 < self.s < 1):
            raise DomainError("window scale s must lie in (0,1)")
        if self.j_min < 1:
            raise DomainError("j_min must be at least 1")
        if self.j_max < self.j_min:
            raise DomainError("j_max must not precede j_min")
        self.ratio_floor = frac(self.ratio_floor)
        if self.ratio_floor <= 1:
            raise DomainError("ratio floor must exceed 1")

    @property
    def level_log(self):
        return -flog(self.s)


@dataclass
class DimensionEstimate:
    kind: str
    value: float
    witness: dict
    slope_series: list
    fit_constant: float
    window: ScaleWindow
    skipped: int = 0
    dump_rows: list = field(default_factory=list)

    @property
    def infinite(self):
        return math.isinf(self.value)

    def report(self):
        return {
            "kind": self.kind,
            "value": "inf" if self.infinite else self.value,
            "witness": self.witness,
            "slope_series": [[lvl, v] for lvl, v in self.slope_series],
            "fit_constant": self.fit_constant,
            "window": {
                "s": str(self.window.s),
                "j_min": self.window.j_min,
                "j_max": self.window.j_max,
                "ratio_floor": str(self.window.ratio_floor),
            },
            "skipped": self.skipped,
        }


# ---------------------------------------------------------------------------
# chord reduction shared by all scans
# ---------------------------------------------------------------------------


def _reduce_chords(groups, window, upper, count_like, collect_dump=False):
    """Extremal chords over sample groups.

    ``groups`` is a list of (key, kind, samples) with samples = [(level,
    quantity, log_scale, meta)]; quantities are exact rationals, log_scale is
    ln(scale) as a float.  Two reductions feed the reported value:

    * ``free`` groups (irregular scale grids): the extremal direct chord with
      scale ratio above the floor and fine end among the deepest levels.

    * ``grid`` groups (uniform grids, one level = one factor of 1/s): the
      quantity ratios are first enveloped over all anchors per span class,
      then the envelope's own growth rate is chorded across spans.  The
      second difference cancels the location-dependent companion constants
      that pollute absolute slopes at desk scale.

    The per-level series keeps every span from every group and feeds the
    divergence trend test.
    """
    floor_log = math.log(float(window.ratio_floor)) * (1 - 1e-12)
    deepest = max(
        (s[0] for _, _, samples in groups for s in samples), default=None
    )
    if deepest is None:
        return None, {}, [], [], []
    level_floor = deepest - window.tail_windows + 1

    series = {}
    env = {}
    env_wit = {}
    best_val = None
    best_witness = {}
    pairs_for_fit = []
    dump_rows = []

    for key, kind, samples in groups:
        logs = [
            (lvl, q if isinstance(q, Fraction) else Fraction(q), ls, meta)
            for lvl, q, ls, meta in samples
            if q > 0
        ]
        logs.sort(key=lambda t: -t[2])  # big scales first
        grid = kind == "grid"
        for i in range(len(logs)):
            lvl1, q1, ls1, meta1 = logs[i]
            for j in range(i + 1, len(logs)):
                lvl2, q2, ls2, meta2 = logs[j]
                den = ls1 - ls2
                if den <= 0:
                    continue
                # log of the exact quantity ratio: any common mass factor
                # cancels in rational arithmetic before the float log
                num = flog(q2 / q1) if count_like else flog(q1 / q2)
                slope = num / den
                prev = series.get(lvl2)
                if prev is None or (slope > prev if upper else slope < prev):
                    series[lvl2] = slope
                if grid:
                    span = lvl2 - lvl1
                    prev = env.get(span)
                    if prev is None or (num > prev if upper else num < prev):
                        env[span] = num
                        env_wit[span] = {"at": str(key), "coarse": meta1, "fine": meta2}
                    continue
                if den < floor_log or lvl2 < level_floor:
                    continue
                if collect_dump:
                    dump_rows.append((key, meta1, meta2, math.exp(num), slope))
                pairs_for_fit.append((slope, den, abs(num)))
                if best_val is None or (slope > best_val if upper else slope < best_val):
                    best_val = slope
                    best_witness = {
                        "at": str(key),
                        "coarse": meta1,
                        "fine": meta2,
                        "log_ratio": abs(num),
                    }

    if env:
        L = window.level_log
        span_floor = max(1, math.ceil(floor_log / L))
        spans = sorted(env)
        for a_i in range(len(spans)):
            for b_i in range(a_i + 1, len(spans)):
                m1, m2 = spans[a_i], spans[b_i]
                if m2 - m1 < span_floor:
                    continue
                slope = (env[m2] - env[m1]) / ((m2 - m1) * L)
                if collect_dump:
                    dump_rows.append(
                        (f"envelope[{m1}->{m2}]", env_wit[m1], env_wit[m2],
                         math.exp(env[m2] - env[m1]), slope)
                    )
                pairs_for_fit.append((slope, (m2 - m1) * L, abs(env[m2] - env[m1])))
                if best_val is None or (slope > best_val if upper else slope < best_val):
                    best_val = slope
                    best_witness = {
                        "at": f"envelope spans {m1}->{m2}",
                        "coarse": env_wit[m1],
                        "fine": env_wit[m2],
                        "log_ratio": abs(env[m2] - env[m1]),
                    }

    series_list = sorted(series.items())
    return best_val, best_witness, series_list, pairs_for_fit, dump_rows


def _blocked_maxima(values, blocks=6):
    """Window maxima, blocks anchored at the deep end so the last block is
    always full."""
    size = max(1, len(values) // blocks)
    out = []
    end = len(values)
    while end > 0:
        start = max(0, end - size)
        out.append(max(values[start:end]))
        end = start
    out.reverse()
    return out


def _infinity_flag(series, cap):
    """Slopes exceed the cap and still increase across depth blocks."""
    if len(series) < 3:
        return False
    values = [v for _, v in series]
    if max(values) <= cap:
        return False
    maxima = _blocked_maxima(values)
    if len(maxima) < 3:
        return values[-1] >= values[-2] >= values[-3] and values[-1] > cap
    a, b, c = maxima[-3], maxima[-2], maxima[-1]
    return a < b < c or max(maxima[-3:]) == max(values) > cap


def _fit_constant(pairs, value):
    """Empirical companion constant: max over sampled pairs of
    quantity_ratio / (scale_ratio ** value)."""
    if value is None or math.isinf(value) or not pairs:
        return 1.0
    best = 0.0
    for _slope, log_ratio, log_q in pairs:
        log_c = log_q - value * log_ratio
        best = max(best, math.exp(min(log_c, 700.0)))
    return max(best, 1.0)


def _finish(kind, upper, window, reduced, cap_series=True):
    value, witness, series, pairs, dump_rows = reduced
    if value is None:
        raise PrecisionError("scan produced no admissible scale pairs")
    if upper and cap_series and _infinity_flag(series, window.slope_cap):
        value = math.inf
    fit = _fit_constant(pairs, None if math.isinf(value) else value)
    return DimensionEstimate(
        kind=kind,
        value=value,
        witness=witness,
        slope_series=series,
        fit_constant=fit,
        window=window,
        dump_rows=dump_rows,
    )


def _chunked(items, n):
    return [items[i : i + n] for i in range(0, len(items), n)]


def _parallel_groups(worker, keys, threads):
    """Evaluate worker(key) -> group for each key, deterministically."""
    if threads <= 1 or len(keys) <= 1:
        return [worker(k) for k in keys]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, keys))


# ---------------------------------------------------------------------------
# set dimensions
# ---------------------------------------------------------------------------


def window_for_set(desc, depth=10, s=Fraction(1, 3), **kw):
    return ScaleWindow(s=s, j_min=1, j_max=depth, **kw)


def set_scan(desc, window):
    """One exhaustive covering sweep; returns per-kind envelope groups.

    For each scale pair (R, r) = (width*s^j, width*s^k) the covering count
    N_r(B(x,R) & E) is evaluated exactly at every point of a delta-net; sups
    and infs over centers are recorded together so upper and lower estimates
    share the sweep.
    """
    h_lo, h_hi = desc.hull()
    width = h_hi - h_lo
    s = window.s

    def scan_level(j):
        R = width * s**j
        if window.r_max is not None and R > window.r_max:
            return None
        delta = window.net_delta if window.net_delta is not None else R / 2
        net = sample_net(desc, delta)
        ups = []
        los = []
        for k in range(j, window.j_max + 1):
            r = width * s**k
            env_hi = None
            env_lo = None
            for x in net:
                n = covering_count(desc, x, R, r, require_member=False)
                if env_hi is None or n > env_hi:
                    env_hi = n
                if env_lo is None or n < env_lo:
                    env_lo = n
            meta = {"R": frac_repr(R), "r": frac_repr(r), "net": len(net)}
            ups.append((k, env_hi, flog(r), meta))
            los.append((k, env_lo, flog(r), meta))
        return (f"level-{j}", ups, los)

    js = list(range(window.j_min, window.j_max + 1))
    rows = [g for g in _parallel_groups(scan_level, js, window.threads) if g]
    return {
        UPPER: [(key, "free", ups) for key, ups, _ in rows],
        LOWER: [(key, "free", los) for key, _, los in rows],
    }


def set_dimension(desc, kind, window, scan=None, collect_dump=False):
    """Upper/lower Assouad or box-counting estimate for a set descriptor.

    Envelope covering counts are chorded across the fine-scale levels; pass
    ``scan=set_scan(...)`` to share one sweep between upper and lower.
    """
    if kind not in (UPPER, LOWER, BOX):
        raise DomainError(f"unknown set dimension kind {kind!r}")
    h_lo, h_hi = desc.hull()
    width = h_hi - h_lo
    if width == 0:
        return DimensionEstimate(kind, 0.0, {"at": "degenerate"}, [], 1.0, window)
    upper = kind != LOWER

    if kind == BOX:
        group = []
        for k in range(window.j_min, window.j_max + 1):
            r = width * window.s**k
            group.append((k, _global_cover_count(desc, r), flog(r), {"r": frac_repr(r)}))
        reduced = _reduce_chords([("box", "free", group)], window, True, True, collect_dump)
        return _finish(BOX, True, window, reduced, cap_series=False)

    if scan is None:
        scan = set_scan(desc, window)
    reduced = _reduce_chords(scan[kind], window, upper, True, collect_dump)
    return _finish(kind, upper, window, reduced, cap_series=False)


def _global_cover_count(desc, r):
    count = 0
    hit = desc.next_point(desc.hull()[0])
    while hit is not None:
        if not hit.exact:
            raise PrecisionError("global cover sweep hit an unresolved region")
        count += 1
        hit = desc.next_point(hit.point + r, strict=True)
    return count


# ---------------------------------------------------------------------------
# measure dimensions
# ---------------------------------------------------------------------------


def window_for_measure(measure, depth=None, **kw):
    """Reasonable default window matched to the measure's own scales."""
    if isinstance(measure, DiscreteMeasure):
        from .sets import GeometricClosure

        pts = measure.point_set
        if isinstance(pts, GeometricClosure):
            s = pts.q
            j_max = depth if depth is not None else 24
            kw.setdefault("ratio_floor", (1 / s) ** min(6, max(j_max - 2, 1)))
            return ScaleWindow(s=s, j_min=1, j_max=j_max, **kw)
        # double-exponential point scales: per-index radii, s only nominal;
        # the ratio floor excludes the fixed-ratio witness pairs from the
        # value (they still feed the slope series)
        j_max = depth if depth is not None else min(pts.max_index - 1, 10)
        kw.setdefault("ratio_floor", Fraction(100))
        return ScaleWindow(s=Fraction(1, 2), j_min=1, j_max=j_max, **kw)
    tree = measure.tree
    if isinstance(tree, CodingTree):
        s = Fraction(1, 3)
        j_max = depth if depth is not None else max(tree.depth - 4, 2)
        kw.setdefault("ratio_floor", (1 / s) ** min(6, max(j_max - 2, 1)))
        return ScaleWindow(s=s, j_min=1, j_max=j_max, **kw)
    s = tree.params.s
    j_max = depth if depth is not None else max(tree.params.max_level - 2, 2)
    kw.setdefault("ratio_floor", (1 / s) ** min(6, max(j_max - 2, 1)))
    return ScaleWindow(s=s, j_min=1, j_max=j_max, **kw)


def measure_anchors(measure, extra_words=(), full_level=None, max_anchor_count=400):
    """Scan centers: distinguished points and spine chains for tree measures,
    the point sequence (plus 0) for discrete ones."""
    if isinstance(measure, DiscreteMeasure):
        pts = measure.point_set
        out = [Fraction(0)]
        n = 1
        while n <= pts.max_index and n <= 60:
            if measure.mass_at_index(n) > 0:
                out.append(pts.point(n))
            n += 1
        return out

    tree = measure.tree
    anchors = set()
    if isinstance(tree, CodingTree):
        level = full_level if full_level is not None else min(tree.depth, 6)
        frontier = [tree.root]
        for _ in range(level):
            nxt = []
            for node in frontier:
                nxt.extend(tree.children(node))
            frontier = nxt
            anchors.update(n.lo for n in frontier)
        for spine in ((0,), (1,)):
            node = tree.root
            while node.level < tree.depth:
                kids = tree.children(node)
                node = kids[spine[0]]
                anchors.add(node.lo)
                other = kids[1 - spine[0]]
                anchors.add(other.lo)
        for word in extra_words:
            anchors.add(tree.node_at(word).lo)
        return sorted(anchors)

    # cube tree: distinguished points, with bounded full levels plus chains
    if full_level is None:
        branch = max(2, len(tree.children(tree.root)))
        full_level = 1
        while branch ** (full_level + 1) <= max_anchor_count:
            full_level += 1
        full_level = min(full_level, tree.params.max_level)
    frontier = [tree.root]
    anchors.add(tree.root.x_w)
    for _ in range(full_level):
        nxt = []
        for node in frontier:
            nxt.extend(tree.children(node))
        frontier = nxt
        if len(nxt) > max_anchor_count:  # wide trees: deterministic stride
            step = -(-len(nxt) // max_anchor_count)
            frontier = nxt[::step]
        anchors.update(n.x_w for n in frontier)
    for chain in ("left", "right", "spine"):
        node = tree.root
        while node.level < tree.params.max_level:
            kids = tree.children(node)
            if chain == "left":
                node = kids[0]
            elif chain == "right":
                node = kids[-1]
            else:
                node = tree.distinguished_child(node)
            anchors.add(node.x_w)
    for word in extra_words:
        anchors.add(tree.node_at(word).x_w)
    return sorted(anchors)


def _measure_radii(measure, window):
    """[(family, [(level, rho)])] with rho an exact const * s^level."""
    if isinstance(measure, DiscreteMeasure):
        pts = measure.point_set
        from .sets import GeometricClosure

        if isinstance(pts, GeometricClosure):
            top = pts.q
            fams = []
            for name, const in (("outer", Fraction(2)), ("inner", Fraction(1, 2))):
                fams.append(
                    (name, [(i, const * top * window.s**i) for i in range(window.j_min, window.j_max + 1)], "grid")
                )
            return fams
        # double-exponential: radii anchored to the points themselves; one
        # family, so the (2 x_n, x_n / 2) witness pairs form chords
        levels = []
        for n in range(window.j_min, window.j_max + 1):
            x = pts.point(n)
            levels.append((2 * n, 2 * x))
            levels.append((2 * n + 1, x / 2))
        return [("points", levels, "free")]

    tree = measure.tree
    if isinstance(tree, CodingTree):
        fams = []
        for name, const in (("outer", Fraction(4, 3)), ("inner", Fraction(1, 3))):
            fams.append(
                (name, [(i, const * window.s**i) for i in range(window.j_min, window.j_max + 1)], "grid")
            )
        return fams
    H = tree.scale
    c, C = tree.params.c, tree.params.C
    fams = []
    for name, const in (("outer", 2 * C * H), ("inner", c * H)):
        fams.append(
            (name, [(i, const * window.s**i) for i in range(window.j_min, window.j_max + 1)], "grid")
        )
    return fams


def measure_scan(measure, window, anchors=None, extra_anchor_words=()):
    """Exact ball masses over the window's radius families at every anchor;
    the sample groups feed both upper and lower reductions."""
    centers = list(anchors) if anchors is not None else measure_anchors(
        measure, extra_words=extra_anchor_words
    )
    radii = _measure_radii(measure, window)
    rel_tol = window.bracket_rel_tol

    def scan_center(x):
        out = []
        for fam, levels, kind in radii:
            samples = []
            for lvl, rho in levels:
                try:
                    bracket = measure.ball_mass(x, rho)
                except PrecisionError:
                    continue
                if bracket.hi == 0:
                    continue
                if bracket.width * (1 / rel_tol) > bracket.hi:
                    continue
                samples.append(
                    (lvl, bracket.hi, flog(rho), {"x": frac_repr(x), "rho": frac_repr(rho)})
                )
            if len(samples) >= 2:
                out.append((f"{frac_repr(x)}|{fam}", kind, samples))
        return out

    chunks = _parallel_groups(scan_center, centers, window.threads)
    return [g for chunk in chunks for g in chunk]


def measure_dimension(
    measure,
    kind,
    window=None,
    extra_anchor_words=(),
    anchors=None,
    scan=None,
    collect_dump=False,
):
    """Upper/lower Assouad (regularity) estimate for a measure.

    Chords of log ball mass across the scale levels of each radius family,
    extremal over a net of support anchors.  The infinity flag follows the
    doubling failure mode: chord maxima above the cap, increasing with depth.
    Pass ``scan=measure_scan(...)`` to share samples between kinds.
    """
    if kind not in (UPPER, LOWER):
        raise DomainError(f"unknown measure dimension kind {kind!r}")
    window = window or window_for_measure(measure)
    upper = kind == UPPER
    if scan is None:
        scan = measure_scan(measure, window, anchors, extra_anchor_words)
    if not scan:
        raise PrecisionError("no resolvable ball masses in the requested window")
    reduced = _reduce_chords(scan, window, upper, False, collect_dump)
    return _finish(kind, upper, window, reduced, cap_series=upper)


# ---------------------------------------------------------------------------
# doubling and uniform perfectness diagnostics
# ---------------------------------------------------------------------------


@dataclass
class DoublingReport:
    constant: float
    flagged_infinite: bool
    series: list
    witness: dict

    def report(self):
        return {
            "constant": "inf" if self.flagged_infinite else self.constant,
            "series": [[lvl, v] for lvl, v in self.series],
            "witness": self.witness,
        }


def _growth_flag(series, factor=16.0):
    """The sup keeps growing across depth windows: blocked maxima strictly
    increase at the deep end and the overall growth is substantial."""
    if len(series) < 3:
        return False
    values = [v for _, v in series]
    maxima = _blocked_maxima(values)
    if len(maxima) < 3:
        return False
    growing = maxima[-1] > maxima[-2] > maxima[-3]
    peak_deep = max(maxima[-3:]) == max(values)
    return (growing or peak_deep) and max(values) >= factor * max(maxima[0], 1e-12)


def doubling_check(measure, window=None, anchors=None, growth_factor=16.0):
    """Empirical sup of mu(B(x,R)) / mu(B(x,R/2)); infinite flag when the sup
    keeps growing across depth windows instead of stabilizing."""
    window = window or window_for_measure(measure)
    centers = list(anchors) if anchors is not None else measure_anchors(measure)
    radii = _measure_radii(measure, window)
    octaves = max(1, math.ceil(window.level_log / math.log(2)))

    best = 0.0
    witness = {}
    series = {}
    for x in centers:
        for fam, levels, _kind in radii[:1]:  # the coarse family
            for lvl, rho in levels:
                for t in range(octaves):
                    R = rho / (2**t)
                    try:
                        m_big = measure.ball_mass(x, R)
                        m_small = measure.ball_mass(x, R / 2)
                    except PrecisionError:
                        continue
                    if m_small.hi == 0 or m_big.hi == 0:
                        continue
                    if m_small.lo == 0:
                        continue
                    ratio = float(flog(m_big.hi) - flog(m_small.lo))
                    ratio = math.exp(min(ratio, 700.0))
                    prev = series.get(lvl)
                    if prev is None or ratio > prev:
                        series[lvl] = ratio
                    if ratio > best:
                        best = ratio
                        witness = {"x": frac_repr(x), "R": frac_repr(R), "ratio": ratio}
    series_list = sorted(series.items())
    flagged = _growth_flag(series_list, growth_factor)
    return DoublingReport(
        constant=math.inf if flagged else best,
        flagged_infinite=flagged,
        series=series_list,
        witness=witness,
    )


def uniform_perfectness_check(measure, tau, window=None, anchors=None):
    """Empirical inf of mu(B(x, tau*R)) / mu(B(x,R)) over the admissible
    range R <= diam(supp)/(2 tau); a constant above 1 signals uniform
    perfectness at this resolution."""
    tau = frac(tau)
    if tau <= 1:
        raise DomainError("tau must exceed 1")
    window = window or window_for_measure(measure)
    centers = list(anchors) if anchors is not None else measure_anchors(measure)
    radii = _measure_radii(measure, window)
    if isinstance(measure, DiscreteMeasure):
        diam = measure.point_set.hull()[1]
    elif isinstance(measure.tree, CodingTree):
        diam = Fraction(1)
    else:
        diam = measure.tree.hull[1] - measure.tree.hull[0]
    r_cap = diam / (2 * tau)

    worst = None
    witness = {}
    scanned = 0
    for x in centers:
        for fam, levels, _kind in radii[-1:]:  # the fine family
            for lvl, rho in levels:
                if rho > r_cap:
                    continue
                try:
                    m_big = measure.ball_mass(x, tau * rho)
                    m_small = measure.ball_mass(x, rho)
                except PrecisionError:
                    continue
                if m_small.hi == 0 or m_small.lo == 0:
                    continue
                scanned += 1
                ratio = math.exp(float(flog(m_big.lo) - flog(m_small.hi))) if m_big.lo > 0 else 0.0
                if worst is None or ratio < worst:
                    worst = ratio
                    witness = {"x": frac_repr(x), "R": frac_repr(rho), "ratio": ratio}
    if worst is None:
        raise DomainError("no admissible radii below diam(supp)/(2 tau)")
    return worst, witness


# ---------------------------------------------------------------------------
# tail-ratio classifier for discrete measures on sparse sequences
# ---------------------------------------------------------------------------

ATOM_AT_LIMIT = "atom_at_limit"
RATIOS_NEAR_ONE = "tail_ratios_near_one"
RATIOS_DIVERGE = "tail_ratios_diverge"
RATIOS_BOUNDED = "tail_ratios_bounded"


@dataclass
class TailClassification:
    case: str
    lam: Fraction
    big_lam: Fraction
    verdict: float
    ratios: list

    def report(self):
        return {
            "case": self.case,
            "lambda": str(self.lam) if self.lam is not None else None,
            "Lambda": str(self.big_lam) if self.big_lam is not None else None,
            "verdict": "inf" if math.isinf(self.verdict) else self.verdict,
            "ratios": [str(r) for r in self.ratios],
        }


def classify_tail_ratios(measure, n_min=1, n_max=24, near_one_margin=Fraction(1, 20), escape=Fraction(10)):
    """Sort a discrete measure on a sparsely spaced sequence into the dichotomy
    classes that decide its upper regularity dimension.

    * mass at the limit point 0        -> dimension infinite
    * tail ratios t_n/t_{n+1} -> 1     -> dimension infinite
    * tail ratios diverging            -> dimension infinite
    * tail ratios bounded in (1, inf)  -> dimension zero
    """
    if not isinstance(measure, DiscreteMeasure):
        raise DomainError("the tail classifier applies to discrete measures")
    from .sets import DoubleExponential

    if not isinstance(measure.point_set, DoubleExponential):
        raise DomainError("the classifier presumes double-exponential point spacing")
    if measure.at_zero > 0:
        return TailClassification(ATOM_AT_LIMIT, None, None, math.inf, [])

    ratios = []
    for n in range(n_min, n_max + 1):
        t_n = measure.tail(n)
        t_next = measure.tail(n + 1)
        if t_next == 0:
            break
        ratios.append(t_n / t_next)
    if len(ratios) < 4:
        raise InconclusiveError(
            f"audit range [{n_min},{n_max}] leaves only {len(ratios)} usable ratios"
        )

    nondecreasing = all(b >= a for a, b in zip(ratios, ratios[1:]))
    if nondecreasing and ratios[-1] >= escape * ratios[0]:
        return TailClassification(RATIOS_DIVERGE, min(ratios), max(ratios), math.inf, ratios)
    if ratios[-1] <= 1 + near_one_margin:
        return TailClassification(RATIOS_NEAR_ONE, min(ratios), max(ratios), math.inf, ratios)
    lam, big_lam = min(ratios), max(ratios)
    if lam <= 1:
        raise InconclusiveError(
            "tail ratios touch 1 without settling near it; widen the audit range"
        )
    return TailClassification(RATIOS_BOUNDED, lam, big_lam, 0.0, ratios)
