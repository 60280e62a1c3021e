"""Weight-assignment schemes that prescribe a measure's regularity dimensions.

Given a cube tree over a compact set whose upper dimension estimate is
positive, ``synthesize_upper`` builds a probability measure whose upper
regularity dimension lands on a requested target D (including an infinite
target via an increasing exponent ladder).  Two strategies exist:

  * boundary strategy: when the tree admits long chains of boundary children,
    a ladder of such chains is selected and their members are assigned the
    small weight a ~ s^D; non-distinguished siblings carry p ~ s^(D-eps) and
    each distinguished child absorbs the residual.

  * splitting strategy: otherwise the limiting split rate of the tree prices
    the path weight, a ~ s^(D/rate); chosen high-split-rate paths carry a on
    their splitting steps and everything else is shared equally.

``synthesize_lower_upper`` alternates slow (s^d) and fast (s^D) bands along
the distinguished-interior spine, pinning the lower and upper dimensions at
once; every weight then sits inside [s^D, s^d].

Targets with irrational weight values are realized through deterministic
rational stand-ins (continued-fraction approximations); all sibling groups
still sum to exactly one in rational arithmetic, and every scheme constraint
is verified on the realized weights, not the ideal ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cubes import (
    BOUNDARY,
    DISTINGUISHED,
    CubeParams,
    build_tree,
    path_record,
    split_rate,
)
from .errors import CalibrationError, ConstructionError, DomainError
from .measures import WeightedMeasure, add_atom
from .rational import approx_pow, frac, frac_str

INFINITE = math.inf


@dataclass
class LadderSpec:
    """How boundary-path rungs are sought: rung j needs length
    max(j, min_rung), start levels separated by max(j, gap_base)."""

    rungs: int = 1
    min_rung: int = 6
    start_level: int = 1
    gap_base: int = 4
    search_budget: int = 5000


@dataclass
class SynthesisManifest:
    """Audit trail of one synthesis run."""

    strategy: str
    s: Fraction
    epsilon: Fraction
    target_upper: object  # Fraction or inf
    target_lower: object = None
    a: object = None  # realized path weight (list for infinite ladders)
    p: object = None  # realized sibling weight
    rate_hat: object = None
    paths: list = field(default_factory=list)
    ladder: list = field(default_factory=list)
    bands: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def path_words(self):
        out = []
        for rec in self.paths:
            out.extend(rec["words"])
        return [tuple(w) for w in out]

    def to_json(self):
        def show(v):
            if v is None:
                return None
            if v is INFINITE or (isinstance(v, float) and math.isinf(v)):
                return "inf"
            if isinstance(v, Fraction):
                return frac_str(v)
            if isinstance(v, list):
                return [show(x) for x in v]
            return v

        return {
            "strategy": self.strategy,
            "s": frac_str(self.s),
            "epsilon": frac_str(self.epsilon) if self.epsilon is not None else None,
            "target_upper": show(self.target_upper),
            "target_lower": show(self.target_lower),
            "a": show(self.a),
            "p": show(self.p),
            "rate_hat": show(self.rate_hat),
            "paths": self.paths,
            "ladder": show(self.ladder),
            "bands": self.bands,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# boundary-ladder search
# ---------------------------------------------------------------------------


def _has_boundary_chain(tree, node, length, budget):
    """Is there a chain of ``length`` boundary-child steps below node?
    Depth-limited with early exit, so spine-like chains cost O(length)."""
    if length <= 0:
        return True
    if node.level >= tree.params.max_level or budget[0] <= 0:
        return False
    budget[0] -= 1
    for kid, cls in zip(tree.children(node), node.child_classes):
        if cls == BOUNDARY and _has_boundary_chain(tree, kid, length - 1, budget):
            return True
    return False


def _boundary_chain_words(tree, node, length, budget):
    """Lexicographically smallest boundary chain of exactly ``length`` steps."""
    words = [node.word]
    cur = node
    remaining = length
    while remaining > 0:
        nxt = None
        for kid, cls in zip(tree.children(cur), cur.child_classes):
            if cls == BOUNDARY and _has_boundary_chain(tree, kid, remaining - 1, budget):
                nxt = kid
                break
        if nxt is None:
            return None
        words.append(nxt.word)
        cur = nxt
        remaining -= 1
    return words


def find_boundary_ladder(tree, spec=LadderSpec()):
    """Boundary paths P_j with length l_j >= max(j, min_rung), start levels
    strictly separated; lexicographically first witnesses.  None when the
    tree cannot supply the requested rungs within the search budget."""
    depth = tree.params.max_level
    rungs = []
    n_next = spec.start_level
    budget = [spec.search_budget]
    for j in range(1, spec.rungs + 1):
        want = max(j, spec.min_rung)
        if n_next + want > depth:
            return None
        found = None
        # depth-first, word order: the first hit is the lexicographic witness
        stack = [tree.root]
        while stack and budget[0] > 0:
            node = stack.pop()
            if node.level == n_next:
                budget[0] -= 1
                if _has_boundary_chain(tree, node, want, budget):
                    found = _boundary_chain_words(tree, node, want, budget)
                    if found is not None:
                        break
                continue
            if node.level < n_next:
                kids = tree.children(node)
                stack.extend(reversed(kids))
        if found is None:
            return None
        rec = path_record(tree, found)
        rungs.append(rec)
        n_next = rec.start_level + rec.length + max(j, spec.gap_base)
    return rungs


def _adjacent_boundary_chain(tree, path_words):
    """Nodes adjacent (within the adjacency distance) to the path members on
    either side that are themselves boundary children; may be empty."""
    out = []
    for word in path_words[1:]:
        node = tree.node_at(word)
        marg = tree.margin(node.level)
        for side in (-1, 1):
            nb = _neighbor(tree, node, side)
            if nb is None:
                continue
            gap = nb.lo - node.hi if side == 1 else node.lo - nb.hi
            if gap <= marg and nb.word[:-1] != word[:-1]:
                parent = tree.node_at(nb.word[:-1])
                if parent.child_classes[nb.word[-1]] == BOUNDARY:
                    out.append(nb.word)
    return out


def _neighbor(tree, node, side):
    """Same-level node immediately left (side=-1) or right (side=+1)."""
    word = list(node.word)
    k = len(word)
    i = k - 1
    while i >= 0:
        parent = tree.node_at(tuple(word[:i]))
        kids = tree.children(parent)
        idx = word[i]
        if 0 <= idx + side < len(kids):
            descend = kids[idx + side]
            for _ in range(k - i - 1):
                step = tree.children(descend)
                if not step:
                    return None
                descend = step[0] if side == -1 else step[-1]
                # moving right: take that subtree's leftmost; and vice versa
            if descend.level == k:
                return descend
            return None
        i -= 1
    return None


# ---------------------------------------------------------------------------
# weight helpers
# ---------------------------------------------------------------------------


def _rational_power(s, exponent):
    """Deterministic rational stand-in for s**exponent (exact if possible)."""
    return approx_pow(s, frac(exponent))


def _audit_max_children(tree, levels=3, extra_nodes=(), node_budget=1500):
    worst = 1
    frontier = [tree.root]
    spent = 0
    for _ in range(levels):
        nxt = []
        for node in frontier:
            kids = tree.children(node)
            worst = max(worst, len(kids))
            nxt.extend(kids)
            spent += 1
            if spent > node_budget:
                nxt = []
                break
        if not nxt:
            break
        frontier = nxt
    for node in extra_nodes:
        kids = tree.children(node) if node.level < tree.params.max_level else []
        worst = max(worst, len(kids))
    return worst


# ---------------------------------------------------------------------------
# upper-dimension synthesis
# ---------------------------------------------------------------------------


def synthesize_upper(
    tree,
    D,
    epsilon=None,
    dim_upper=None,
    ladder_spec=LadderSpec(),
    infinite_ladder=None,
    rate_estimate=None,
    rate_depth=None,
):
    """A probability measure on the tree's set with upper regularity
    dimension steered to D (D = math.inf supported).

    ``dim_upper`` is the empirical upper Assouad estimate of the set; finite
    targets must exceed it.  Returns (measure, manifest).
    """
    s = tree.params.s
    infinite = D is INFINITE or (isinstance(D, float) and math.isinf(D))
    if not infinite:
        D = frac(D)
        if dim_upper is not None and float(D) <= float(dim_upper):
            raise DomainError(
                f"target D={D} must exceed the upper Assouad estimate {dim_upper}"
            )
        if epsilon is None:
            if dim_upper is None:
                raise DomainError("need epsilon or a dimension estimate to derive it")
            epsilon = (D - Fraction(dim_upper).limit_denominator(10**6)) / 2
        epsilon = frac(epsilon)
        if epsilon <= 0:
            raise DomainError("epsilon must be positive")
    else:
        if infinite_ladder is None:
            base = Fraction(dim_upper if dim_upper is not None else 1).limit_denominator(1000)
            infinite_ladder = [base + j for j in range(1, ladder_spec.rungs + 1)]
        infinite_ladder = [frac(v) for v in infinite_ladder]
        epsilon = frac(epsilon) if epsilon is not None else Fraction(1, 2)

    rungs = find_boundary_ladder(tree, ladder_spec)
    if rungs is not None:
        return _upper_boundary(tree, D, epsilon, rungs, infinite_ladder, infinite)
    return _upper_splitting(
        tree, D, epsilon, ladder_spec, infinite_ladder, infinite, rate_estimate, rate_depth
    )


def _upper_boundary(tree, D, epsilon, rungs, ladder_values, infinite):
    s = tree.params.s
    path_words = []
    a_values = []
    overrides = {}

    for j, rec in enumerate(rungs, start=1):
        a_j = _rational_power(s, ladder_values[j - 1]) if infinite else None
        a_values.append(a_j)
        words = [tuple(w) for w in rec.words]
        chain = list(words[1:])  # the boundary children carrying weight a
        chain += _adjacent_boundary_chain(tree, words)
        for w in chain:
            overrides.setdefault(w[:-1], set()).add((w[-1], j))
        path_words.append(words)

    if infinite:
        a = None
        p = None
    else:
        a = _rational_power(s, D)
        p = _rational_power(s, D - epsilon)
        if p <= a:
            p = a + (1 - a) / 10**9  # keep the strict order a < p
        max_n = _audit_max_children(
            tree, extra_nodes=[tree.node_at(w[:-1]) for ws in path_words for w in ws[1:]]
        )
        if p * max_n > 1:
            raise CalibrationError(
                f"sibling weight p={float(p):.3g} exceeds 1/max children ({max_n}); "
                "the child-count bounds require a smaller s or epsilon"
            )

    group_weights = {}
    for parent_word, members in overrides.items():
        parent = tree.node_at(parent_word)
        kids = tree.children(parent)
        classes = parent.child_classes
        n = len(kids)
        weights = [None] * n
        assigned = Fraction(0)
        for idx, j in members:
            w = a if not infinite else a_values[j - 1]
            if classes[idx] == DISTINGUISHED:
                raise ConstructionError(
                    "a path member was the distinguished child; invalid ladder"
                )
            weights[idx] = w
            assigned += w
        free = [i for i in range(n) if weights[i] is None]
        if infinite:
            share = (1 - assigned) / len(free)
            for i in free:
                weights[i] = share
        else:
            dist_i = classes.index(DISTINGUISHED)
            spent = assigned
            for i in free:
                if i != dist_i:
                    weights[i] = p
                    spent += p
            residual = 1 - spent
            if residual < p:
                raise CalibrationError(
                    f"residual weight {float(residual):.3g} at {parent_word} fell "
                    "below p; reduce p (larger epsilon) or use a smaller s"
                )
            weights[dist_i] = residual
        group_weights[parent_word] = weights

    if infinite:

        def default(node, kids):
            n = len(kids)
            return [Fraction(1, n)] * n

    else:

        def default(node, kids):
            n = len(kids)
            if n == 1:
                return [Fraction(1)]
            dist_i = node.child_classes.index(DISTINGUISHED)
            residual = 1 - p * (n - 1)
            if residual < p:
                raise CalibrationError(
                    f"p-scheme infeasible at {node.word}: {n} children need p <= 1/{n}"
                )
            return [residual if i == dist_i else p for i in range(n)]

    def rule(tree_, node, kids):
        w = group_weights.get(node.word)
        if w is not None:
            return w
        return default(node, kids)

    manifest = SynthesisManifest(
        strategy="boundary_infinite" if infinite else "boundary",
        s=s,
        epsilon=epsilon,
        target_upper=INFINITE if infinite else D,
        a=a_values if infinite else a,
        p=p,
        paths=[
            {
                "words": [list(w) for w in words],
                "start_level": len(words[0]),
                "length": len(words) - 1,
            }
            for words in path_words
        ],
        ladder=ladder_values if infinite else [],
        notes=["boundary ladder with adjacent chains weighted alongside"],
    )
    label = "upper-inf" if infinite else f"upper-D={D}"
    return WeightedMeasure(tree, rule, label=label), manifest


def _splits_below(tree, node):
    return node.level < tree.params.max_level and len(tree.children(node)) >= 2


def _pick_splitting_path(tree, start_level, length):
    """Greedy high-split path: descend preferring children that split again,
    leftmost on ties; deterministic."""
    node = tree.root
    steps = start_level + length
    words = [node.word]
    while node.level < steps and node.level < tree.params.max_level:
        kids = tree.children(node)
        chosen = next((kid for kid in kids if _splits_below(tree, kid)), kids[0])
        node = chosen
        words.append(node.word)
    return words[start_level:]


def _upper_splitting(
    tree, D, epsilon, spec, ladder_values, infinite, rate_estimate, rate_depth
):
    s = tree.params.s
    depth = tree.params.max_level
    if rate_estimate is None:
        if rate_depth is None:
            branch = max(2, len(tree.children(tree.root)))
            rate_depth = 2
            while branch ** (rate_depth + 1) <= 60000 and rate_depth < depth:
                rate_depth += 1
        rate = split_rate(tree, max_level=min(rate_depth, depth))
        rate_hat = rate.rate_hat
    else:
        rate_hat = frac(rate_estimate)
    if rate_hat <= 0:
        raise CalibrationError(
            "the limiting split rate is zero at this depth; no splitting-path "
            "scheme can reach the target (the set may support only trivial "
            "upper dimensions)"
        )

    # one rung per target: start levels separated as in the boundary case
    rungs = []
    n_next = spec.start_level
    count = len(ladder_values) if infinite else spec.rungs
    for j in range(1, count + 1):
        want = max(j, spec.min_rung)
        if n_next + want > depth:
            break
        words = _pick_splitting_path(tree, n_next, want)
        if len(words) - 1 < want:
            break
        rungs.append(words)
        n_next = len(words[-1]) + max(j, spec.gap_base)
    if not rungs:
        raise CalibrationError("tree too shallow for any splitting-path rung")

    a_values = []
    overrides = {}
    for j, words in enumerate(rungs, start=1):
        exponent = (ladder_values[j - 1] if infinite else D) / rate_hat
        a_j = _rational_power(s, exponent)
        a_values.append(a_j)
        for w in words[1:]:
            parent = tree.node_at(w[:-1])
            kids = tree.children(parent)
            n = len(kids)
            if n == 1:
                overrides[w[:-1]] = [Fraction(1)]
                continue
            share = (1 - a_j) / (n - 1)
            if share < a_j:
                raise CalibrationError(
                    f"splitting scheme infeasible at {w[:-1]}: 1 - a spread over "
                    f"{n - 1} siblings falls below a"
                )
            overrides[w[:-1]] = [
                a_j if i == w[-1] else share for i in range(n)
            ]

    def rule(tree_, node, kids):
        w = overrides.get(node.word)
        if w is not None:
            return w
        n = len(kids)
        return [Fraction(1, n)] * n

    manifest = SynthesisManifest(
        strategy="splitting_infinite" if infinite else "splitting",
        s=s,
        epsilon=epsilon,
        target_upper=INFINITE if infinite else D,
        a=a_values if infinite else a_values[0],
        rate_hat=rate_hat,
        paths=[
            {
                "words": [list(w) for w in words],
                "start_level": len(words[0]),
                "length": len(words) - 1,
            }
            for words in rungs
        ],
        ladder=ladder_values if infinite else [],
        notes=[f"split-rate estimate {rate_hat} priced the path weight"],
    )
    label = "upper-inf" if infinite else f"upper-D={D}"
    return WeightedMeasure(tree, rule, label=label), manifest


# ---------------------------------------------------------------------------
# joint lower/upper synthesis
# ---------------------------------------------------------------------------


def synthesize_lower_upper(
    tree,
    d,
    D,
    epsilon,
    dim_bounds=None,
    band_start=1,
    band_len=8,
):
    """A measure with lower dimension ~ d and upper dimension ~ D at once.

    Alternating bands along the distinguished-interior spine carry s^d (even
    bands) and s^D (odd bands); boundary intervals off the spine carry
    p = s^(D - eps); every realized weight is kept inside [s^D, s^d].
    """
    d, D, epsilon = frac(d), frac(D), frac(epsilon)
    if not (0 < d < D):
        raise DomainError("need 0 < d < D")
    if dim_bounds is not None:
        dim_lo, dim_hi = dim_bounds
        if not (float(d) < float(dim_lo)):
            raise DomainError(
                f"target d={d} must sit below the lower Assouad estimate {dim_lo}"
            )
        if not (float(D) > float(dim_hi)):
            raise DomainError(
                f"target D={D} must sit above the upper Assouad estimate {dim_hi}"
            )
    s = tree.params.s
    w_d = _rational_power(s, d)
    w_D = _rational_power(s, D)
    w_eps = _rational_power(s, epsilon)
    p = _rational_power(s, D - epsilon)

    checks = {
        "s^-eps - 2 s^d >= 1": 1 / w_eps - 2 * w_d >= 1,
        "s^eps + s^d < 1": w_eps + w_d < 1,
        "s^-(d+eps) >= 3": 1 / (w_d * w_eps) >= 3,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise CalibrationError(
            "subdivision ratio too large for the joint scheme; failed: "
            + "; ".join(failed)
        )

    depth = tree.params.max_level
    spine = [tree.root]
    node = tree.root
    while node.level < depth:
        node = tree.distinguished_child(node)
        spine.append(node)

    def band_weight(level):
        if level < band_start:
            return None
        b = (level - band_start) // band_len
        return w_d if b % 2 == 0 else w_D

    lo_bound, hi_bound = w_D, w_d

    def check(v, where):
        if not (lo_bound <= v <= hi_bound):
            raise CalibrationError(
                f"weight {float(v):.3g} at {where} escapes [s^D, s^d]; "
                "the child-count bounds are too loose at this depth"
            )
        return v

    overrides = {}
    bands = []
    for child in spine[1:]:
        w_band = band_weight(child.level)
        if w_band is None:
            continue
        parent_word = child.word[:-1]
        parent = tree.node_at(parent_word)
        kids = tree.children(parent)
        n = len(kids)
        if n < 2:
            raise CalibrationError(
                f"spine node {parent_word} has a single child; the joint scheme "
                "needs every deep interval to split (use a smaller s)"
            )
        share = (1 - w_band) / (n - 1)
        check(share, parent_word)
        idx = child.word[-1]
        overrides[parent_word] = [w_band if i == idx else share for i in range(n)]
        bands.append(
            {"level": child.level, "weight": "s^d" if w_band is w_d else "s^D"}
        )

    def rule(tree_, node, kids):
        w = overrides.get(node.word)
        if w is not None:
            return w
        n = len(kids)
        if n == 1:
            return [Fraction(1)]
        classes = node.child_classes
        n_bdry = sum(1 for c in classes if c == BOUNDARY)
        if n_bdry and n_bdry < n:
            x_w = (1 - p * n_bdry) / (n - n_bdry)
            check(x_w, node.word)
            return [p if c == BOUNDARY else x_w for c in classes]
        share = Fraction(1, n)
        check(share, node.word)
        return [share] * n

    manifest = SynthesisManifest(
        strategy="alternating_bands",
        s=s,
        epsilon=epsilon,
        target_upper=D,
        target_lower=d,
        a=w_D,
        p=p,
        paths=[
            {
                "words": [list(n.word) for n in spine],
                "start_level": 0,
                "length": len(spine) - 1,
            }
        ],
        bands=bands,
        notes=[
            f"weights confined to [{float(w_D):.3g}, {float(w_d):.3g}]",
            f"band length {band_len} from level {band_start}",
        ],
    )
    return WeightedMeasure(tree, rule, label=f"joint-d={d}-D={D}"), manifest


def floor_lower_dimension(measure, point):
    """Measure + unit atom at a support point: forces the lower regularity
    dimension to zero (and, at a non-isolated point, the upper to infinity)."""
    out = add_atom(measure, point)
    note = {"intent": "target lower dimension 0", "atom": str(point)}
    return out, note


# ---------------------------------------------------------------------------
# subdivision-ratio calibration
# ---------------------------------------------------------------------------


@dataclass
class CalibrationResult:
    s_star: Fraction
    k_star: int
    evidence: list  # per (s, level): observed child-count range vs bounds

    def to_json(self):
        return {
            "s_star": frac_str(self.s_star),
            "k_star": self.k_star,
            "evidence": self.evidence,
        }


DEFAULT_GRID = (
    Fraction(1, 4),
    Fraction(1, 9),
    Fraction(1, 16),
    Fraction(1, 27),
    Fraction(1, 64),
)


def calibrate_s(desc, epsilon, dim_estimates, grid=DEFAULT_GRID, depth=6, node_budget=30000):
    """Smallest grid ratio whose tree satisfies the child-count bounds
    s^-(dim_lo - eps) <= N_w <= s^-(dim_hi + eps) from some level onward."""
    epsilon = float(epsilon)
    dim_lo, dim_hi = (float(dim_estimates[0]), float(dim_estimates[1]))
    passing = []
    evidence = []
    deepest_violation = None
    for s in grid:
        s = frac(s)
        branch_guess = max(2.0, float((1 / s)) ** max(dim_hi, 0.1))
        use_depth = depth
        while use_depth > 2 and branch_guess**use_depth > node_budget:
            use_depth -= 1
        try:
            tree = build_tree(desc, CubeParams(s=s, max_level=use_depth))
            tree.materialize()
        except (ConstructionError, DomainError) as exc:
            evidence.append({"s": frac_str(s), "error": str(exc)})
            continue
        lo_exp = (dim_lo - epsilon) * math.log(1 / float(s))
        hi_exp = (dim_hi + epsilon) * math.log(1 / float(s))
        per_level = {}
        for node in tree.walk(max_level=use_depth - 1):
            n = len(tree.children(node))
            lvl = node.level
            cur = per_level.get(lvl)
            if cur is None:
                per_level[lvl] = [n, n]
            else:
                cur[0] = min(cur[0], n)
                cur[1] = max(cur[1], n)
        k_star = None
        for k in sorted(per_level, reverse=True):
            n_min, n_max = per_level[k]
            ok_lo = math.log(n_min) >= lo_exp - 1e-12
            ok_hi = math.log(n_max) <= hi_exp + 1e-12
            if ok_lo and ok_hi:
                k_star = k
            else:
                if deepest_violation is None or k > deepest_violation[1]:
                    deepest_violation = (s, k, n_min, n_max)
                break
        rows = [
            {
                "level": k,
                "n_min": per_level[k][0],
                "n_max": per_level[k][1],
                "lo_bound": math.exp(lo_exp),
                "hi_bound": math.exp(hi_exp),
            }
            for k in sorted(per_level)
        ]
        evidence.append({"s": frac_str(s), "levels": rows, "k_star": k_star})
        if k_star is not None:
            passing.append((s, k_star))
    if not passing:
        detail = ""
        if deepest_violation is not None:
            s_v, k_v, n_lo, n_hi = deepest_violation
            detail = f"; deepest violation at s={s_v}, level {k_v} (counts {n_lo}..{n_hi})"
        raise CalibrationError("no grid ratio satisfies the child-count bounds" + detail)
    s_star, k_star = min(passing, key=lambda t: t[0])
    return CalibrationResult(s_star=s_star, k_star=k_star, evidence=evidence)
