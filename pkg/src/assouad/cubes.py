"""Nested interval-cube hierarchies over a compact set E in [0,1].

A tree of closed intervals I_w, one generation per level k, satisfying the
three structural properties (checked exactly, in rational arithmetic):

  (i)   2*c*H*s^k <= len(I_w) <= 2*C*H*s^k          (H = hull width of E)
  (ii)  I_w holds a distinguished set point x_w with
        d(x_w, complement of I_w) >= c*H*s^k
  (iii) children are pairwise disjoint subintervals of I_w whose union
        carries exactly the parent's portion of E

plus the derived classification: a child within c*H*s^(k+1) of the parent's
complement is a *boundary* child (at most two, one per side), anything else
is *interior*, and the interior child containing x_w is *distinguished*.

Construction walks each node's E-pieces, groups them across gaps wider than
a multiple of the child margin, and places one child per group: a tight hull
when the group's own points supply the margin, a padded hull otherwise, and
recursive largest-gap bisection when a group is too wide for one child.
Children expand lazily, so deep trees cost only what is actually visited.

Levels are cut at exact rational positions; intervals never share endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConstructionError, DomainError
from .rational import fast_frac, frac, frac_str
from .sets import refine_to, resolve_pieces

BOUNDARY = "boundary"
INTERIOR = "interior"
DISTINGUISHED = "distinguished"  # the interior child holding the parent's x_w

_GROUP_GAP_FACTOR = Fraction(3)  # grouping threshold, in child margins
_GAP_SHARE = Fraction(2, 5)  # how far a cut may reach into its gap
_TARGET_FACTOR = Fraction(13, 10)  # preferred single-chain child length, in s^(k+1)*H


@dataclass
class CubeParams:
    """Subdivision parameters: ratio s in (0, 1/3), length constants c, C."""

    s: Fraction
    c: Fraction = Fraction(3, 8)
    C: Fraction = Fraction(9, 8)
    max_level: int = 8

    def __post_init__(self):
        self.s = frac(self.s)
        self.c = frac(self.c)
        self.C = frac(self.C)
        if not (0 < self.s < Fraction(1, 3)):
            raise DomainError(f"s={self.s} must satisfy 0 < s < 1/3 exactly")
        if not (0 < self.c < self.C):
            raise DomainError("need 0 < c < C")
        if self.C < 2 * self.c:
            raise DomainError("need C >= 2c for the cutting scheme to pack lengths")
        if self.max_level < 1:
            raise DomainError("max_level must be at least 1")


class CubeNode:
    __slots__ = (
        "word",
        "level",
        "lo",
        "hi",
        "x_w",
        "pieces",
        "children",
        "child_classes",
        "escan",
    )

    def __init__(self, word, level, lo, hi, x_w, pieces):
        self.word = word
        self.level = level
        self.lo = lo
        self.hi = hi
        self.x_w = x_w
        self.pieces = pieces  # E-pieces of this node, resolution <= c*H*s^level
        self.children = None  # lazy
        self.child_classes = None
        self.escan = None  # cached child window bounds for ball descents

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def e_lo(self):
        return self.pieces[0].lo

    @property
    def e_hi(self):
        return self.pieces[-1].hi

    @property
    def is_point(self):
        return len(self.pieces) == 1 and self.pieces[0].is_point

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"CubeNode({'.'.join(map(str, self.word)) or 'root'} [{self.lo},{self.hi}])"


@dataclass
class PathRecord:
    """A nested chain of cubes; length counts steps, not intervals."""

    words: list
    start_level: int
    length: int
    split_count: int
    is_boundary_path: bool

    @property
    def start_word(self):
        return self.words[0]

    @property
    def end_word(self):
        return self.words[-1]


@dataclass
class SplitRateEstimate:
    """Best achievable split fraction among deep, long paths.

    per_n holds (n, rate_n, witness) with rate_n the exact maximum of
    split_count/length over paths starting at level >= n with length >= n;
    rate_hat repeats the deepest rate_n.
    """

    per_n: list
    rate_hat: Fraction
    depth_used: int


@dataclass
class CheckFailure:
    prop: str
    word: tuple
    message: str


@dataclass
class VerifyReport:
    passed: bool
    nodes_checked: int
    checks_run: int
    failures: list = field(default_factory=list)

    def first_failure(self):
        return self.failures[0] if self.failures else None


class CubeTree:
    """Lazily expanded cube hierarchy for one set descriptor."""

    def __init__(self, desc, params):
        self.desc = desc
        self.params = params
        hull = desc.hull()
        self.hull = hull
        width = hull[1] - hull[0]
        self.scale = width if width > 0 else Fraction(1)
        self._consts = {}
        self.root = _build_root(desc, params, hull, self.scale)

    # -- level geometry -----------------------------------------------------

    def consts(self, level):
        """(unit, margin, min_len, max_len) at a level, cached."""
        cached = self._consts.get(level)
        if cached is None:
            unit = self.params.s**level * self.scale
            cached = (
                unit,
                self.params.c * unit,
                2 * self.params.c * unit,
                2 * self.params.C * unit,
            )
            self._consts[level] = cached
        return cached

    def unit(self, level):
        return self.consts(level)[0]

    def margin(self, level):
        return self.consts(level)[1]

    def min_len(self, level):
        return self.consts(level)[2]

    def max_len(self, level):
        return self.consts(level)[3]

    # -- expansion ----------------------------------------------------------

    def children(self, node):
        """Materialize (once) and return the node's children."""
        if node.level >= self.params.max_level:
            return []
        if node.children is None:
            kids, classes = _cut(self, node)
            node.child_classes = classes
            node.children = kids
        return node.children

    def materialize(self, level=None):
        level = self.params.max_level if level is None else level
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.level < level:
                stack.extend(self.children(node))

    def walk(self, max_level=None, expand=True):
        """Depth-first pre-order generator, children left to right."""
        limit = self.params.max_level if max_level is None else max_level
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if node.level < limit:
                kids = self.children(node) if expand else (node.children or [])
                stack.extend(reversed(kids))

    def node_at(self, word):
        node = self.root
        for j in word:
            kids = self.children(node)
            if j >= len(kids):
                raise DomainError(f"word {word} leaves the tree at {node.word}")
            node = kids[j]
        return node

    def class_of(self, node):
        """Child classification of a node within its parent ('root' for the root)."""
        if not node.word:
            return "root"
        parent = self.node_at(node.word[:-1])
        return parent.child_classes[node.word[-1]]

    def distinguished_child(self, node):
        kids = self.children(node)
        for kid, cls in zip(kids, node.child_classes):
            if cls == DISTINGUISHED:
                return kid
        raise ConstructionError(f"node {node.word} has no distinguished child")

    def levels(self, k):
        """All nodes at level k (materializes down to k)."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.level == k:
                out.append(node)
            elif node.level < k:
                stack.extend(self.children(node))
        out.sort(key=lambda n: n.lo)
        return out


def build_tree(desc, params):
    """Construct the hierarchy for ``desc``; root only, children lazy."""
    return CubeTree(desc, params)


# ---------------------------------------------------------------------------
# construction internals
# ---------------------------------------------------------------------------


def _certified_margin(lo, hi, pieces):
    """Best (margin, point) over certified set points in [lo, hi]; candidates
    are piece endpoints, scanned left to right so ties keep the leftmost."""
    best = None
    best_pt = None
    for piece in pieces:
        for p in (piece.lo, piece.hi) if not piece.is_point else (piece.lo,):
            m = min(p - lo, hi - p)
            if best is None or m > best:
                best = m
                best_pt = p
    return best, best_pt


class _Frame:
    """Exact scaled-integer coordinates for one cut or one audit.

    All rationals in play are mapped to integers over a shared denominator
    (a factor 10 clears the /2 and 2/5 constants used by the cutter), so the
    combinatorial work runs on plain integers; only the handful of final
    child bounds are converted back to Fractions.
    """

    __slots__ = ("den", "_mult")

    def __init__(self, *fracs_iterables):
        dens = set()
        for it in fracs_iterables:
            for v in it:
                dens.add(v.denominator)
        self.den = 10 * math.lcm(*dens)
        self._mult = {}

    def up(self, v):
        d = v.denominator
        m = self._mult.get(d)
        if m is None:
            m = self._mult[d] = self.den // d
        return v.numerator * m

    def down(self, n):
        return fast_frac(n, self.den)


def _build_root(desc, params, hull, scale):
    c, C = params.c, params.C
    marg0 = c * scale
    h_lo, h_hi = hull
    width = h_hi - h_lo
    pieces = resolve_pieces(desc, c * params.s * scale)

    candidates = []
    if width > 0:
        if 2 * c * scale <= width <= 2 * C * scale:
            if not pieces[0].is_point and not pieces[-1].is_point:
                candidates.append((h_lo, h_hi))
        pad = min(c * scale, (2 * C * scale - width) / 2)
        if pad > 0:
            candidates.append((h_lo - pad, h_hi + pad))
    else:
        length = min(2 * C * scale, max(2 * c * scale, scale))
        candidates.append((h_lo - length / 2, h_lo + length / 2))

    for lo, hi in candidates:
        if not (2 * c * scale <= hi - lo <= 2 * C * scale):
            continue
        margin, point = _certified_margin(lo, hi, pieces)
        if margin is not None and margin >= marg0:
            return CubeNode((), 0, lo, hi, point, pieces)
    raise ConstructionError(
        "no level-0 interval with a certified distinguished point; "
        "the set may be too thin near its hull for these c, C"
    )


def _cut(tree, node):
    """Create the children of ``node`` (at node.level + 1)."""
    k1 = node.level + 1
    unit_f, marg_f, m_f, mx_f = tree.consts(k1)

    resolution = marg_f
    for attempt in range(4):
        pieces = refine_to(node.pieces, resolution)
        node.pieces = pieces
        try:
            return _cut_at(tree, node, pieces, k1, unit_f, marg_f, m_f, mx_f)
        except _NeedFiner:
            resolution = resolution / 3
    raise ConstructionError(
        f"node {node.word}: no admissible cut even after refining pieces; "
        "retry with a smaller s"
    )


def _cut_at(tree, node, pieces, k1, unit_f, marg_f, m_f, mx_f):
    frame = _Frame(
        (node.lo, node.hi, node.x_w, unit_f, marg_f, m_f, mx_f),
        (p.lo for p in pieces),
        (p.hi for p in pieces),
    )
    up = frame.up
    los = [up(p.lo) for p in pieces]
    his = [up(p.hi) for p in pieces]
    n_lo, n_hi = up(node.lo), up(node.hi)
    unit, marg, m_len, mx_len = up(unit_f), up(marg_f), up(m_f), up(mx_f)

    if len(pieces) == 1 and los[0] == his[0]:
        specs = [_chain_child(node, los[0], n_lo, n_hi, m_len, mx_len, marg, unit)]
    else:
        gap_min = _GROUP_GAP_FACTOR * marg
        groups = [0]
        for i in range(1, len(pieces)):
            if los[i] - his[i - 1] >= gap_min:
                groups.append(i)
        groups.append(len(pieces))
        specs = []
        ctx = (los, his, m_len, mx_len, marg)
        for g in range(len(groups) - 1):
            i0, i1 = groups[g], groups[g + 1] - 1
            if g == 0:
                lcap = n_lo
            else:
                gap = los[i0] - his[i0 - 1]
                lcap = los[i0] - (gap * 2) // 5
            if g == len(groups) - 2:
                rcap = n_hi
            else:
                gap = los[i1 + 1] - his[i1]
                rcap = his[i1] + (gap * 2) // 5
            specs.extend(_place(ctx, i0, i1, lcap, rcap))
        specs.sort()

    down = frame.down
    kids = [
        CubeNode(node.word + (i,), k1, down(lo), down(hi), down(x), pieces[i0 : i1 + 1])
        for i, (lo, hi, x, i0, i1) in enumerate(specs)
    ]
    classes = _classify_scaled(node, specs, n_lo, n_hi, marg, up(node.x_w))
    return kids, classes


def _chain_child(node, point, n_lo, n_hi, m_len, mx_len, marg, unit):
    """Terminal chain step: one interval centred on the remaining point."""
    length = min(mx_len, max(m_len, (unit * 13) // 10))
    lo = point - length // 2
    hi = lo + length
    if lo < n_lo:
        lo, hi = n_lo, n_lo + length
    elif hi > n_hi:
        lo, hi = n_hi - length, n_hi
    if min(point - lo, hi - point) < marg:
        raise ConstructionError(
            f"terminal point of {node.word} too close to the interval edge; "
            "retry with a smaller s"
        )
    return (lo, hi, point, 0, 0)


class _NeedFiner(Exception):
    """Internal: placement wants the piece list refined further."""


def _endpoint_margin(ctx, i0, i1, lo, hi):
    """Best (margin, point) over piece endpoints of group [i0..i1] in [lo,hi],
    leftmost on ties."""
    los, his = ctx[0], ctx[1]
    best = -1
    best_pt = None
    for i in range(i0, i1 + 1):
        a = los[i]
        m = min(a - lo, hi - a)
        if m > best:
            best = m
            best_pt = a
        b = his[i]
        if b != a:
            m = min(b - lo, hi - b)
            if m > best:
                best = m
                best_pt = b
    return best, best_pt


def _place(ctx, i0, i1, lcap, rcap):
    """Child specs (lo, hi, x_w, i0, i1) covering the piece group [i0..i1]."""
    los, his, m_len, mx_len, marg = ctx
    span_lo = los[i0]
    span_hi = his[i1]
    span = span_hi - span_lo

    if span <= mx_len:
        # tight hull: only when the group's outermost structure is refinable,
        # so descendants at a hugged edge keep finding interior points
        if m_len <= span and los[i0] != his[i0] and los[i1] != his[i1]:
            margin, point = _endpoint_margin(ctx, i0, i1, span_lo, span_hi)
            if margin >= marg:
                return [(span_lo, span_hi, point, i0, i1)]
        cand = _padded(ctx, i0, i1, span_lo, span_hi, span, lcap, rcap)
        if cand is not None:
            return [cand]

    # too wide, or no margin witness: bisect at the widest internal gap
    best_i = None
    best_gap = -1
    for i in range(i0, i1):
        gap = los[i + 1] - his[i]
        if gap > best_gap:
            best_gap = gap
            best_i = i
    if best_i is None:
        if los[i0] != his[i0]:  # unresolved blob: finer pieces may help
            raise _NeedFiner
        raise ConstructionError(
            "a set cluster admits no child interval with a certified "
            "distinguished point; retry with a smaller s"
        )
    share = (best_gap * 2) // 5
    out = _place(ctx, i0, best_i, lcap, his[best_i] + share)
    out += _place(ctx, best_i + 1, i1, los[best_i + 1] - share, rcap)
    return out


def _padded(ctx, i0, i1, span_lo, span_hi, span, lcap, rcap):
    los, his, m_len, mx_len, marg = ctx
    if span > mx_len:
        return None
    room_l = span_lo - lcap
    room_r = rcap - span_hi
    pref = max(marg, (m_len - span) // 2)
    pad_l = min(pref, room_l)
    pad_r = min(pref, room_r)
    deficit = m_len - (span + pad_l + pad_r)
    if deficit > 0:
        grow = min(deficit, room_l - pad_l)
        pad_l += grow
        deficit -= grow
        grow = min(deficit, room_r - pad_r)
        pad_r += grow
        deficit -= grow
        if deficit > 0:
            return None
    excess = (span + pad_l + pad_r) - mx_len
    if excess > 0:
        trim = min(excess, max(0, pad_l - marg))
        pad_l -= trim
        excess -= trim
        trim = min(excess, max(0, pad_r - marg))
        pad_r -= trim
        excess -= trim
        if excess > 0:  # still too long: shave pads below the margin target
            trim = min(excess, pad_l)
            pad_l -= trim
            excess -= trim
            pad_r -= excess
    lo = span_lo - pad_l
    hi = span_hi + pad_r
    margin, point = _endpoint_margin(ctx, i0, i1, lo, hi)
    if point is None or margin < marg:
        return None
    return (lo, hi, point, i0, i1)


def _classify_scaled(node, specs, n_lo, n_hi, marg, x_w):
    classes = []
    host = None
    for i, (lo, hi, _pt, _a, _b) in enumerate(specs):
        d = min(lo - n_lo, n_hi - hi)
        classes.append(BOUNDARY if d < marg else INTERIOR)
        if host is None and lo <= x_w <= hi:
            host = i
    if host is None:
        raise ConstructionError(
            f"distinguished point of {node.word} not covered by any child"
        )
    if classes[host] == BOUNDARY:
        raise ConstructionError(
            f"distinguished point of {node.word} landed in a boundary child; "
            "retry with a smaller s"
        )
    classes[host] = DISTINGUISHED
    if classes.count(BOUNDARY) > 2:
        raise ConstructionError(f"node {node.word} has more than two boundary children")
    return classes


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

_MEMBERSHIP_SPOT_LEVEL = 3


def verify_properties(tree, max_level=None, check_membership="spot"):
    """Exact rational audit of the structural properties over the built tree.

    ``check_membership`` controls re-verifying x_w as a set point through an
    independent nearest-point query: "spot" (shallow levels only, default),
    "full", or "off".  Geometry is always checked exactly at every node.
    """
    params = tree.params
    limit = params.max_level if max_level is None else max_level
    failures = []
    nodes = 0
    checks = 0

    def fail(prop, word, message):
        if len(failures) < 50:
            failures.append(CheckFailure(prop, word, message))

    for node in tree.walk(max_level=limit):
        nodes += 1
        k = node.level
        _, marg_f, min_f, max_f = tree.consts(k)
        kids = tree.children(node) if k < limit else []
        classes = node.child_classes if kids else []
        child_marg_f = tree.margin(k + 1) if kids else None

        frame = _Frame(
            (node.lo, node.hi, node.x_w, marg_f, min_f, max_f),
            (child_marg_f,) if kids else (),
            (kid.lo for kid in kids),
            (kid.hi for kid in kids),
            (p.lo for p in node.pieces),
            (p.hi for p in node.pieces),
        )
        up = frame.up
        n_lo, n_hi, x_w = up(node.lo), up(node.hi), up(node.x_w)
        marg, lo_bound, hi_bound = up(marg_f), up(min_f), up(max_f)

        checks += 1
        if not (lo_bound <= n_hi - n_lo <= hi_bound):
            fail("i", node.word, f"length {node.length} outside [{min_f},{max_f}]")

        checks += 1
        if not (n_lo <= x_w <= n_hi):
            fail("ii", node.word, "distinguished point outside its interval")
        elif min(x_w - n_lo, n_hi - x_w) < marg:
            fail("ii", node.word, f"distinguished margin below {marg_f}")

        if check_membership == "full" or (
            check_membership == "spot" and k <= _MEMBERSHIP_SPOT_LEVEL
        ):
            checks += 1
            hit = tree.desc.next_point(node.x_w)
            if hit is None or not (hit.exact and hit.point == node.x_w):
                fail("ii", node.word, "distinguished point not certified in the set")

        if k >= limit:
            continue
        checks += 1
        if not kids:
            fail("iii", node.word, "no children")
            continue

        klo = [up(kid.lo) for kid in kids]
        khi = [up(kid.hi) for kid in kids]
        prev_hi = None
        for i in range(len(kids)):
            if klo[i] < n_lo or khi[i] > n_hi:
                fail("iii", node.word, f"child {kids[i].word} not inside parent")
            if prev_hi is not None and not (klo[i] > prev_hi):
                fail("iii", node.word, f"children at {kids[i].word} overlap")
            prev_hi = khi[i]

        checks += 1
        j = 0
        for piece in node.pieces:
            p_lo, p_hi = up(piece.lo), up(piece.hi)
            while j < len(kids) and khi[j] < p_hi:
                j += 1
            if j >= len(kids) or not (klo[j] <= p_lo and p_hi <= khi[j]):
                fail("iii", node.word, f"set piece [{piece.lo},{piece.hi}] not covered")
                break

        checks += 1
        child_marg = up(child_marg_f)
        n_boundary = 0
        n_interior = 0
        host = None
        for i in range(len(kids)):
            d = min(klo[i] - n_lo, n_hi - khi[i])
            derived = BOUNDARY if d < child_marg else INTERIOR
            cls = classes[i]
            if derived == BOUNDARY:
                n_boundary += 1
                if cls != BOUNDARY:
                    fail("class", node.word, f"child {kids[i].word} misclassified as {cls}")
            else:
                n_interior += 1
                if cls == BOUNDARY:
                    fail("class", node.word, f"child {kids[i].word} misclassified as boundary")
            if host is None and klo[i] <= x_w <= khi[i]:
                host = i
        if n_boundary > 2:
            fail("class", node.word, "more than two boundary children")
        if n_interior < 1:
            fail("class", node.word, "no interior child")
        if host is None:
            fail("class", node.word, "distinguished point not covered by children")
        else:
            if classes[host] != DISTINGUISHED:
                fail("class", node.word, "child holding x_w not marked distinguished")
            if min(klo[host] - n_lo, n_hi - khi[host]) < child_marg:
                fail("class", node.word, "distinguished point sits in a boundary child")

    return VerifyReport(
        passed=not failures, nodes_checked=nodes, checks_run=checks, failures=failures
    )


# ---------------------------------------------------------------------------
# paths and split rates
# ---------------------------------------------------------------------------


def boundary_paths(tree, min_len=1, max_level=None):
    """All maximal chains whose non-initial members are boundary children,
    of length >= min_len, sorted by start level then word."""
    limit = tree.params.max_level if max_level is None else max_level
    out = []

    def descend(node, chain):
        extended = False
        if node.level < limit:
            kids = tree.children(node)
            for kid, cls in zip(kids, node.child_classes):
                if cls == BOUNDARY:
                    descend(kid, chain + [kid])
                    extended = True
        if not extended and len(chain) >= 2:
            length = len(chain) - 1
            if length >= min_len:
                out.append(
                    PathRecord(
                        words=[n.word for n in chain],
                        start_level=chain[0].level,
                        length=length,
                        split_count=_splits_along(tree, chain),
                        is_boundary_path=True,
                    )
                )

    # a maximal path starts at any node that is not itself a boundary child
    stack = [(tree.root, "root")]
    while stack:
        node, cls = stack.pop()
        if cls != BOUNDARY:
            descend(node, [node])
        if node.level < limit:
            kids = tree.children(node)
            stack.extend(zip(kids, node.child_classes))
    out.sort(key=lambda p: (p.start_level, p.words[0]))
    return out


def _splits_along(tree, chain):
    count = 0
    for node in chain[:-1]:
        if len(tree.children(node)) >= 2:
            count += 1
    return count


def path_record(tree, words):
    """PathRecord for an explicit nested word chain."""
    nodes = [tree.node_at(w) for w in words]
    for a, b in zip(nodes, nodes[1:]):
        if b.word[:-1] != a.word:
            raise DomainError("words do not form a parent-child chain")
    boundary = all(tree.class_of(n) == BOUNDARY for n in nodes[1:])
    return PathRecord(
        words=list(words),
        start_level=nodes[0].level,
        length=len(nodes) - 1,
        split_count=_splits_along(tree, nodes),
        is_boundary_path=boundary,
    )


def split_rate(tree, max_level=None):
    """Exact best split fractions over deep, long paths (dynamic programming).

    rate_n maximizes split_count/length over paths with start level >= n and
    n <= length <= depth - start_level; computed bottom-up, no enumeration.
    """
    depth = tree.params.max_level if max_level is None else max_level
    if depth < 2:
        raise DomainError("split-rate estimation needs depth >= 2")
    tree.materialize(depth)

    # children precede parents in reversed pre-order, so one sweep fills the
    # table: table[w][L] = max splits over length-L downward paths from w
    table = {}
    order = list(tree.walk(max_level=depth, expand=False))
    for node in reversed(order):
        kids = (node.children or []) if node.level < depth else []
        if not kids:
            table[node.word] = [0]
            continue
        here = 1 if len(kids) >= 2 else 0
        child_tabs = [table[k.word] for k in kids]
        horizon = max(len(t) for t in child_tabs)
        best = [0] * (horizon + 1)
        for length in range(1, horizon + 1):
            cand = max(t[length - 1] for t in child_tabs if length - 1 < len(t))
            best[length] = here + cand
        table[node.word] = best

    per_n = []
    n_max = depth // 2
    if n_max < 1:
        raise DomainError(f"depth {depth} too small; need at least 2")
    for n in range(1, n_max + 1):
        best_rate = None
        best_at = None
        for node in order:
            if node.level < n:
                continue
            tab = table[node.word]
            top = min(len(tab) - 1, depth - node.level)
            for length in range(n, top + 1):
                rate = Fraction(tab[length], length)
                if best_rate is None or rate > best_rate:
                    best_rate = rate
                    best_at = (node, length)
        if best_rate is None:
            raise DomainError(
                f"no admissible path for n={n}; build the tree to depth >= {2 * n}"
            )
        witness = _backtrack(tree, table, best_at[0], best_at[1], depth)
        per_n.append((n, best_rate, witness))
    return SplitRateEstimate(per_n=per_n, rate_hat=per_n[-1][1], depth_used=depth)


def _backtrack(tree, table, node, length, depth):
    chain = [node]
    remaining = length
    cur = node
    while remaining > 0:
        target = table[cur.word][remaining] - (1 if len(cur.children or []) >= 2 else 0)
        for kid in cur.children or []:
            tab = table[kid.word]
            if remaining - 1 < len(tab) and tab[remaining - 1] == target:
                chain.append(kid)
                cur = kid
                break
        else:  # pragma: no cover - table is consistent by construction
            raise AssertionError("split-rate backtrack failed")
        remaining -= 1
    return path_record(tree, [n.word for n in chain])


def brute_force_split_rate(tree, n, max_level=None):
    """Oracle: enumerate every admissible path explicitly (small trees only)."""
    depth = tree.params.max_level if max_level is None else max_level
    tree.materialize(depth)
    best = None

    def rec(node, splits, length):
        nonlocal best
        if length >= n:
            rate = Fraction(splits, length)
            if best is None or rate > best:
                best = rate
        kids = (node.children or []) if node.level < depth else []
        for kid in kids:
            rec(kid, splits + (1 if len(kids) >= 2 else 0), length + 1)

    for start in tree.walk(max_level=depth, expand=False):
        if start.level >= n:
            rec(start, 0, 0)
    return best


# ---------------------------------------------------------------------------
# dump format
# ---------------------------------------------------------------------------


def dump_tree(tree, max_level=None):
    """Line dump: level, word, endpoints, distinguished point, class.

    One node per line, depth first, children left to right; rationals as
    num/den; the root's word renders as '-'.
    """
    lines = []
    for node in tree.walk(max_level=max_level):
        word = ".".join(map(str, node.word)) if node.word else "-"
        lines.append(
            "\t".join(
                (
                    str(node.level),
                    word,
                    frac_str(node.lo),
                    frac_str(node.hi),
                    frac_str(node.x_w),
                    tree.class_of(node),
                )
            )
        )
    return "\n".join(lines) + "\n"
