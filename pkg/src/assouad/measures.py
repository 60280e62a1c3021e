"""Measures on cube trees, on the triadic coding tree, and atomic measures.

A weighted measure assigns each sibling group exact rational weights summing
to one; the mass of a node is the product of the weights along its word.
Ball masses are evaluated exactly by descending the tree: nodes whose set
window lies inside the (open) ball contribute their full mass, nodes missing
the ball contribute nothing, and partially covered nodes recurse.  At the
tree's depth limit a partially covered node contributes the bracket
[0, node mass], so every answer is a certified interval; it collapses to a
point whenever the ball boundary falls in resolved territory.

Discrete measures carry masses p(n) on a decreasing point sequence x_n -> 0
(plus an optional atom at 0); tail sums have closed forms, so their ball
masses are exact at every scale the point sequence itself can resolve.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionError, StructureError
from .rational import fast_frac, frac
from .sets import GeometricClosure, DoubleExponential, is_member, third_cantor


# ---------------------------------------------------------------------------
# triadic coding tree (the classical middle-thirds labelling)
# ---------------------------------------------------------------------------


class CodingNode:
    __slots__ = ("word", "lo", "hi")

    def __init__(self, word, lo, hi):
        self.word = word
        self.lo = lo
        self.hi = hi

    @property
    def level(self):
        return len(self.word)

    # the middle-thirds set touches both endpoints of every cylinder
    @property
    def e_lo(self):
        return self.lo

    @property
    def e_hi(self):
        return self.hi

    @property
    def length(self):
        return self.hi - self.lo


class CodingTree:
    """Binary cylinder labelling of the middle-thirds set: word letter 0 is
    the left third, letter 1 the right third."""

    def __init__(self, depth):
        if depth < 1:
            raise DomainError("coding tree depth must be at least 1")
        self.depth = depth
        self.desc = third_cantor()
        self.root = CodingNode((), Fraction(0), Fraction(1))

    @property
    def max_level(self):
        return self.depth

    def children(self, node):
        if node.level >= self.depth:
            return []
        third = (node.hi - node.lo) / 3
        return [
            CodingNode(node.word + (0,), node.lo, node.lo + third),
            CodingNode(node.word + (1,), node.hi - third, node.hi),
        ]

    def node_at(self, word):
        node = self.root
        for j in word:
            node = self.children(node)[j]
        return node


def _tree_depth(tree):
    return tree.depth if isinstance(tree, CodingTree) else tree.params.max_level


# ---------------------------------------------------------------------------
# weighted measures
# ---------------------------------------------------------------------------


@dataclass
class MassBracket:
    lo: Fraction
    hi: Fraction

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def value(self):
        return self.hi

    @property
    def width(self):
        return self.hi - self.lo


class WeightedMeasure:
    """Measure defined by per-sibling-group weights on a tree.

    ``rule(tree, node, children) -> [weight, ...]`` is called once per node
    and must return positive rationals summing to exactly one.  ``base_mass``
    scales everything; ``atoms`` adds point masses on top (unnormalized, the
    ``normalized`` flag records whether total mass is one).
    """

    def __init__(self, tree, rule, base_mass=Fraction(1), atoms=(), label="measure"):
        self.tree = tree
        self.rule = rule
        self.base_mass = frac(base_mass)
        self.atoms = [(frac(p), frac(m)) for p, m in atoms]
        self.label = label
        self._masses = {(): self.base_mass}

    @property
    def total_mass(self):
        return self.base_mass + sum((m for _, m in self.atoms), Fraction(0))

    @property
    def normalized(self):
        return self.total_mass == 1

    def with_atom(self, point, mass=Fraction(1)):
        return WeightedMeasure(
            self.tree,
            self.rule,
            base_mass=self.base_mass,
            atoms=self.atoms + [(frac(point), frac(mass))],
            label=f"{self.label}+atom",
        )

    # -- node masses --------------------------------------------------------

    def node_mass(self, node):
        mass = self._masses.get(node.word)
        if mass is None:
            self._fill_down(node.word)
            mass = self._masses[node.word]
        return mass

    def _fill_down(self, word):
        node = self.tree.root
        for j in word:
            kids = self._expand(node)
            if j >= len(kids):
                raise DomainError(f"word {word} not reachable in this tree")
            node = kids[j]
        return node

    def _expand(self, node):
        """Children of ``node`` with masses cached (weights validated once)."""
        kids = self.tree.children(node)
        if not kids or kids[0].word in self._masses:
            return kids
        weights = self.rule(self.tree, node, kids)
        if len(weights) != len(kids):
            raise DomainError(
                f"rule returned {len(weights)} weights for {len(kids)} children "
                f"at {node.word}"
            )
        total = Fraction(0)
        parent_mass = self._masses[node.word]
        for kid, w in zip(kids, weights):
            if w <= 0:
                raise DomainError(f"nonpositive weight {w} at {kid.word}")
            total += w
            self._masses[kid.word] = parent_mass * w
        if total != 1:
            raise DomainError(f"sibling weights at {node.word} sum to {total}, not 1")
        return kids

    def expand(self, node):
        """Public expansion: children of ``node`` with masses assigned."""
        self.node_mass(node)
        return self._expand(node)

    # -- ball masses ----------------------------------------------------------

    def ball_mass(self, x, R, tol=None):
        """Exact bracket for mu(B(x, R)) with the open-ball convention."""
        x, R = frac(x), frac(R)
        if R <= 0:
            raise DomainError("ball radius must be positive")
        a = x - R
        b = x + R
        atom_mass = sum((m for p, m in self.atoms if a < p < b), Fraction(0))
        lo = hi = atom_mass
        depth = _tree_depth(self.tree)
        stack = [self.tree.root]
        while stack:
            node = stack.pop()
            if node.e_hi <= a or node.e_lo >= b:
                continue
            if a < node.e_lo and node.e_hi < b:
                m = self.node_mass(node)
                lo += m
                hi += m
                continue
            if node.level >= depth:
                hi += self.node_mass(node)
                continue
            self.node_mass(node)  # ensure cached before children
            kids = self._expand(node)
            if len(kids) > 8:
                # bisect the overlap range; children are sorted and disjoint
                scan = getattr(node, "escan", None)
                if scan is None:
                    scan = ([k.e_lo for k in kids], [k.e_hi for k in kids])
                    try:
                        node.escan = scan
                    except AttributeError:  # pragma: no cover
                        pass
                e_los, e_his = scan
                i0 = bisect.bisect_right(e_his, a)
                i1 = bisect.bisect_left(e_los, b)
                stack.extend(kids[i0:i1])
            else:
                stack.extend(kids)
        bracket = MassBracket(lo, hi)
        if tol is not None and bracket.width > tol:
            raise PrecisionError(
                f"ball mass bracket width {bracket.width} exceeds tolerance",
                achievable=bracket.width,
            )
        return bracket


# -- weight rules -----------------------------------------------------------


def uniform_rule(tree, node, kids):
    n = len(kids)
    return [fast_frac(1, n)] * n


def assign_weights(tree, rule, base_mass=Fraction(1), label="measure"):
    """Wrap a weight rule as a measure, validating lazily per sibling group."""
    return WeightedMeasure(tree, rule, base_mass=base_mass, label=label)


def uniform_measure(tree, label="uniform"):
    return assign_weights(tree, uniform_rule, label=label)


def cantor_measure_pair(p, depth):
    """The mirrored pair of skewed measures on the middle-thirds coding tree.

    mu gives the all-zeros cylinder at level n mass p^n and spreads the rest
    binarily: mu(0^n) = p^n, mu(0^n 1 sigma) = p^n (1-p) 2^-|sigma|.
    nu is the same with letters 0 and 1 interchanged.  Requires 0 < p < 1/2.
    """
    p = frac(p)
    if not (0 < p < Fraction(1, 2)):
        raise DomainError(f"the skewed pair needs 0 < p < 1/2, got {p}")
    tree = CodingTree(depth)
    half = Fraction(1, 2)

    def mu_rule(_tree, node, kids):
        if all(letter == 0 for letter in node.word):
            return [p, 1 - p]
        return [half, half]

    def nu_rule(_tree, node, kids):
        if all(letter == 1 for letter in node.word):
            return [1 - p, p]
        return [half, half]

    mu = WeightedMeasure(tree, mu_rule, label=f"skew({p})")
    nu = WeightedMeasure(tree, nu_rule, label=f"skew-mirror({p})")
    return mu, nu


def sum_measures(mu, nu):
    """Nodewise sum of two measures on the same tree (mass adds, total 2)."""
    if mu.tree is not nu.tree:
        raise StructureError("summands must live on the same tree object")
    if mu.atoms or nu.atoms:
        raise StructureError("sum of atomic mixtures is not supported")

    def sum_rule(tree, node, kids):
        denom = mu.node_mass(node) + nu.node_mass(node)
        mu.expand(node)
        nu.expand(node)
        return [(mu.node_mass(k) + nu.node_mass(k)) / denom for k in kids]

    return WeightedMeasure(
        mu.tree,
        sum_rule,
        base_mass=mu.base_mass + nu.base_mass,
        label=f"{mu.label}+{nu.label}",
    )


def add_atom(measure, point, mass=Fraction(1)):
    """The mixture measure + mass * delta_point; the point must lie in the
    support."""
    point = frac(point)
    if isinstance(measure, DiscreteMeasure):
        return measure.with_atom(point, mass)
    if not is_member(measure.tree.desc, point):
        raise DomainError(f"atom location {point} is not in the support")
    return measure.with_atom(point, mass)


# ---------------------------------------------------------------------------
# discrete measures on decreasing sequences
# ---------------------------------------------------------------------------


class GeometricMasses:
    """p(n) = scale * p^n for n >= 1; tails scale * p^N / (1-p), all exact."""

    def __init__(self, p, scale=None):
        self.p = frac(p)
        if not (0 < self.p < 1):
            raise DomainError(f"mass ratio p={self.p} outside (0,1)")
        # default scale normalizes the total mass sum to 1
        self.scale = frac(scale) if scale is not None else (1 - self.p) / self.p

    def mass(self, n):
        return self.scale * self.p**n

    def tail(self, n):
        return self.scale * self.p**n / (1 - self.p)

    def describe(self):
        return {"name": "geometric", "p": str(self.p), "scale": str(self.scale)}


class HarmonicTailMasses:
    """p(n) = scale / (n (n+1)); tails telescope to exactly scale / N."""

    def __init__(self, scale=Fraction(1)):
        self.scale = frac(scale)
        if self.scale <= 0:
            raise DomainError("scale must be positive")

    def mass(self, n):
        return self.scale * fast_frac(1, n * (n + 1))

    def tail(self, n):
        return self.scale * fast_frac(1, n)

    def describe(self):
        return {"name": "harmonic_tail", "scale": str(self.scale)}


class ExplicitMasses:
    """Finite explicit mass list for n = 1..len(values); zero beyond."""

    def __init__(self, values):
        vals = [frac(v) for v in values]
        if any(v < 0 for v in vals):
            raise DomainError("masses must be nonnegative")
        self.values = vals
        self._tails = [Fraction(0)] * (len(vals) + 1)
        for i in range(len(vals) - 1, -1, -1):
            self._tails[i] = self._tails[i + 1] + vals[i]

    def mass(self, n):
        return self.values[n - 1] if 1 <= n <= len(self.values) else Fraction(0)

    def tail(self, n):
        if n <= 1:
            return self._tails[0]
        if n > len(self.values):
            return Fraction(0)
        return self._tails[n - 1]

    def describe(self):
        return {"name": "explicit", "values": [str(v) for v in self.values]}


class DiscreteMeasure:
    """Sum of point masses p(n) at x_n (n >= 1, decreasing to 0), plus an
    optional atom p(0) at the limit point 0 and further explicit atoms."""

    def __init__(self, point_set, profile, at_zero=Fraction(0), atoms=(), label="discrete"):
        if not isinstance(point_set, (GeometricClosure, DoubleExponential)):
            raise DomainError("discrete measures live on decreasing-sequence sets")
        self.point_set = point_set
        self.profile = profile
        self.at_zero = frac(at_zero)
        if self.at_zero < 0:
            raise DomainError("the mass at 0 must be nonnegative")
        self.atoms = [(frac(p), frac(m)) for p, m in atoms]
        self.label = label

    @property
    def total_mass(self):
        return self.profile.tail(1) + self.at_zero + sum(
            (m for _, m in self.atoms), Fraction(0)
        )

    @property
    def normalized(self):
        return self.total_mass == 1

    def point(self, n):
        return self.point_set.point(n)

    def mass_at_index(self, n):
        return self.profile.mass(n)

    def tail(self, n):
        """Sum of p(m) for m >= n (the point-sequence part only)."""
        return self.profile.tail(n)

    def with_atom(self, point, mass=Fraction(1)):
        point = frac(point)
        if not self._in_support(point):
            raise DomainError(f"atom location {point} is not in the support")
        return DiscreteMeasure(
            self.point_set,
            self.profile,
            at_zero=self.at_zero,
            atoms=self.atoms + [(point, frac(mass))],
            label=f"{self.label}+atom",
        )

    def _in_support(self, x):
        if x == 0:
            return True
        hit = self.point_set.next_point(x)
        return hit is not None and hit.exact and hit.point == x

    def ball_mass(self, x, R, tol=None):
        """Exact mu(B(x,R)) via closed-form tails (bracket is always tight)."""
        x, R = frac(x), frac(R)
        if R <= 0:
            raise DomainError("ball radius must be positive")
        a = x - R
        b = x + R
        total = sum((m for p, m in self.atoms if a < p < b), Fraction(0))
        if a < 0 < b:
            total += self.at_zero
        pts = self.point_set
        top = pts.point(1)
        if b <= 0 or a >= top:
            return MassBracket(total, total)
        # indices with x_n < b: all n >= n_b
        if top < b:
            n_b = 1
        else:
            n_b = pts._first_at_or_below(b)
            if n_b is None:
                raise PrecisionError(
                    "ball boundary below the resolvable point range",
                    achievable=pts.point(pts.max_index),
                )
            if pts.point(n_b) == b:  # open ball: x_n = b excluded
                n_b += 1
        # indices with x_n > a: n <= n_a (n_a = infinity when a <= 0)
        if a <= 0:
            total += self.tail(n_b)
            return MassBracket(total, total)
        n_below = pts._first_at_or_below(a)
        if n_below is None:
            raise PrecisionError(
                "ball boundary below the resolvable point range",
                achievable=pts.point(pts.max_index),
            )
        n_a = n_below - 1 if pts.point(n_below) < a else n_below
        # a > 0 and x_{n_a+1} <= a: the open condition x_n > a is settled
        while pts.point(n_a) <= a:
            n_a -= 1
        if n_a < n_b - 1:
            return MassBracket(total, total)
        total += self.tail(n_b) - self.tail(n_a + 1)
        return MassBracket(total, total)


def discrete_geometric(q, p):
    """Masses proportional to p^n at the points q^n (normalized total 1)."""
    q, p = frac(q), frac(p)
    if not (0 < q < 1):
        raise DomainError(f"q={q} outside (0,1)")
    if not (0 < p < 1):
        raise DomainError(f"p={p} outside (0,1)")
    return DiscreteMeasure(
        GeometricClosure(q), GeometricMasses(p), label=f"geom(q={q},p={p})"
    )


def double_exp_measure(alpha, M, profile, at_zero=Fraction(0)):
    """A discrete measure on the double-exponential point set."""
    return DiscreteMeasure(
        DoubleExponential(frac(alpha), M),
        profile,
        at_zero=at_zero,
        label=f"dexp(a={alpha},M={M})",
    )


def ball_mass(measure, x, R, tol=None):
    """Exact ball-mass bracket for any measure kind in this module."""
    return measure.ball_mass(x, R, tol=tol)


def ball_mass_csv(measure, queries):
    """CSV rows ``x,R,mass_lo,mass_hi`` for an iterable of (x, R) queries."""
    lines = ["x,R,mass_lo,mass_hi"]
    for x, R in queries:
        bracket = measure.ball_mass(frac(x), frac(R))
        lines.append(f"{x},{R},{bracket.lo},{bracket.hi}")
    return "\n".join(lines) + "\n"
