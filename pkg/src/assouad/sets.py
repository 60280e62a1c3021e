"""Symbolic models of compact subsets of [0,1] with exact rational queries.

Every supported set is described by a small amount of rational data and can
answer, in exact arithmetic:

  * ``next_point`` / ``prev_point``   nearest set point on either side of t
  * ``distance_to_set``               exact infimum distance (with certified
                                      bracket when truncation bites)
  * ``covering_count``                N_r(B(x,R) & E) by the greedy sweep,
                                      which is optimal for interval covers
  * ``gap_structure``                 complementary gaps above a length floor
  * ``sample_net``                    a finite delta-net inside the set

Infinite sets are resolved through *pieces*: closed intervals [lo, hi] with
lo, hi in E, jointly covering the set and refinable on demand.  A piece with
lo == hi is an exact point.  Refinement stops at a configurable index or
depth cap; any answer the cap may have affected carries an explicit bracket
instead of a silent approximation.

Balls are open, B(x, R) = (x - R, x + R), everywhere in this package.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

import math

from .errors import DomainError, PrecisionError
from .rational import fast_frac, frac, frac_str

_REFINE_GUARD = 4_000_000  # hard stop for runaway refinement loops


class Piece:
    """Closed interval [lo, hi] with endpoints in E; refinable while an owner
    and handle are attached, terminal otherwise (a point or frozen blob)."""

    __slots__ = ("lo", "hi", "owner", "handle")

    def __init__(self, lo, hi, owner=None, handle=None):
        self.lo = lo
        self.hi = hi
        self.owner = owner
        self.handle = handle

    @property
    def is_point(self):
        return self.lo == self.hi

    def length(self):
        return self.hi - self.lo

    def refine(self):
        if self.owner is None:
            return None
        return self.owner._refine_piece(self)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Piece[{self.lo},{self.hi}]"


class Hit:
    """One-sided nearest-point answer.

    ``point`` is certified: a set point, or the exact one-sided limit when
    ``attained`` is False.  The true answer lies within ``slack`` of ``point``
    toward the query; ``slack == 0`` means exact.
    """

    __slots__ = ("point", "slack", "attained")

    def __init__(self, point, slack=Fraction(0), attained=True):
        self.point = point
        self.slack = slack
        self.attained = attained

    @property
    def exact(self):
        return self.slack == 0

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Hit({self.point}, slack={self.slack}, attained={self.attained})"


@dataclass
class DistanceResult:
    """Certified distance bracket: the infimum lies in [lower, value] and
    ``value`` is realised by a known set point."""

    value: Fraction
    lower: Fraction

    @property
    def exact(self):
        return self.value == self.lower

    @property
    def error_bound(self):
        return self.value - self.lower


@dataclass
class GapList:
    """Complementary open gaps of E within hull(E), ascending by left end."""

    gaps: list
    resolution_floor: Fraction


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CantorIfs:
    """Attractor of finitely many increasing contractions x -> r*x + o on the
    line, with pairwise disjoint images (strong separation)."""

    maps: list  # (ratio, offset) Fraction pairs, sorted by offset

    def __post_init__(self):
        if not self.maps:
            raise DomainError("an iterated function system needs at least one map")
        maps = [(frac(r), frac(o)) for r, o in self.maps]
        for r, _ in maps:
            if not (0 < r < 1):
                raise DomainError(f"contraction ratio {r} outside (0,1)")
        if len(maps) > 1 and sum(r for r, _ in maps) >= 1:
            raise DomainError("contraction ratios must sum to less than 1")
        maps.sort(key=lambda m: m[1])
        self.maps = maps
        fixed = [o / (1 - r) for r, o in maps]
        self._lo = min(fixed)
        self._hi = max(fixed)
        if not (0 <= self._lo and self._hi <= 1):
            raise DomainError("attractor does not fit inside [0,1]")
        images = sorted(self._image(r, o) for r, o in maps)
        for (_, b), (c, _) in zip(images, images[1:]):
            if not b < c:
                raise DomainError("map images overlap; strong separation required")
        self.max_depth = 300
        # integer refinement tables: piece handles are (sn, on, sd, depth)
        # meaning the composed map x -> (sn*x + on)/sd; per-map constants are
        # pre-scaled to a shared per-map denominator L
        hden = math.lcm(self._lo.denominator, self._hi.denominator)
        self._hn = (self._lo.numerator * (hden // self._lo.denominator),
                    self._hi.numerator * (hden // self._hi.denominator))
        self._hden = hden
        tables = []
        for r, o in maps:
            L = math.lcm(r.denominator, o.denominator)
            tables.append((r.numerator * (L // r.denominator),
                           o.numerator * (L // o.denominator), L))
        self._tables = tables

    def _image(self, r, o):
        return (o + r * self._lo, o + r * self._hi)

    def hull(self):
        return (self._lo, self._hi)

    def top_pieces(self):
        return [Piece(self._lo, self._hi, self, (1, 0, 1, 0))]

    def _refine_piece(self, piece):
        sn, on, sd, depth = piece.handle
        if depth >= self.max_depth:
            raise PrecisionError(
                f"iterated-system refinement capped at depth {self.max_depth}",
                achievable=piece.length(),
            )
        out = []
        hn_lo, hn_hi = self._hn
        hden = self._hden
        nd = depth + 1
        for rn, onum, L in self._tables:
            sn2 = sn * rn
            on2 = on * L + sn * onum
            sd2 = sd * L
            base = on2 * hden
            den = sd2 * hden
            out.append(
                Piece(
                    fast_frac(base + sn2 * hn_lo, den),
                    fast_frac(base + sn2 * hn_hi, den),
                    self,
                    (sn2, on2, sd2, nd),
                )
            )
        return out

    # nearest-point queries run on integer pairs: the query is (tn, td), the
    # composed similarity so far is x -> (sn*x + on)/sd, and each map's child
    # interval endpoints live over the fixed denominator L*hden

    def _map_bounds(self):
        bounds = getattr(self, "_bnds", None)
        if bounds is None:
            hn_lo, hn_hi = self._hn
            bounds = []
            for rn, onum, L in self._tables:
                dmap = L * self._hden
                bounds.append((onum * self._hden + rn * hn_lo, onum * self._hden + rn * hn_hi, dmap))
            self._bnds = bounds
        return bounds

    def next_point(self, t, strict=False):
        t = frac(t)
        if t > self._hi or (strict and t == self._hi):
            return None
        return self._next_i(t.numerator, t.denominator, strict, 1, 0, 1, 0)

    def _next_i(self, tn, td, strict, sn, on, sd, depth):
        hden = self._hden
        hn_lo = self._hn[0]
        lhs = tn * hden
        rlo = hn_lo * td
        if lhs < rlo or (not strict and lhs == rlo):
            return Hit(fast_frac(on * hden + sn * hn_lo, sd * hden))
        for (rn, onum, L), (a_num, b_num, dmap) in zip(self._tables, self._map_bounds()):
            lhs = tn * dmap
            rb = b_num * td
            if lhs > rb or (strict and lhs == rb):
                continue
            ra = a_num * td
            if lhs < ra or (not strict and lhs == ra):
                return Hit(fast_frac(on * dmap + sn * a_num, sd * dmap))
            if not strict and lhs == rb:  # right endpoint is a set point
                return Hit(fast_frac(on * dmap + sn * b_num, sd * dmap))
            if depth >= self.max_depth:
                point = fast_frac(on * dmap + sn * b_num, sd * dmap)
                return Hit(point, slack=point - fast_frac(on * td + sn * tn, sd * td))
            inner = self._next_i(
                tn * L - onum * td, td * rn, strict, sn * rn, on * L + sn * onum, sd * L, depth + 1
            )
            if inner is not None:
                return inner
        return None

    def prev_point(self, t, strict=False):
        t = frac(t)
        if t < self._lo or (strict and t == self._lo):
            return None
        return self._prev_i(t.numerator, t.denominator, strict, 1, 0, 1, 0)

    def _prev_i(self, tn, td, strict, sn, on, sd, depth):
        hden = self._hden
        hn_hi = self._hn[1]
        lhs = tn * hden
        rhi = hn_hi * td
        if lhs > rhi or (not strict and lhs == rhi):
            return Hit(fast_frac(on * hden + sn * hn_hi, sd * hden))
        for (rn, onum, L), (a_num, b_num, dmap) in zip(
            reversed(self._tables), reversed(self._map_bounds())
        ):
            lhs = tn * dmap
            ra = a_num * td
            if lhs < ra or (strict and lhs == ra):
                continue
            rb = b_num * td
            if lhs > rb or (not strict and lhs == rb):
                return Hit(fast_frac(on * dmap + sn * b_num, sd * dmap))
            if not strict and lhs == ra:  # left endpoint is a set point
                return Hit(fast_frac(on * dmap + sn * a_num, sd * dmap))
            if depth >= self.max_depth:
                point = fast_frac(on * dmap + sn * a_num, sd * dmap)
                return Hit(point, slack=fast_frac(on * td + sn * tn, sd * td) - point)
            inner = self._prev_i(
                tn * L - onum * td, td * rn, strict, sn * rn, on * L + sn * onum, sd * L, depth + 1
            )
            if inner is not None:
                return inner
        return None

    def to_json(self):
        return {
            "type": "cantor_ifs",
            "maps": [{"ratio": frac_str(r), "offset": frac_str(o)} for r, o in self.maps],
        }


class _DecreasingSequence:
    """Shared machinery for sets {x_n : n >= 1} with x_n strictly decreasing
    to 0, plus the limit point 0 itself.  Subclasses supply ``point(n)`` and
    ``max_index``."""

    def point(self, n):  # pragma: no cover - abstract
        raise NotImplementedError

    def _cap_error(self, t):
        return PrecisionError(
            f"index cap {self.max_index} reached resolving {t}",
            achievable=self.point(self.max_index),
        )

    def hull(self):
        return (Fraction(0), self.point(1))

    def top_pieces(self):
        return [Piece(Fraction(0), self.point(1), self, 1)]

    def _refine_piece(self, piece):
        j = piece.handle
        if j + 1 > self.max_index:
            raise self._cap_error(piece.length())
        nxt = self.point(j + 1)
        return [Piece(Fraction(0), nxt, self, j + 1), Piece(self.point(j), self.point(j))]

    def _first_at_or_below(self, t):
        """Smallest n with x_n <= t, or None when the cap is reached first."""
        if self.point(1) <= t:
            return 1
        # extend the cached range geometrically until it straddles t
        hi = 1
        while self.point(hi) > t:
            if hi >= self.max_index:
                return None
            hi = min(2 * hi, self.max_index)
        lo = hi // 2  # x_lo > t >= x_hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.point(mid) > t:
                lo = mid
            else:
                hi = mid
        return hi

    def next_point(self, t, strict=False):
        top = self.point(1)
        if t > top or (strict and t == top):
            return None
        if t < 0 or (not strict and t <= 0):
            return Hit(Fraction(0))
        if t == 0:  # strict: positive points accumulate at 0, no minimum
            return Hit(Fraction(0), attained=False)
        n = self._first_at_or_below(t)
        if n is None:
            # all computable points exceed t; true answer hides below the cap
            cap_pt = self.point(self.max_index)
            return Hit(cap_pt, slack=cap_pt - t)
        p = self.point(n)
        if p == t and not strict:
            return Hit(p)
        # n == 1 would force t == top, handled above; so n >= 2 here
        return Hit(self.point(n - 1))

    def prev_point(self, t, strict=False):
        if t < 0 or (strict and t <= 0):
            return None
        if t == 0:
            return Hit(Fraction(0))
        top = self.point(1)
        if t > top or (not strict and t == top):
            return Hit(top)
        n = self._first_at_or_below(t)
        if n is None:
            return Hit(Fraction(0), slack=min(t, self.point(self.max_index)))
        p = self.point(n)
        if p == t and strict:
            if n + 1 > self.max_index:
                return Hit(Fraction(0), slack=p)
            return Hit(self.point(n + 1))
        return Hit(p)


@dataclass(eq=False)
class GeometricClosure(_DecreasingSequence):
    """Closure of {q^n : n >= 1}: the geometric points together with 0."""

    q: Fraction
    max_index: int = 700

    def __post_init__(self):
        self.q = frac(self.q)
        if not (0 < self.q < 1):
            raise DomainError(f"q={self.q} outside (0,1)")
        self._pow = [Fraction(1), self.q]

    def point(self, n):
        if n < 1:
            raise DomainError("indices start at 1")
        if n > self.max_index:
            raise PrecisionError(f"geometric index cap {self.max_index} exceeded")
        while len(self._pow) <= n:
            self._pow.append(self._pow[-1] * self.q)
        return self._pow[n]

    def to_json(self):
        return {"type": "geometric", "q": frac_str(self.q)}


@dataclass(eq=False)
class DoubleExponential(_DecreasingSequence):
    """Points alpha^(M^n) for n >= 1 together with their limit 0.

    The index cap keeps the exact representation affordable: x_n has on the
    order of M^n bits, so the default cap 14 (with M=2) already reaches
    scales near 2^-16384.
    """

    alpha: Fraction
    M: int
    max_index: int = 14

    def __post_init__(self):
        self.alpha = frac(self.alpha)
        if not (0 < self.alpha < 1):
            raise DomainError(f"alpha={self.alpha} outside (0,1)")
        if not (isinstance(self.M, int) and self.M > 1):
            raise DomainError("M must be an integer greater than 1")
        self._pts = [None, self.alpha**self.M]

    def point(self, n):
        if n < 1:
            raise DomainError("indices start at 1")
        if n > self.max_index:
            raise PrecisionError(f"double-exponential index cap {self.max_index} exceeded")
        while len(self._pts) <= n:
            self._pts.append(self._pts[-1] ** self.M)
        return self._pts[n]

    def to_json(self):
        return {"type": "double_exp", "alpha": frac_str(self.alpha), "M": self.M}


@dataclass(eq=False)
class FinitePoints:
    """An explicit finite point set."""

    points: list

    def __post_init__(self):
        pts = sorted({frac(p) for p in self.points})
        if not pts:
            raise DomainError("point set must be nonempty")
        if pts[0] < 0 or pts[-1] > 1:
            raise DomainError("points must lie in [0,1]")
        self.points = pts

    def hull(self):
        return (self.points[0], self.points[-1])

    def top_pieces(self):
        return [Piece(p, p) for p in self.points]

    def next_point(self, t, strict=False):
        i = bisect.bisect_right(self.points, t) if strict else bisect.bisect_left(self.points, t)
        if i >= len(self.points):
            return None
        return Hit(self.points[i])

    def prev_point(self, t, strict=False):
        i = bisect.bisect_left(self.points, t) if strict else bisect.bisect_right(self.points, t)
        if i <= 0:
            return None
        return Hit(self.points[i - 1])

    def to_json(self):
        return {"type": "points", "points": [frac_str(p) for p in self.points]}


@dataclass(eq=False)
class FiniteUnion:
    """Union of descriptors with pairwise disjoint hulls, kept sorted."""

    parts: list

    def __post_init__(self):
        if not self.parts:
            raise DomainError("union must have at least one part")
        parts = sorted(self.parts, key=lambda p: p.hull()[0])
        for a, b in zip(parts, parts[1:]):
            if not a.hull()[1] < b.hull()[0]:
                raise DomainError("union parts must have pairwise disjoint hulls")
        self.parts = parts

    def hull(self):
        return (self.parts[0].hull()[0], self.parts[-1].hull()[1])

    def top_pieces(self):
        return [p for part in self.parts for p in part.top_pieces()]

    def next_point(self, t, strict=False):
        for part in self.parts:
            hit = part.next_point(t, strict)
            if hit is not None:
                return hit
        return None

    def prev_point(self, t, strict=False):
        for part in reversed(self.parts):
            hit = part.prev_point(t, strict)
            if hit is not None:
                return hit
        return None

    def to_json(self):
        return {"type": "union", "parts": [p.to_json() for p in self.parts]}


# ---------------------------------------------------------------------------
# shared operations
# ---------------------------------------------------------------------------


def refine_to(pieces, max_len):
    """Refine a sorted piece list until every piece has length <= max_len.

    Relies on ``_refine_piece`` returning its sub-pieces in ascending order,
    so the output stays sorted without a final sort.
    """
    out = []
    work = list(pieces)
    work.reverse()
    budget = _REFINE_GUARD
    while work:
        piece = work.pop()
        lo = piece.lo
        if lo == piece.hi or piece.hi - lo <= max_len:
            out.append(piece)
            continue
        budget -= 1
        if budget < 0:
            raise PrecisionError("piece refinement exceeded the global work guard")
        refined = piece.refine()
        if refined is None:
            raise PrecisionError(
                "piece cannot be refined below requested resolution",
                achievable=piece.length(),
            )
        work.extend(reversed(refined))
    return out


def resolve_pieces(desc, max_len):
    """Cover of E by pieces of length <= max_len, sorted ascending."""
    return refine_to(desc.top_pieces(), max_len)


def distance_to_set(desc, x, tol=None):
    """Exact infimum distance from x to the set, as a certified bracket."""
    x = frac(x)
    below = desc.prev_point(x)
    above = desc.next_point(x)
    cands_hi = []
    cands_lo = []
    if below is not None:
        cands_hi.append(x - below.point)
        cands_lo.append(x - below.point - below.slack)
    if above is not None:
        cands_hi.append(above.point - x)
        cands_lo.append(above.point - x - above.slack)
    if not cands_hi:
        raise DomainError("set unexpectedly empty on both sides")
    value = min(cands_hi)
    lower = max(Fraction(0), min(cands_lo))
    result = DistanceResult(value=value, lower=lower)
    if tol is not None and result.error_bound > tol:
        raise PrecisionError(
            f"distance only resolvable to within {result.error_bound}",
            achievable=result.error_bound,
        )
    return result


def is_member(desc, x, resolution=Fraction(1, 10**30)):
    """Membership at the stated resolution: distance certified below it."""
    d = distance_to_set(desc, frac(x))
    if d.value == 0:
        return True
    if d.lower > 0:
        return False
    return d.value <= resolution


def covering_count(desc, x, R, r, require_member=True):
    """Least number of diameter-<=r sets covering B(x,R) & E (greedy sweep)."""
    x, R, r = frac(x), frac(R), frac(r)
    if R <= 0 or r <= 0:
        raise DomainError("scales R and r must be positive")
    if require_member and not is_member(desc, x):
        raise DomainError(f"x={x} is not a point of the set")
    right = x + R
    count = 0
    hit = desc.next_point(x - R, strict=True)
    while hit is not None and hit.point < right:
        if not hit.exact:
            raise PrecisionError(
                "covering sweep hit an unresolved region", achievable=hit.slack
            )
        count += 1
        hit = desc.next_point(hit.point + r, strict=True)
    return count


def gap_structure(desc, min_gap):
    """All complementary gaps of length >= min_gap inside hull(E)."""
    min_gap = frac(min_gap)
    if min_gap <= 0:
        raise DomainError("min_gap must be positive")
    pieces = resolve_pieces(desc, min_gap / 2)
    gaps = []
    for a, b in zip(pieces, pieces[1:]):
        if b.lo - a.hi >= min_gap:
            gaps.append((a.hi, b.lo))
    return GapList(gaps=gaps, resolution_floor=min_gap / 2)


def sample_net(desc, delta):
    """A finite subset of E with every set point within delta of it."""
    delta = frac(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")
    pieces = resolve_pieces(desc, delta)
    return sorted({p.lo for p in pieces})


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


_TYPES = {
    "cantor_ifs": lambda d: CantorIfs([(frac(m["ratio"]), frac(m["offset"])) for m in d["maps"]]),
    "geometric": lambda d: GeometricClosure(frac(d["q"])),
    "double_exp": lambda d: DoubleExponential(frac(d["alpha"]), int(d["M"])),
    "points": lambda d: FinitePoints([frac(p) for p in d["points"]]),
    "union": lambda d: FiniteUnion([descriptor_from_json(p) for p in d["parts"]]),
}


def descriptor_from_json(data):
    """Build a descriptor from its JSON dict form."""
    if not isinstance(data, dict) or "type" not in data:
        raise DomainError("set descriptor JSON must be an object with a 'type' key")
    kind = data["type"]
    if kind not in _TYPES:
        raise DomainError(f"unknown set descriptor type {kind!r}")
    return _TYPES[kind](data)


def third_cantor():
    """The classical middle-thirds set."""
    return CantorIfs([(Fraction(1, 3), Fraction(0)), (Fraction(1, 3), Fraction(2, 3))])
