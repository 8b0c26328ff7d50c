"""Exact rational geometry kernel.

All coordinates are `fractions.Fraction` values, which Python keeps in
lowest terms with a positive denominator, so every value in the system is
a canonical rational.  Predicates are decided with integer cross products
(no rounding anywhere); construction ops return reduced rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class GeometryError(Exception):
    pass


class ParallelLines(GeometryError):
    """Eq.-1 denominator vanished: the two lines have no unique intersection."""


class RayParallel(GeometryError):
    """Projection ray is parallel to the target line."""


class BackwardProjection(GeometryError):
    """The target line is hit behind the ray origin (precondition violation)."""


def rat(v: RationalLike) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True, order=True, slots=True)
class Point2:
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True, slots=True)
class Segment2:
    a: Point2
    b: Point2

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError("degenerate segment")

    def point_at(self, t: Fraction) -> Point2:
        return Point2(self.a.x + t * (self.b.x - self.a.x),
                      self.a.y + t * (self.b.y - self.a.y))


def pt(x: RationalLike, y: RationalLike) -> Point2:
    return Point2(rat(x), rat(y))


def seg(ax, ay, bx, by) -> Segment2:
    return Segment2(pt(ax, ay), pt(bx, by))


# -- predicates ------------------------------------------------------------

def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orientation(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of the signed area of triangle pqr: +1 ccw, -1 cw, 0 collinear."""
    # Integer cross-multiplication is much faster than Fraction arithmetic
    # on this hot path.
    ax, ay, bx, by, cx, cy = p.x, p.y, q.x, q.y, r.x, r.y
    d1n = bx.numerator * ax.denominator - ax.numerator * bx.denominator
    d1d = ax.denominator * bx.denominator
    d2n = cy.numerator * ay.denominator - ay.numerator * cy.denominator
    d2d = ay.denominator * cy.denominator
    d3n = by.numerator * ay.denominator - ay.numerator * by.denominator
    d3d = ay.denominator * by.denominator
    d4n = cx.numerator * ax.denominator - ax.numerator * cx.denominator
    d4d = ax.denominator * cx.denominator
    # sign of d1*d2 - d3*d4 with positive denominators
    return _sign(d1n * d2n * d3d * d4d - d3n * d4n * d1d * d2d)


def collinear(p: Point2, q: Point2, r: Point2) -> bool:
    return orientation(p, q, r) == 0


def on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """True iff p lies on the closed segment ab."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segments_cross(s1: Segment2, s2: Segment2, mode: str = "closed") -> bool:
    """Shared-point test for two segments.

    closed: any shared point counts.  open: a shared point must not be an
    endpoint of either segment (pure interior contact).
    """
    a, b, c, d = s1.a, s1.b, s2.a, s2.b
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 == o2 == o3 == o4 == 0:
        # collinear: overlap iff 1D ranges intersect
        lo1, hi1 = sorted([(a.x, a.y), (b.x, b.y)])
        lo2, hi2 = sorted([(c.x, c.y), (d.x, d.y)])
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return False
        if mode == "closed":
            return True
        # open: the overlap must contain a point that is not an endpoint
        if lo < hi:
            ends = {(a.x, a.y), (b.x, b.y), (c.x, c.y), (d.x, d.y)}
            # the open overlap (lo,hi) has interior points; they are
            # non-endpoints unless the overlap is a sub-view of endpoints,
            # impossible for a positive-length overlap minus <=4 points.
            return True
        return False  # single shared point, necessarily an endpoint of one
    if o1 != o2 and o3 != o4 and not (o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0):
        return True  # proper crossing
    # touching cases: some orientation is zero -> contact at a point
    touch = None
    for p_, u, v in ((c, a, b), (d, a, b)):
        if on_segment(p_, u, v):
            touch = p_
    for p_, u, v in ((a, c, d), (b, c, d)):
        if on_segment(p_, u, v):
            touch = p_
    if touch is None:
        return False
    if mode == "closed":
        return True
    return touch not in (a, b, c, d)


# -- constructions ---------------------------------------------------------

def line_line_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Point2:
    """Intersection of line(a,b) and line(c,d) by the closed formula.

    The numerators/denominator are the expanded 2x2-solve coefficients in
    the (x_d, y_d)-linear form; the result is reduced automatically.
    """
    xa, ya, xb, yb, xc, yc, xd, yd = a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y
    den = (ya - yb) * xd - (xa - xb) * yd + xa * yc - ya * xc - xb * yc + yb * xc
    if den == 0:
        raise ParallelLines(f"lines ({a},{b}) and ({c},{d}) are parallel")
    xn = ((xb * ya - xa * yb + xa * yc - xb * yc) * xd
          + (xb * xc - xa * xc) * yd + xa * yb * xc - ya * xb * xc)
    yn = ((ya * yc - yb * yc) * xd
          + (xb * ya - xc * ya - xa * yb + xc * yb) * yd
          + xa * yb * yc - ya * xb * yc)
    return Point2(xn / den, yn / den)


def project_through(d: Point2, c: Point2, target: Segment2) -> tuple[Point2, bool]:
    """Hit point of the ray from d through c on line(target).

    Returns (point, on_segment).  Raises RayParallel when the ray never
    meets the target line and BackwardProjection when the line is hit on
    the wrong side of d.
    """
    if d == c:
        raise GeometryError("projection direction undefined: d == c")
    try:
        p = line_line_intersection(target.a, target.b, c, d)
    except ParallelLines:
        raise RayParallel(f"ray {d}->{c} parallel to {target}") from None
    # p must be on the c-side of d (allow p between d and c or beyond c)
    dx, dy = c.x - d.x, c.y - d.y
    if dx * (p.x - d.x) + dy * (p.y - d.y) < 0:
        raise BackwardProjection(f"ray {d}->{c} hits {target} behind the origin")
    hits = on_segment(p, target.a, target.b)
    return p, hits


# -- bit-size metric -------------------------------------------------------

def _ceil_log2(n: int) -> int:
    # ceil(log2(n)) for n >= 1
    return (n - 1).bit_length()


def bit_size(v: RationalLike) -> int:
    """sp(v) = ceil(log2(|p|+1)) + ceil(log2(q+1)) for reduced v = p/q.

    Convention: each component contributes at least one bit, so sp(0/1) = 2
    (a representation always spends a bit per component; the sign is kept
    as one extra conceptual bit outside sp).
    """
    v = rat(v)
    p = abs(v.numerator)
    q = v.denominator
    return max(1, _ceil_log2(p + 1)) + max(1, _ceil_log2(q + 1))


def point_bit_size(p) -> int:
    coords = (p.x, p.y, p.z) if hasattr(p, "z") else (p.x, p.y)
    return max(bit_size(c) for c in coords)


def path_bit_size(path_or_points) -> int:
    """Max sp over all coordinates of all bends of a path."""
    bends = getattr(path_or_points, "bends", path_or_points)
    return max(point_bit_size(p) for p in bends)


def coords_bit_size(points: Iterable) -> int:
    return max(point_bit_size(p) for p in points)
