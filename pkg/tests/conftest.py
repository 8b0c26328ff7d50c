import random
from fractions import Fraction

import pytest

from minlink.geom import pt, Point2
from minlink.model import PolygonalDomain, validate_domain, ValidationError


def square(size=1):
    return PolygonalDomain.make(
        [pt(0, 0), pt(size, 0), pt(size, size), pt(0, size)])


def l_room():
    # L-shaped room: a 2x2 square with the top-right quadrant removed
    return PolygonalDomain.make(
        [pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)])


def square_with_hole():
    return PolygonalDomain.make(
        [pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)],
        [[pt(1, 1), pt(1, 3), pt(3, 3), pt(3, 1)]])  # cw hole


def spiral():
    # rectangular spiral corridor: bottom -> right -> top -> left -> inner
    return PolygonalDomain.make([
        pt(0, 0), pt(12, 0), pt(12, 12), pt(0, 12), pt(0, 2), pt(10, 2),
        pt(10, 3), pt(1, 3), pt(1, 11), pt(11, 11), pt(11, 1), pt(0, 1),
    ])


def random_domain(rng: random.Random, max_vertices=10, allow_hole=True):
    """Random star-shaped polygon, optionally with one small hole."""
    while True:
        n = rng.randint(4, max_vertices - (4 if allow_hole and max_vertices >= 9
                                            and rng.random() < 0.4 else 0))
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(-8, 8), rng.randint(-8, 8)))
        pts = list(pts)
        cx = Fraction(sum(p[0] for p in pts), len(pts))
        cy = Fraction(sum(p[1] for p in pts), len(pts))

        def ang(p):
            import math
            return math.atan2(p[1] - cy, p[0] - cx)

        pts.sort(key=ang)
        ring = [pt(x, y) for x, y in pts]
        d = PolygonalDomain.make(ring)
        try:
            validate_domain(d)
        except ValidationError:
            continue
        if allow_hole and max_vertices - n >= 4 and rng.random() < 0.5:
            from minlink.model import contains_point
            for _ in range(20):
                hx = rng.randint(-7, 7)
                hy = rng.randint(-7, 7)
                s = Fraction(1, 2)
                hole = [pt(hx, hy), pt(hx, hy + s), pt(hx + s, hy + s), pt(hx + s, hy)]
                dh = PolygonalDomain.make(ring, [hole])
                try:
                    validate_domain(dh)
                    return dh
                except ValidationError:
                    continue
        return d


def random_boundary_point(rng: random.Random, d: PolygonalDomain):
    edges = d.edges()
    ei = rng.randrange(len(edges))
    t = Fraction(rng.randint(1, 6), 7)
    return edges[ei].point_at(t), ei, t
