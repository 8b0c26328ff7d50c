import random
from fractions import Fraction

import pytest

from minlink.geom import (pt, seg, orientation, segments_cross,
                          line_line_intersection, project_through, bit_size,
                          path_bit_size, ParallelLines, RayParallel, Point2)


def test_orientation_examples():
    assert orientation(pt(0, 0), pt(1, 0), pt(0, 1)) == 1
    assert orientation(pt(0, 0), pt(1, 1), pt(2, 2)) == 0
    assert orientation(pt(0, 0), pt(0, 1), pt(1, 0)) == -1


def test_segments_cross_examples():
    assert segments_cross(seg(0, 0, 2, 2), seg(0, 2, 2, 0), "closed")
    assert not segments_cross(seg(0, 0, 1, 0), seg(1, 0, 2, 0), "open")
    assert not segments_cross(seg(0, 0, 1, 0), seg(0, 1, 1, 1), "closed")
    # touching at an interior/endpoint point
    assert segments_cross(seg(0, 0, 2, 0), seg(1, 0, 1, 1), "closed")
    assert not segments_cross(seg(0, 0, 2, 0), seg(1, 0, 1, 1), "open")
    assert segments_cross(seg(0, 0, 2, 0), seg(1, -1, 1, 1), "open")
    # collinear overlap has interior shared points
    assert segments_cross(seg(0, 0, 3, 0), seg(1, 0, 2, 0), "open")


def test_line_line_intersection_examples():
    assert line_line_intersection(pt(0, 0), pt(2, 2), pt(0, 2), pt(2, 0)) == pt(1, 1)
    assert line_line_intersection(pt(0, 0), pt(1, 0), pt(5, -1), pt(5, 1)) == pt(5, 0)
    with pytest.raises(ParallelLines):
        line_line_intersection(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1))


def _cramer(a, b, c, d):
    # independent 2x2 solve: p = a + t (b - a), p = c + u (d - c)
    rx, ry = b.x - a.x, b.y - a.y
    sx, sy = d.x - c.x, d.y - c.y
    den = rx * sy - ry * sx
    t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / den
    return Point2(a.x + t * rx, a.y + t * ry)


def test_intersection_matches_cramer_oracle():
    rng = random.Random(20240817)
    done = 0
    while done < 10**4:
        coords = [Fraction(rng.randint(-40, 40), rng.randint(1, 8))
                  for _ in range(8)]
        a, b = Point2(coords[0], coords[1]), Point2(coords[2], coords[3])
        c, d = Point2(coords[4], coords[5]), Point2(coords[6], coords[7])
        if a == b or c == d:
            continue
        try:
            got = line_line_intersection(a, b, c, d)
        except ParallelLines:
            continue
        assert got == _cramer(a, b, c, d)
        assert got.x.denominator > 0 and got.y.denominator > 0
        done += 1


def test_project_through_examples():
    p, on = project_through(pt(0, 0), pt(1, 1), seg(0, 2, 4, 2))
    assert p == pt(2, 2) and on
    p, on = project_through(pt(0, 0), pt(2, 1), seg(0, 3, 10, 3))
    assert p == pt(6, 3) and on
    with pytest.raises(RayParallel):
        project_through(pt(0, 0), pt(1, 0), seg(0, 1, 5, 1))


def test_project_through_is_collinear_and_on_line():
    rng = random.Random(7)
    for _ in range(500):
        d = pt(rng.randint(-9, 9), rng.randint(-9, 9))
        c = pt(rng.randint(-9, 9), rng.randint(-9, 9))
        ta = pt(rng.randint(-9, 9), 17)
        tb = pt(rng.randint(-9, 9), 19)
        if d == c:
            continue
        try:
            p, _ = project_through(d, c, type(seg(0, 0, 1, 1))(ta, tb))
        except Exception:
            continue
        assert orientation(d, c, p) == 0
        assert orientation(ta, tb, p) == 0


def test_bit_size_examples():
    assert bit_size(Fraction(0, 1)) == 2
    assert bit_size(Fraction(3, 7)) == 5
    assert bit_size(Fraction(-3, 7)) == 5
    assert bit_size(Fraction(1)) == 2


def test_bit_growth_additive_bound():
    # chaining projections from integer seeds grows sp by <= 2 + 2B per step,
    # where B bounds the bit size of the fixed line coefficients
    rng = random.Random(11)
    for _ in range(50):
        d = pt(rng.randint(-7, 7), rng.randint(-7, 7))
        x = d
        bits_before = bit_size(x.x)
        for step in range(6):
            c = pt(rng.randint(-7, 7), rng.randint(-7, 7))
            ta = pt(rng.randint(-7, 7), 23 + step)
            tb = pt(rng.randint(-7, 7), 29 + step)
            if c == x or ta == tb:
                continue
            try:
                x, _ = project_through(x, c, type(seg(0, 0, 1, 1))(ta, tb))
            except Exception:
                continue
        # all fixed inputs here fit in B0 = 4 bits per component; the Eq.-2
        # coefficients then fit in B = 4*B0 + 4 bits
        B = 4 * 4 + 4
        assert bit_size(x.x) <= bits_before + 6 * (2 + 2 * B)


def test_path_bit_size():
    path = [pt(0, 0), pt(Fraction(3, 7), 1), pt(1, 1)]
    assert path_bit_size(path) == 5
