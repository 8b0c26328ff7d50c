import pytest
from fractions import Fraction

from minlink.geom import pt
from minlink.model import (PolygonalDomain, Terrain, pt3, validate_domain,
                           validate_terrain, contains_point, verify_path,
                           PolyPath, ValidationError, merge_intervals,
                           intervals_intersect)
from conftest import square, l_room, square_with_hole


def test_validate_domain_ok():
    validate_domain(square())
    validate_domain(l_room())
    validate_domain(square_with_hole())


def test_validate_domain_hole_on_boundary():
    d = PolygonalDomain.make(
        [pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)],
        [[pt(0, 1), pt(0, 3), pt(2, 3), pt(2, 1)]])
    with pytest.raises(ValidationError) as e:
        validate_domain(d)
    assert "hole-not-strictly-inside" in str(e.value)


def test_validate_domain_self_crossing():
    d = PolygonalDomain.make([pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)])
    with pytest.raises(ValidationError) as e:
        validate_domain(d)
    assert "not-simple" in str(e.value)


def test_contains_point():
    d = square()
    assert contains_point(d, pt(Fraction(1, 2), Fraction(1, 2))) == "interior"
    assert contains_point(d, pt(0, Fraction(1, 2))) == "boundary"
    assert contains_point(d, pt(2, 2)) == "outside"
    dh = square_with_hole()
    assert contains_point(dh, pt(2, 2)) == "outside"  # inside the hole
    assert contains_point(dh, pt(1, 2)) == "boundary"


def test_validate_terrain_ok_and_bad():
    T = Terrain.make([pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0)], [(0, 1, 2)])
    validate_terrain(T)
    # two stacked triangles over the same xy
    T2 = Terrain.make(
        [pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0),
         pt3(0, 0, 1), pt3(1, 0, 1), pt3(0, 1, 1)],
        [(0, 1, 2), (3, 4, 5)])
    with pytest.raises(ValidationError) as e:
        validate_terrain(T2)
    assert "vertical-line" in str(e.value)
    # overlapping projections
    T3 = Terrain.make(
        [pt3(0, 0, 0), pt3(2, 0, 0), pt3(0, 2, 0), pt3(1, 1, 5), pt3(3, 1, 5)],
        [(0, 1, 2), (1, 4, 3)])
    with pytest.raises(ValidationError) as e:
        validate_terrain(T3)
    assert "not-a-triangulation" in str(e.value)


def test_verify_path_straight_in_convex():
    d = square()
    s, t = pt(0, 0), pt(1, 1)
    ok, why = verify_path(d, s, t, PolyPath((s, t), (2, 2)))
    assert ok, why


def test_verify_path_bend_inside_hole():
    d = square_with_hole()
    s, t = pt(0, 0), pt(4, 0)
    bad = PolyPath((s, pt(2, 2), t), (2, 2))
    ok, why = verify_path(d, s, t, bad)
    assert not ok and why == "bad-bend-location"


def test_verify_path_subdivision_monotone():
    d = l_room()
    s, t = pt(0, 0), pt(2, 1)
    p = PolyPath((s, pt(1, Fraction(1, 2)), t), (2, 2))
    ok, _ = verify_path(d, s, t, p)
    assert ok
    # inserting a collinear midpoint keeps it valid for a=2
    mid = pt(Fraction(1, 2), Fraction(1, 4))
    p2 = PolyPath((s, mid, pt(1, Fraction(1, 2)), t), (2, 2))
    ok, _ = verify_path(d, s, t, p2)
    assert ok


def test_interval_helpers():
    assert merge_intervals([(Fraction(1), Fraction(2)), (Fraction(2), Fraction(3))]) == \
        [(Fraction(1), Fraction(3))]
    assert intervals_intersect([(Fraction(0), Fraction(2))],
                               [(Fraction(1), Fraction(3))]) == \
        [(Fraction(1), Fraction(2))]
