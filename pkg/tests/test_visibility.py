import random
from fractions import Fraction

from minlink.geom import pt, Point2, Segment2
from minlink.model import PolygonalDomain, Region, contains_point
from minlink.visibility import (visible, visibility_region, illuminate,
                                illuminate_boundary, weak_visible,
                                k_link_weak_visible, point_lit_intervals,
                                lit_from_interval, BoundaryIllumination,
                                region_contains_point, _cell_contains)
from conftest import square, l_room, square_with_hole, spiral, random_domain

ZERO, ONE = Fraction(0), Fraction(1)


def test_visible_convex_corners():
    d = square()
    assert visible(d, pt(0, 0), pt(1, 1))


def test_visible_blocked_by_hole():
    d = square_with_hole()
    assert not visible(d, pt(0, 2), pt(4, 2))
    assert visible(d, pt(0, 0), pt(4, 0))
    # grazing along the hole boundary is allowed
    assert visible(d, pt(0, 1), pt(4, 1))


def test_visible_l_room():
    d = l_room()
    assert not visible(d, pt(2, 1), pt(Fraction(1, 2), 2))
    assert visible(d, pt(0, 0), pt(2, 1))
    assert visible(d, pt(0, 0), pt(1, 2))


def test_visibility_region_convex_covers_domain():
    d = square()
    r = visibility_region(d, pt(Fraction(1, 2), Fraction(1, 2)))
    assert r.generation == 1
    rng = random.Random(3)
    for _ in range(50):
        q = pt(Fraction(rng.randint(0, 8), 8), Fraction(rng.randint(0, 8), 8))
        assert region_contains_point(r, d, q)


def test_visibility_region_l_room_excludes_occluded():
    d = l_room()
    p = pt(2, 1)  # far corner of the bottom arm
    r = visibility_region(d, p)
    assert region_contains_point(r, d, pt(1, 1))
    assert region_contains_point(r, d, pt(0, 0))
    # the top arm's far end is occluded behind the reflex corner (1,1)
    assert not region_contains_point(r, d, pt(Fraction(1, 2), 2))


def test_visibility_region_matches_predicate_on_random_domains():
    rng = random.Random(99)
    for _ in range(12):
        d = random_domain(rng, 10)
        vs = d.vertices()
        p = vs[rng.randrange(len(vs))]
        r = visibility_region(d, p)
        for _ in range(40):
            q = pt(Fraction(rng.randint(-16, 16), 2), Fraction(rng.randint(-16, 16), 2))
            if contains_point(d, q) == "outside":
                continue
            assert region_contains_point(r, d, q) == visible(d, p, q), (d, p, q)


def test_point_lit_intervals_square():
    d = square()
    lit = point_lit_intervals(d, pt(Fraction(1, 2), Fraction(1, 2)))
    assert set(lit.keys()) == {0, 1, 2, 3}
    for iv in lit.values():
        assert iv == [(ZERO, ONE)]


def test_lit_from_interval_blocked_by_hole():
    d = square_with_hole()
    edges = d.edges()
    # bottom edge fully lit -> the top edge should be lit only near its ends
    got = lit_from_interval(d, 0, (ZERO, ONE), 2)
    assert got
    # the stretch behind the hole is shadowed: the middle of the top edge
    # (param 1/2) sees only through... actually corners see around; check
    # the exact middle point is NOT lit (hole blocks all sights to y=0)
    mid_lit = any(lo < Fraction(1, 2) < hi for lo, hi in got)
    assert not mid_lit


def test_weak_visible_examples():
    d = square()
    assert weak_visible(d, 0, 1)
    assert weak_visible(d, 0, 2)
    assert k_link_weak_visible(d, 0, 2, 1) == weak_visible(d, 0, 2)


def test_illuminate_boundary_convex_one_step():
    d = square()
    w = Region(kind="boundary-1d", generation=1, intervals={0: [(ZERO, ONE)]})
    w2 = illuminate_boundary(d, w)
    assert w2.generation == 2
    for ei in range(4):
        assert w2.intervals.get(ei) == [(ZERO, ONE)]


def test_illuminate_boundary_monotone():
    d = l_room()
    w = Region(kind="boundary-1d", generation=1,
               intervals={0: [(ZERO, Fraction(1, 2))]})
    w2 = illuminate_boundary(d, w)
    for ei, ivs in w.intervals.items():
        got = w2.intervals.get(ei, [])
        for lo, hi in ivs:
            assert any(glo <= lo and hi <= ghi for glo, ghi in got)


def test_illuminate_free_convex_one_step():
    d = square()
    r = Region(kind="free-2d", generation=1,
               cells=[(pt(0, 0), pt(Fraction(1, 4), 0), pt(0, Fraction(1, 4)))])
    r2 = illuminate(d, r)
    assert r2.generation == 2
    rng = random.Random(5)
    for _ in range(30):
        q = pt(Fraction(rng.randint(0, 8), 8), Fraction(rng.randint(0, 8), 8))
        assert region_contains_point(r2, d, q)


def test_illuminate_spiral_steps_match_oracle():
    d = spiral()
    s = pt(6, Fraction(1, 2))
    target = pt(9, Fraction(5, 2))  # far end of the inner corridor
    from minlink.visibility import visibility_region
    r = visibility_region(d, s)
    steps = 1
    while not region_contains_point(r, d, target):
        r = illuminate(d, r)
        steps += 1
        assert steps < 8
    # oracle: BFS over dense boundary samples
    from minlink.oracle import grid_bfs_minlink
    k, _ = grid_bfs_minlink(d, s, target, (2, 2), 4)
    assert steps == k


def test_boundary_engine_matches_single_steps():
    d = l_room()
    seeds = {0: [(ZERO, Fraction(1, 4))]}
    eng = BoundaryIllumination(d, seeds)
    w = Region(kind="boundary-1d", generation=1, intervals=dict(seeds)).canonical()
    for _ in range(3):
        eng.step()
        w = illuminate_boundary(d, w)
        assert eng.region().intervals == w.intervals


def test_weak_visible_symmetric_random():
    rng = random.Random(17)
    for _ in range(6):
        d = random_domain(rng, 8, allow_hole=False)
        ne = len(d.edges())
        for e in range(ne):
            for f in range(e + 1, ne):
                assert weak_visible(d, e, f) == weak_visible(d, f, e)
