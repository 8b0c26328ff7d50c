import random
from fractions import Fraction

import pytest

from minlink.geom import pt, path_bit_size, bit_size
from minlink.model import PolygonalDomain, verify_path
from minlink.exact import exact_minlink, link_distance_map, minlink_0b
from minlink.errors import Unreachable
from minlink.oracle import grid_bfs_minlink
from conftest import square, l_room, square_with_hole, spiral, random_domain

HALF = Fraction(1, 2)


def test_convex_one_link_all_variants():
    d = square()
    for variant in ((2, 2), (1, 2)):
        p = exact_minlink(d, pt(0, 0), pt(1, 1), variant)
        assert p.links == 1
        ok, why = verify_path(d, pt(0, 0), pt(1, 1), p)
        assert ok, why


def test_l_room_two_links():
    d = l_room()
    s, t = pt(2, HALF), pt(HALF, 2)
    for variant in ((2, 2), (1, 2)):
        p = exact_minlink(d, s, t, variant)
        assert p.links == 2, (variant, p)
        ok, why = verify_path(d, s, t, p)
        assert ok, why


def test_vertex_variant_square():
    d = square()
    p = minlink_0b(d, pt(0, 0), pt(1, 1))
    assert p.links == 1


def test_spiral_a1_matches_oracle():
    d = spiral()
    s = pt(6, 0)          # on the bottom edge
    t = pt(9, 3)          # on the inner corridor ceiling
    p = exact_minlink(d, s, t, (1, 2))
    ok, why = verify_path(d, s, t, p)
    assert ok, why
    k, _ = grid_bfs_minlink(d, s, t, (1, 2), 6)
    assert p.links == k


def test_link_distance_map_monotone():
    d = l_room()
    regs = link_distance_map(d, pt(0, 0), (1, 2), 3)
    assert [r.generation for r in regs] == [1, 2, 3]
    for i in range(len(regs) - 1):
        a, b = regs[i].intervals, regs[i + 1].intervals
        for ei, ivs in a.items():
            got = b.get(ei, [])
            for lo, hi in ivs:
                assert any(glo <= lo and hi <= ghi for glo, ghi in got)


def test_unreachable():
    d = square_with_hole()
    # t strictly inside the hole is not in the domain: use disconnected case
    with pytest.raises(Exception):
        exact_minlink(d, pt(0, 0), pt(2, 2), (1, 2), max_links=4)


def test_symmetry_and_oracle_small_random():
    rng = random.Random(42)
    checked = 0
    for _ in range(25):
        d = random_domain(rng, 10)
        edges = d.edges()
        ei = rng.randrange(len(edges))
        fj = rng.randrange(len(edges))
        s = edges[ei].point_at(Fraction(1, 3))
        t = edges[fj].point_at(Fraction(2, 3))
        if s == t:
            continue
        p1 = exact_minlink(d, s, t, (1, 2))
        p2 = exact_minlink(d, t, s, (1, 2))
        assert p1.links == p2.links
        ok, why = verify_path(d, s, t, p1)
        assert ok, why
        ko, _ = grid_bfs_minlink(d, s, t, (1, 2), 4)
        assert p1.links <= ko
        checked += 1
    assert checked >= 20


def test_bit_growth_of_returned_paths():
    # corollary reproduction: k-link witness coordinates stay within
    # k * (2 + 2B) + 16 bits of the inputs
    rng = random.Random(5)
    for _ in range(10):
        d = random_domain(rng, 9, allow_hole=False)
        edges = d.edges()
        s = edges[0].point_at(HALF)
        t = edges[len(edges) // 2].point_at(HALF)
        if s == t:
            continue
        p = exact_minlink(d, s, t, (1, 2))
        b0 = max(max(bit_size(v.x), bit_size(v.y)) for v in d.vertices())
        b0 = max(b0, *(max(bit_size(q.x), bit_size(q.y)) for q in (s, t)))
        B = 4 * b0 + 4
        assert path_bit_size(p) <= p.links * (2 + 2 * B) + 16
