"""Exact minimum-link solvers by staged illumination.

Variants: bends anywhere (a=2), bends on the boundary with links through
the open domain (a=1, the diffuse-reflection reading), and bends on
vertices (a=0).  On terrains, a=1 with links on the surface is solved by
unfolding maximal planar facets into the 2D engine.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import Unreachable, ResourceLimit
from .geom import Point2, Segment2, orientation, on_segment
from .model import (PolygonalDomain, Terrain, Region, PolyPath, Point3,
                    contains_point, merge_intervals, intervals_intersect,
                    Interval)
from .visibility import (visible, visibility_region, illuminate,
                         BoundaryIllumination, point_lit_intervals,
                         region_contains_point, _cell_contains, clip_convex,
                         _param_on)

ZERO = Fraction(0)
ONE = Fraction(1)


def _boundary_slots(d: PolygonalDomain, p: Point2) -> list[tuple[int, Fraction]]:
    """(edge index, parameter) pairs locating p on the boundary."""
    out = []
    for ei, e in enumerate(d.edges()):
        if on_segment(p, e.a, e.b):
            t = _param_on(e, p)
            if t is not None:
                out.append((ei, t))
    return out


def _lit_contains(lit: dict[int, list[Interval]],
                  slots: list[tuple[int, Fraction]]) -> bool:
    for ei, t in slots:
        for lo, hi in lit.get(ei, []):
            if lo <= t <= hi:
                return True
    return False


def _pick_boundary_point(d: PolygonalDomain,
                         choices: dict[int, list[Interval]]) -> Optional[Point2]:
    """Deterministic witness: lowest edge index, then smallest parameter."""
    edges = d.edges()
    for ei in sorted(choices):
        ivs = choices[ei]
        if ivs:
            return edges[ei].point_at(ivs[0][0])
    return None


def _backtrack_boundary(d: PolygonalDomain, regions: list[dict[int, list[Interval]]],
                        s: Point2, t: Point2) -> list[Point2]:
    """Recover one witness bend per generation, from t down to s."""
    bends = [t]
    cur = t
    for i in range(len(regions) - 1, 0, -1):
        fan = point_lit_intervals(d, cur)
        meet = {}
        for ei, ivs in regions[i - 1].items():
            got = intervals_intersect(sorted(ivs), fan.get(ei, []))
            if got:
                meet[ei] = got
        choice = _pick_boundary_point(d, meet)
        if choice is None:
            raise AssertionError("backtracking lost the witness chain")
        bends.append(choice)
        cur = choice
    if not visible(d, s, cur):
        raise AssertionError("witness does not close at s")
    bends.append(s)
    bends.reverse()
    out = [bends[0]]
    for b in bends[1:]:
        if b != out[-1]:
            out.append(b)
    return out


def _exact_minlink_boundary(d: PolygonalDomain, s: Point2, t: Point2,
                            max_links: int) -> PolyPath:
    s_slots = _boundary_slots(d, s)
    t_slots = _boundary_slots(d, t)
    if not s_slots or not t_slots:
        raise ValueError("a=1 requires s and t on the boundary")
    if visible(d, s, t):
        return PolyPath((s, t), (1, 2))
    seeds = {}
    for ei, tt in s_slots:
        seeds.setdefault(ei, []).append((tt, tt))
    eng = BoundaryIllumination(d, seeds)
    regions = [dict(eng.lit)]
    for _ in range(max_links - 1):
        if not eng.step():
            raise Unreachable(max_links)
        regions.append({k: list(v) for k, v in eng.lit.items()})
        if _lit_contains(eng.lit, t_slots):
            bends = _backtrack_boundary(d, regions, s, t)
            return PolyPath(tuple(bends), (1, 2))
    raise Unreachable(max_links)


def _exact_minlink_free(d: PolygonalDomain, s: Point2, t: Point2,
                        max_links: int, cell_cap: int = 10 ** 6) -> PolyPath:
    r = visibility_region(d, s)
    regions = [r]
    if region_contains_point(r, d, t):
        return PolyPath((s, t), (2, 2))
    for _ in range(max_links - 1):
        r = illuminate(d, r, cell_cap)
        regions.append(r)
        if region_contains_point(r, d, t):
            bends = _backtrack_free(d, regions, s, t)
            return PolyPath(tuple(bends), (2, 2))
    raise Unreachable(max_links)


def _lex_min_vertex(cells) -> Optional[Point2]:
    best = None
    for c in cells:
        for p in c:
            if best is None or (p.x, p.y) < (best.x, best.y):
                best = p
    return best


def _backtrack_free(d: PolygonalDomain, regions, s: Point2, t: Point2) -> list[Point2]:
    bends = [t]
    cur = t
    for i in range(len(regions) - 1, 0, -1):
        fan = visibility_region(d, cur)
        meets = []
        for tri in fan.cells:
            for cell in regions[i - 1].cells:
                got = clip_convex(tri, cell)
                if len(got) >= 1:
                    meets.append(got)
        choice = _lex_min_vertex(meets)
        if choice is None:
            raise AssertionError("backtracking lost the witness chain")
        bends.append(choice)
        cur = choice
    if not visible(d, s, cur):
        raise AssertionError("witness does not close at s")
    bends.append(s)
    bends.reverse()
    out = [bends[0]]
    for b in bends[1:]:
        if b != out[-1]:
            out.append(b)
    return out


def _exact_minlink_vertices(workspace, s, t, max_links: int,
                            lift: bool = False) -> PolyPath:
    if isinstance(workspace, PolygonalDomain):
        verts = workspace.vertices()
        see = lambda p, q: visible(workspace, p, q)
        variant = (0, 2)
    else:
        verts = list(workspace.vertices)
        if lift:
            from .terrain import terrain_visible
            see = lambda p, q: terrain_visible(workspace, p, q)
            variant = (0, 3)
        else:
            from .terrain import segment_on_surface
            see = lambda p, q: segment_on_surface(workspace, p, q)
            variant = (0, 2)
    if s not in verts or t not in verts:
        raise ValueError("a=0 requires s and t at workspace vertices")
    order = {v: i for i, v in enumerate(dict.fromkeys(verts))}
    pts = list(order)
    from collections import deque
    prev = {s: None}
    qu = deque([s])
    while qu:
        u = qu.popleft()
        if u == t:
            break
        for v in pts:
            if v in prev or v == u:
                continue
            if see(u, v):
                prev[v] = u
                qu.append(v)
    if t not in prev:
        raise Unreachable(max_links)
    chain = []
    node = t
    while node is not None:
        chain.append(node)
        node = prev[node]
    chain.reverse()
    if len(chain) - 1 > max_links:
        raise Unreachable(max_links)
    return PolyPath(tuple(chain), variant)


def exact_minlink(workspace, s, t, variant=(1, 2),
                  max_links: Optional[int] = None,
                  cell_cap: int = 10 ** 6) -> PolyPath:
    """Minimum-link path for the given variant; raises Unreachable."""
    a, b = variant
    if max_links is None:
        max_links = 2 * workspace.n
    if isinstance(workspace, Terrain):
        if a == 0:
            return _exact_minlink_vertices(workspace, s, t, max_links,
                                           lift=(b >= 3))
        if a == 1 and b == 2:
            from .surface import surface_minlink
            return surface_minlink(workspace, s, t, max_links)
        raise NotImplementedError(f"terrain variant {variant}")
    if a == 0:
        return _exact_minlink_vertices(workspace, s, t, max_links)
    if a == 1:
        return _exact_minlink_boundary(workspace, s, t, max_links)
    if a == 2:
        return _exact_minlink_free(workspace, s, t, max_links, cell_cap)
    raise ValueError(f"unsupported variant {variant}")


def link_distance_map(d: PolygonalDomain, s, variant=(1, 2), k: int = 3) -> list[Region]:
    """The k-step illumination transcript R_1..R_k."""
    a, _ = variant
    out = []
    if a == 2:
        r = visibility_region(d, s)
        out.append(r)
        for _ in range(k - 1):
            r = illuminate(d, r)
            out.append(r)
        return out
    if a == 1:
        seeds = {}
        for ei, tt in _boundary_slots(d, s):
            seeds.setdefault(ei, []).append((tt, tt))
        if not seeds:
            raise ValueError("a=1 requires s on the boundary")
        eng = BoundaryIllumination(d, seeds)
        out.append(eng.region())
        for _ in range(k - 1):
            eng.step()
            out.append(eng.region())
        return out
    raise ValueError(f"unsupported variant {variant}")


def minlink_0b(workspace, s, t, lift: bool = False,
               max_links: Optional[int] = None) -> PolyPath:
    """BFS over the vertex-to-vertex visibility graph (MLP_0,b)."""
    if max_links is None:
        max_links = 4 * workspace.n
    return _exact_minlink_vertices(workspace, s, t, max_links, lift=lift)
