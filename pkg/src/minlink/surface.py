"""Min-link paths with bends on terrain edges and links on the surface.

A straight surface link cannot cross a crease, so it lives inside one
maximal coplanar facet.  Each facet is charted into the plane by an exact
rational affine map and illuminated with the 2D interval engine; lit sets
live as parameter intervals on the terrain's edges.

Bends are supported on facet-boundary edges (creases, terrain boundary and
ridge edges); interior coplanar diagonals are traversed freely but are not
offered as bend loci.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Optional

from .errors import Unreachable
from .geom import Point2, Segment2, orientation
from .model import (Terrain, Point3, PolygonalDomain, PolyPath, Interval,
                    merge_intervals, intervals_intersect, _on_segment3)
from .visibility import lit_from_interval, point_lit_intervals, _param_on

ZERO = Fraction(0)
ONE = Fraction(1)

EdgeKey = tuple[int, int]


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _sub3(a: Point3, b: Point3):
    return (a.x - b.x, a.y - b.y, a.z - b.z)


class Chart:
    """Exact affine chart of a plane in 3-space."""

    def __init__(self, origin: Point3, u, v):
        self.origin = origin
        self.u = u
        self.v = v
        n = _cross3(u, v)
        # pick the coordinate pair with a nonzero normal component
        if n[2] != 0:
            self.ix, self.iy = 0, 1
        elif n[1] != 0:
            self.ix, self.iy = 0, 2
        else:
            self.ix, self.iy = 1, 2
        ux, uy = u[self.ix], u[self.iy]
        vx, vy = v[self.ix], v[self.iy]
        self.det = ux * vy - uy * vx

    def to2(self, p: Point3) -> Point2:
        w = _sub3(p, self.origin)
        wx, wy = w[self.ix], w[self.iy]
        ux, uy = self.u[self.ix], self.u[self.iy]
        vx, vy = self.v[self.ix], self.v[self.iy]
        a = (wx * vy - wy * vx) / self.det
        b = (ux * wy - uy * wx) / self.det
        return Point2(a, b)

    def to3(self, p: Point2) -> Point3:
        return Point3(self.origin.x + p.x * self.u[0] + p.y * self.v[0],
                      self.origin.y + p.x * self.u[1] + p.y * self.v[1],
                      self.origin.z + p.x * self.u[2] + p.y * self.v[2])


class Facet:
    def __init__(self, T: Terrain, tri_ids: list[int]):
        self.tri_ids = tri_ids
        A, B, C = T.tri_points(T.triangles[tri_ids[0]])
        self.chart = Chart(A, _sub3(B, A), _sub3(C, A))
        # boundary edges: appear in exactly one facet triangle
        count: dict[EdgeKey, int] = defaultdict(int)
        for ti in tri_ids:
            t = T.triangles[ti]
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                count[(a, b) if a < b else (b, a)] += 1
        # orient triangles ccw in the chart, then walk directed boundary
        # edges into loops
        succ = {}
        for ti in tri_ids:
            t = list(T.triangles[ti])
            p = [self.chart.to2(T.vertices[i]) for i in t]
            if orientation(p[0], p[1], p[2]) < 0:
                t = [t[0], t[2], t[1]]
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (a, b) if a < b else (b, a)
                if count[key] == 1:
                    succ[a] = b
        loops = []
        seen = set()
        for start in list(succ):
            if start in seen:
                continue
            loop = [start]
            seen.add(start)
            cur = succ[start]
            while cur != start:
                loop.append(cur)
                seen.add(cur)
                cur = succ[cur]
            loops.append(loop)
        # classify the largest loop as outer (ccw), the rest as holes (cw)
        ringed = []
        for loop in loops:
            ring = [self.chart.to2(T.vertices[i]) for i in loop]
            area = ZERO
            for i in range(len(ring)):
                a, b = ring[i], ring[(i + 1) % len(ring)]
                area += a.x * b.y - b.x * a.y
            ringed.append((area, loop, ring))
        ringed.sort(key=lambda r: -abs(r[0]))
        rings = []
        self.loop_vertices = []
        for k, (area, loop, ring) in enumerate(ringed):
            want_ccw = (k == 0)
            if (area > 0) != want_ccw:
                loop = list(reversed(loop))
                ring = list(reversed(ring))
            rings.append(ring)
            self.loop_vertices.append(loop)
        self.domain = PolygonalDomain.make(rings[0], rings[1:])
        # map 2D edge index -> (3D edge key, reversed?)
        self.edge_map: list[tuple[EdgeKey, bool]] = []
        for loop in self.loop_vertices:
            k = len(loop)
            for i in range(k):
                a, b = loop[i], loop[(i + 1) % k]
                key = (a, b) if a < b else (b, a)
                self.edge_map.append((key, a > b))
        self.by_key: dict[EdgeKey, int] = {}
        for idx, (key, _) in enumerate(self.edge_map):
            self.by_key[key] = idx


def _coplanar(T: Terrain, ti: int, tj: int) -> bool:
    A, B, C = T.tri_points(T.triangles[ti])
    n = _cross3(_sub3(B, A), _sub3(C, A))
    for v in T.tri_points(T.triangles[tj]):
        w = _sub3(v, A)
        if n[0] * w[0] + n[1] * w[1] + n[2] * w[2] != 0:
            return False
    return True


def facets_of(T: Terrain) -> list[Facet]:
    """Maximal coplanar edge-connected groups of triangles."""
    by_edge: dict[EdgeKey, list[int]] = defaultdict(list)
    for ti, t in enumerate(T.triangles):
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            by_edge[(a, b) if a < b else (b, a)].append(ti)
    seen = set()
    out = []
    for start in range(len(T.triangles)):
        if start in seen:
            continue
        group = [start]
        seen.add(start)
        stack = [start]
        while stack:
            ti = stack.pop()
            t = T.triangles[ti]
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (a, b) if a < b else (b, a)
                for tj in by_edge[key]:
                    if tj not in seen and _coplanar(T, start, tj):
                        seen.add(tj)
                        group.append(tj)
                        stack.append(tj)
        out.append(Facet(T, group))
    return out


_fcache: dict[int, tuple[Terrain, list[Facet]]] = {}


def _facets(T: Terrain) -> list[Facet]:
    got = _fcache.get(id(T))
    if got is not None and got[0] is T:
        return got[1]
    fs = facets_of(T)
    if len(_fcache) > 16:
        _fcache.clear()
    _fcache[id(T)] = (T, fs)
    return fs


def edge_slots_3d(T: Terrain, p: Point3) -> list[tuple[EdgeKey, Fraction]]:
    out = []
    for (i, j) in T.edges():
        a, b = T.vertices[i], T.vertices[j]
        if _on_segment3(p, a, b):
            if a.x != b.x:
                t = (p.x - a.x) / (b.x - a.x)
            elif a.y != b.y:
                t = (p.y - a.y) / (b.y - a.y)
            else:
                t = (p.z - a.z) / (b.z - a.z)
            out.append(((i, j), t))
    return out


def _edge_point(T: Terrain, key: EdgeKey, t: Fraction) -> Point3:
    a, b = T.vertices[key[0]], T.vertices[key[1]]
    return Point3(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                  a.z + t * (b.z - a.z))


class SurfaceIllumination:
    """Staged illumination of terrain-edge intervals for on-surface links."""

    def __init__(self, T: Terrain, seeds: dict[EdgeKey, list[Interval]]):
        self.T = T
        self.facets = _facets(T)
        self.lit: dict[EdgeKey, list[Interval]] = {
            k: merge_intervals(v) for k, v in seeds.items() if v}
        self.frontier = {k: list(v) for k, v in self.lit.items()}
        self.processed: dict[EdgeKey, list[Interval]] = {}
        self.generation = 1

    def _map_iv(self, facet: Facet, key: EdgeKey, iv: Interval,
                reverse: bool) -> Interval:
        if not reverse:
            return iv
        return (ONE - iv[1], ONE - iv[0])

    def step(self) -> bool:
        add: dict[EdgeKey, list[Interval]] = defaultdict(list)
        for key, ivs in sorted(self.frontier.items()):
            for fc in self.facets:
                src_idx = fc.by_key.get(key)
                if src_idx is None:
                    continue
                rev = fc.edge_map[src_idx][1]
                for iv in ivs:
                    iv2 = self._map_iv(fc, key, iv, rev)
                    for tgt_idx, (tkey, trev) in enumerate(fc.edge_map):
                        if self.lit.get(tkey) == [(ZERO, ONE)]:
                            continue
                        got = lit_from_interval(fc.domain, src_idx, iv2, tgt_idx)
                        for g in got:
                            add[tkey].append(self._map_iv(fc, tkey, g, trev))
        self.processed = {
            k: merge_intervals(self.processed.get(k, []) + self.frontier.get(k, []))
            for k in set(self.processed) | set(self.frontier)}
        changed = False
        new_frontier = {}
        for key, ivs in add.items():
            before = self.lit.get(key, [])
            after = merge_intervals(before + ivs)
            if after != before:
                changed = True
                self.lit[key] = after
                from .visibility import _interval_difference
                fresh = _interval_difference(after, self.processed.get(key, []))
                if fresh:
                    new_frontier[key] = fresh
        self._vertex_closure()
        self.frontier = new_frontier
        self.generation += 1
        return changed

    def _vertex_closure(self):
        ends: set[int] = set()
        for (i, j), ivs in self.lit.items():
            for lo, hi in ivs:
                if lo == ZERO or hi == ZERO:
                    ends.add(i)
                if hi == ONE or lo == ONE:
                    ends.add(j)
        if not ends:
            return
        for (i, j) in self.T.edges():
            if i in ends:
                self.lit[(i, j)] = merge_intervals(
                    self.lit.get((i, j), []) + [(ZERO, ZERO)])
            if j in ends:
                self.lit[(i, j)] = merge_intervals(
                    self.lit.get((i, j), []) + [(ONE, ONE)])


def _point_lit_3d(T: Terrain, p: Point3) -> dict[EdgeKey, list[Interval]]:
    """Terrain-edge intervals visible from p along on-surface sights."""
    out: dict[EdgeKey, list[Interval]] = defaultdict(list)
    for fc in _facets(T):
        # p must lie on this facet's plane and inside its domain
        p2 = None
        ch = fc.chart
        cand = ch.to2(p)
        if ch.to3(cand) == p:
            from .model import contains_point
            if contains_point(fc.domain, cand) != "outside":
                p2 = cand
        if p2 is None:
            continue
        lit = point_lit_intervals(fc.domain, p2)
        for idx, ivs in lit.items():
            key, rev = fc.edge_map[idx]
            for iv in ivs:
                out[key].append((ONE - iv[1], ONE - iv[0]) if rev else iv)
    return {k: merge_intervals(v) for k, v in out.items()}


def surface_minlink(T: Terrain, s: Point3, t: Point3,
                    max_links: Optional[int] = None) -> PolyPath:
    """Exact MLP_1,2 on a terrain: bends on edges, links on the surface."""
    if max_links is None:
        max_links = 4 * len(T.vertices)
    s_slots = edge_slots_3d(T, s)
    t_slots = edge_slots_3d(T, t)
    if not s_slots or not t_slots:
        raise ValueError("surface variant requires s and t on terrain edges")
    from .terrain import segment_on_surface
    if segment_on_surface(T, s, t):
        return PolyPath((s, t), (1, 2))
    seeds: dict[EdgeKey, list[Interval]] = defaultdict(list)
    for key, tt in s_slots:
        seeds[key].append((tt, tt))
    eng = SurfaceIllumination(T, dict(seeds))
    regions = [{k: list(v) for k, v in eng.lit.items()}]
    for _ in range(max_links - 1):
        if not eng.step():
            raise Unreachable(max_links)
        regions.append({k: list(v) for k, v in eng.lit.items()})
        hit = any(lo <= tt <= hi
                  for key, tt in t_slots
                  for lo, hi in eng.lit.get(key, []))
        if hit:
            bends = _backtrack_surface(T, regions, s, t)
            return PolyPath(tuple(bends), (1, 2))
    raise Unreachable(max_links)


def _backtrack_surface(T: Terrain, regions, s: Point3, t: Point3) -> list[Point3]:
    bends = [t]
    cur = t
    for i in range(len(regions) - 1, 0, -1):
        fan = _point_lit_3d(T, cur)
        choice = None
        for key in sorted(regions[i - 1]):
            got = intervals_intersect(sorted(regions[i - 1][key]),
                                      fan.get(key, []))
            if got:
                choice = _edge_point(T, key, got[0][0])
                break
        if choice is None:
            raise AssertionError("surface backtracking lost the chain")
        bends.append(choice)
        cur = choice
    from .terrain import segment_on_surface
    if not segment_on_surface(T, s, cur):
        raise AssertionError("surface witness does not close at s")
    bends.append(s)
    bends.reverse()
    out = [bends[0]]
    for b in bends[1:]:
        if b != out[-1]:
            out.append(b)
    return out
