"""Exact visibility on terrains, link lifting, and the terrain-edge
2-approximation with certified-sampling weak visibility.

Visibility is closed: a sight segment may touch the surface; it is blocked
only when some stretch lies strictly below it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .geom import Point2, Segment2, orientation
from .errors import Unreachable, Inconclusive
from .model import (Terrain, Point3, PolyPath, surface_z_at, _tri_xy,
                    _on_segment3)

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _plane(T: Terrain, tri) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (u, v, w) of the face plane z = u x + v y + w."""
    A, B, C = T.tri_points(tri)
    det = (B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y)
    u = ((B.z - A.z) * (C.y - A.y) - (C.z - A.z) * (B.y - A.y)) / det
    v = ((B.x - A.x) * (C.z - A.z) - (C.x - A.x) * (B.z - A.z)) / det
    w = A.z - u * A.x - v * A.y
    return u, v, w


class _TCache:
    def __init__(self, T: Terrain):
        self.T = T
        self.planes = [_plane(T, t) for t in T.triangles]
        self.xy = [_tri_xy(T, t) for t in T.triangles]
        self.bbox = []
        for tri in self.xy:
            xs = [p.x for p in tri]
            ys = [p.y for p in tri]
            self.bbox.append((min(xs), min(ys), max(xs), max(ys)))


_tcaches: dict[int, tuple[Terrain, _TCache]] = {}


def _tcache(T: Terrain) -> _TCache:
    got = _tcaches.get(id(T))
    if got is not None and got[0] is T:
        return got[1]
    c = _TCache(T)
    if len(_tcaches) > 32:
        _tcaches.clear()
    _tcaches[id(T)] = (T, c)
    return c


def _seg_clip_tri(p: Point2, q: Point2, tri) -> Optional[tuple[Fraction, Fraction]]:
    """Param range of segment pq (in the xy-plane) inside triangle tri."""
    lo, hi = ZERO, ONE
    dx, dy = q.x - p.x, q.y - p.y
    if dx == 0 and dy == 0:
        for i in range(3):
            if orientation(tri[i], tri[(i + 1) % 3], p) < 0:
                return None
        return (ZERO, ONE)
    area2 = orientation(tri[0], tri[1], tri[2])
    ccw = tri if area2 > 0 else (tri[0], tri[2], tri[1])
    for i in range(3):
        a, b = ccw[i], ccw[(i + 1) % 3]
        ex, ey = b.x - a.x, b.y - a.y
        # inside means left of each ccw edge: cross(b-a, x-a) >= 0
        f0 = ex * (p.y - a.y) - ey * (p.x - a.x)
        f1 = ex * (q.y - a.y) - ey * (q.x - a.x)
        if f0 < 0 and f1 < 0:
            return None
        if f0 >= 0 and f1 >= 0:
            continue
        t = f0 / (f0 - f1)
        if f0 < 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
        if lo > hi:
            return None
    return (lo, hi) if lo <= hi else None


def terrain_visible(T: Terrain, p: Point3, q: Point3) -> bool:
    """True iff segment pq never passes strictly below the surface."""
    c = _tcache(T)
    pxy, qxy = p.xy(), q.xy()
    minx, maxx = min(p.x, q.x), max(p.x, q.x)
    miny, maxy = min(p.y, q.y), max(p.y, q.y)
    if pxy == qxy:
        z = surface_z_at(T, pxy)
        return z is None or min(p.z, q.z) >= z
    for ti in range(len(T.triangles)):
        bb = c.bbox[ti]
        if bb[0] > maxx or bb[2] < minx or bb[1] > maxy or bb[3] < miny:
            continue
        got = _seg_clip_tri(pxy, qxy, c.xy[ti])
        if got is None:
            continue
        lo, hi = got
        u, v, w = c.planes[ti]
        for t in (lo, hi):
            x = p.x + t * (q.x - p.x)
            y = p.y + t * (q.y - p.y)
            zs = p.z + t * (q.z - p.z)
            if zs < u * x + v * y + w:
                return False
    return True


def segment_on_surface(T: Terrain, p: Point3, q: Point3) -> bool:
    """True iff the whole straight segment pq lies on the surface."""
    c = _tcache(T)
    pxy, qxy = p.xy(), q.xy()
    if pxy == qxy:
        z = surface_z_at(T, pxy)
        return z is not None and p.z == q.z == z
    covered = []
    for ti in range(len(T.triangles)):
        got = _seg_clip_tri(pxy, qxy, c.xy[ti])
        if got is None:
            continue
        lo, hi = got
        if lo == hi:
            continue
        u, v, w = c.planes[ti]
        ok = True
        for t in (lo, hi):
            x = p.x + t * (q.x - p.x)
            y = p.y + t * (q.y - p.y)
            zs = p.z + t * (q.z - p.z)
            if zs != u * x + v * y + w:
                ok = False
                break
        if not ok:
            return False
        covered.append((lo, hi))
    covered.sort()
    reach = ZERO
    for lo, hi in covered:
        if lo > reach:
            return False
        reach = max(reach, hi)
    return reach >= ONE


def point_on_terrain(T: Terrain, xy: Point2) -> Optional[Point3]:
    z = surface_z_at(T, xy)
    return None if z is None else Point3(xy.x, xy.y, z)


# -- link lifting (vertical-plane argument of the 2-approximation) ---------

class DegenerateVerticalPlane(Exception):
    pass


def _tri_of_point(T: Terrain, p: Point3) -> Optional[int]:
    c = _tcache(T)
    for ti in range(len(T.triangles)):
        tri = c.xy[ti]
        o1 = orientation(tri[0], tri[1], p.xy())
        o2 = orientation(tri[1], tri[2], p.xy())
        o3 = orientation(tri[2], tri[0], p.xy())
        if (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0):
            u, v, w = c.planes[ti]
            if p.z == u * p.x + v * p.y + w:
                return ti
    return None


def lift_link_to_edges(T: Terrain, p: Point3, q: Point3) -> tuple[Point3, Point3]:
    """Lift a mutually visible surface pair to triangle-boundary points.

    Cuts the triangles containing p and q with the vertical plane through
    p and q and returns the uppermost boundary intersections; the lifted
    points stay mutually visible.
    """
    if p.xy() == q.xy():
        # any vertical plane works; use the one parallel to the x-axis
        dir2 = Point2(ONE, ZERO)
        base = p.xy()
    else:
        dir2 = Point2(q.x - p.x, q.y - p.y)
        base = p.xy()

    def lift_one(r: Point3) -> Point3:
        ti = _tri_of_point(T, r)
        if ti is None:
            raise DegenerateVerticalPlane(f"{r} is not on the surface")
        A, B, C = T.tri_points(T.triangles[ti])
        best = None
        for e in ((A, B), (B, C), (C, A)):
            a, b = e
            exy = (b.x - a.x, b.y - a.y)
            den = dir2.x * exy[1] - dir2.y * exy[0]
            if den == 0:
                # edge parallel to the cutting plane: endpoints decide
                for v_ in e:
                    if orientation(base, Point2(base.x + dir2.x, base.y + dir2.y),
                                   v_.xy()) == 0:
                        if best is None or v_.z > best.z:
                            best = v_
                continue
            # a + u (b - a) on the vertical plane through base, dir2
            u = (dir2.x * (base.y - a.y) - dir2.y * (base.x - a.x)) / -den
            if 0 <= u <= 1:
                cand = Point3(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
                              a.z + u * (b.z - a.z))
                if best is None or cand.z > best.z or \
                        (cand.z == best.z and (cand.x, cand.y) < (best.x, best.y)):
                    best = cand
        if best is None:
            raise DegenerateVerticalPlane(f"plane misses triangle of {r}")
        return best

    return lift_one(p), lift_one(q)


# -- edge weak visibility by certified adaptive sampling ----------------------

def edge_weak_visible_3d(T: Terrain, e: tuple[int, int], f: tuple[int, int],
                         budget: int = 8, seeds=()) -> tuple[str, Optional[tuple]]:
    """('visible', witness) with an exact witness pair, or
    ('not-visible-at-depth', None) after exhausting the sampling budget.

    One-sided: a negative answer is not a certificate.
    """
    ea, eb = T.edge_points(e)
    fa, fb = T.edge_points(f)

    def at(edge_pts, t: Fraction) -> Point3:
        a, b = edge_pts
        return Point3(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                      a.z + t * (b.z - a.z))

    def check(s: Fraction, t: Fraction):
        p, q = at((ea, eb), s), at((fa, fb), t)
        if terrain_visible(T, p, q):
            return (p, q)
        return None

    for (s, t) in seeds:
        got = check(Fraction(s), Fraction(t))
        if got:
            return "visible", got
    queue = deque([(HALF, HALF, HALF, 0)])
    while queue:
        s, t, r, depth = queue.popleft()
        got = check(s, t)
        if got:
            return "visible", got
        if depth >= budget:
            continue
        h = r / 2
        for ds in (-h, h):
            for dt_ in (-h, h):
                queue.append((s + ds, t + dt_, h, depth + 1))
    return "not-visible-at-depth", None


# -- 2-approximation over terrain edges ---------------------------------------

def _point_sees_edge(T: Terrain, p: Point3, edge, budget: int = 6,
                     seeds=()) -> Optional[Point3]:
    a, b = T.edge_points(edge)

    def at(t: Fraction) -> Point3:
        return Point3(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                      a.z + t * (b.z - a.z))

    for t in seeds:
        q = at(Fraction(t))
        if terrain_visible(T, p, q):
            return q
    cand = [ZERO, ONE, HALF]
    depth = 2
    step = Fraction(1, 4)
    while depth <= budget:
        t = step
        while t < 1:
            cand.append(t)
            t += 2 * step
        step /= 2
        depth += 1
    for t in cand:
        q = at(t)
        if terrain_visible(T, p, q):
            return q
    return None


def two_approx_terrain(T: Terrain, s: Point3, t: Point3, budget: int = 6,
                       seeds: Optional[dict] = None) -> PolyPath:
    """Shortest path in the terrain-edge weak-visibility graph, embedded
    with one connector link per intermediate edge (<= 2*opt links)."""
    edges = T.edges()
    seeds = seeds or {}
    n = len(edges)
    S, Tt = n, n + 1  # pseudo-feature ids for s and t
    adj: dict[int, dict[int, tuple]] = {i: {} for i in range(n + 2)}
    inconclusive = False

    for i in range(n):
        w = _point_sees_edge(T, s, edges[i], budget, seeds.get(("s", i), ()))
        if w is not None:
            adj[S][i] = (s, w)
            adj[i][S] = (w, s)
        w = _point_sees_edge(T, t, edges[i], budget, seeds.get(("t", i), ()))
        if w is not None:
            adj[Tt][i] = (t, w)
            adj[i][Tt] = (w, t)
    if terrain_visible(T, s, t):
        adj[S][Tt] = (s, t)
        adj[Tt][S] = (t, s)

    # BFS from s-side over features, discovering adjacencies lazily
    prev = {S: None}
    qu = deque([S])
    found = False
    while qu and not found:
        u = qu.popleft()
        if u == Tt:
            found = True
            break
        for v in list(adj[u].keys()):
            if v not in prev:
                prev[v] = u
                qu.append(v)
        if u == S:
            continue
        for v in range(n):
            if v in prev or v in adj[u] or v == u:
                continue
            verdict, witness = edge_weak_visible_3d(
                T, edges[u], edges[v], budget, seeds.get((u, v), ()))
            if verdict == "visible":
                adj[u][v] = witness
                adj[v][u] = (witness[1], witness[0])
                prev[v] = u
                qu.append(v)
            else:
                inconclusive = True
    if Tt not in prev:
        if inconclusive:
            raise Inconclusive("graph search failed with sampling-depth gaps")
        raise Unreachable()
    chain = []
    node = Tt
    while node is not None:
        chain.append(node)
        node = prev[node]
    chain.reverse()
    bends = [s]
    arrive = None
    for idx in range(1, len(chain)):
        u, v = chain[idx - 1], chain[idx]
        wp, wq = adj[u][v]
        if arrive is not None and arrive != wp:
            bends.append(wp)  # connector along feature u
        elif arrive is None and wp != s:
            bends.append(wp)
        bends.append(wq)
        arrive = wq
    if bends[-1] != t:
        bends.append(t)
    out = []
    for b in bends:
        if not out or out[-1] != b:
            out.append(b)
    return PolyPath(tuple(out), (1, 3))
