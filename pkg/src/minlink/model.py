"""Workspaces, features, regions and paths shared by all solvers.

A 2D workspace is a polygon with holes; a 3D workspace is a triangulated
terrain (a height surface met at most once by any vertical line).  Both are
immutable after validation and safe to share between workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geom import (Point2, Segment2, Rational, rat, orientation, on_segment,
                   segments_cross)


class ValidationError(Exception):
    def __init__(self, violation: str, detail: str = ""):
        self.violation = violation
        super().__init__(f"{violation}: {detail}" if detail else violation)


@dataclass(frozen=True, slots=True)
class Point3:
    x: Fraction
    y: Fraction
    z: Fraction

    def __repr__(self):
        return f"({self.x}, {self.y}, {self.z})"

    def xy(self) -> Point2:
        return Point2(self.x, self.y)


def pt3(x, y, z) -> Point3:
    return Point3(rat(x), rat(y), rat(z))


def _signed_area2(ring: Sequence[Point2]) -> Fraction:
    s = Fraction(0)
    for i in range(len(ring)):
        a, b = ring[i], ring[(i + 1) % len(ring)]
        s += a.x * b.y - b.x * a.y
    return s  # twice the signed area


def _ring_simple(ring: Sequence[Point2]) -> bool:
    n = len(ring)
    if n < 3:
        return False
    if len({(p.x, p.y) for p in ring}) != n:
        return False
    edges = [Segment2(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # adjacent edges may only share their common vertex
                shared = ring[j] if j == i + 1 else ring[0]
                e1, e2 = edges[i], edges[j]
                for p in (e1.a, e1.b):
                    if p != shared and on_segment(p, e2.a, e2.b):
                        return False
                for p in (e2.a, e2.b):
                    if p != shared and on_segment(p, e1.a, e1.b):
                        return False
            elif segments_cross(edges[i], edges[j], "closed"):
                return False
    return True


def _point_in_ring(ring: Sequence[Point2], p: Point2) -> str:
    """'boundary' | 'inside' | 'outside' by exact crossing number."""
    n = len(ring)
    cnt = 0
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if on_segment(p, a, b):
            return "boundary"
        if (a.y > p.y) != (b.y > p.y):
            # x of the edge at height p.y, compared to p.x
            t = (p.y - a.y) / (b.y - a.y)
            xi = a.x + t * (b.x - a.x)
            if xi > p.x:
                cnt += 1
    return "inside" if cnt % 2 == 1 else "outside"


@dataclass(frozen=True)
class PolygonalDomain:
    """Closed polygon with holes.  outer ccw, holes cw, holes strictly inside."""
    outer: tuple[Point2, ...]
    holes: tuple[tuple[Point2, ...], ...] = ()

    @staticmethod
    def make(outer, holes=()) -> "PolygonalDomain":
        return PolygonalDomain(tuple(outer), tuple(tuple(h) for h in holes))

    @property
    def n(self) -> int:
        return len(self.outer) + sum(len(h) for h in self.holes)

    def rings(self):
        yield self.outer
        yield from self.holes

    def edges(self) -> list[Segment2]:
        """All boundary edges, outer ring first, stable order."""
        out = []
        for ring in self.rings():
            k = len(ring)
            for i in range(k):
                out.append(Segment2(ring[i], ring[(i + 1) % k]))
        return out

    def vertices(self) -> list[Point2]:
        out = list(self.outer)
        for h in self.holes:
            out.extend(h)
        return out


def validate_domain(d: PolygonalDomain) -> None:
    """Raise ValidationError naming the violated invariant, else return."""
    if len(d.outer) < 3:
        raise ValidationError("outer-too-small")
    if not _ring_simple(d.outer):
        raise ValidationError("not-simple", "outer ring self-intersects")
    if _signed_area2(d.outer) <= 0:
        raise ValidationError("bad-orientation", "outer ring must be ccw")
    for hi, h in enumerate(d.holes):
        if len(h) < 3:
            raise ValidationError("hole-too-small", f"hole {hi}")
        if not _ring_simple(h):
            raise ValidationError("not-simple", f"hole {hi} self-intersects")
        if _signed_area2(h) >= 0:
            raise ValidationError("bad-orientation", f"hole {hi} must be cw")
        for vi, v in enumerate(h):
            if _point_in_ring(d.outer, v) != "inside":
                raise ValidationError("hole-not-strictly-inside",
                                      f"hole {hi} vertex {vi}")
        k = len(h)
        for i in range(k):
            e = Segment2(h[i], h[(i + 1) % k])
            ko = len(d.outer)
            for j in range(ko):
                eo = Segment2(d.outer[j], d.outer[(j + 1) % ko])
                if segments_cross(e, eo, "closed"):
                    raise ValidationError("hole-not-strictly-inside",
                                          f"hole {hi} touches outer ring")
    for hi in range(len(d.holes)):
        for hj in range(hi + 1, len(d.holes)):
            a, b = d.holes[hi], d.holes[hj]
            for i in range(len(a)):
                ea = Segment2(a[i], a[(i + 1) % len(a)])
                for j in range(len(b)):
                    eb = Segment2(b[j], b[(j + 1) % len(b)])
                    if segments_cross(ea, eb, "closed"):
                        raise ValidationError("holes-touch", f"holes {hi},{hj}")
            if _point_in_ring(a, b[0]) == "inside" or _point_in_ring(b, a[0]) == "inside":
                raise ValidationError("hole-inside-hole", f"holes {hi},{hj}")


def contains_point(d: PolygonalDomain, p: Point2) -> str:
    """'interior' | 'boundary' | 'outside' of the closed domain."""
    where = _point_in_ring(d.outer, p)
    if where == "boundary":
        return "boundary"
    if where == "outside":
        return "outside"
    for h in d.holes:
        wh = _point_in_ring(h, p)
        if wh == "boundary":
            return "boundary"
        if wh == "inside":
            return "outside"
    return "interior"


# -- terrain ----------------------------------------------------------------

@dataclass(frozen=True)
class Terrain:
    vertices: tuple[Point3, ...]
    triangles: tuple[tuple[int, int, int], ...]

    @staticmethod
    def make(vertices, triangles) -> "Terrain":
        return Terrain(tuple(vertices), tuple(tuple(t) for t in triangles))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def tri_points(self, t) -> tuple[Point3, Point3, Point3]:
        i, j, k = t
        return self.vertices[i], self.vertices[j], self.vertices[k]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as sorted index pairs, stable order."""
        seen = {}
        for t in self.triangles:
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (a, b) if a < b else (b, a)
                seen.setdefault(key, None)
        return list(seen.keys())

    def edge_points(self, e: tuple[int, int]) -> tuple[Point3, Point3]:
        return self.vertices[e[0]], self.vertices[e[1]]


def _tri_xy(T: Terrain, t) -> tuple[Point2, Point2, Point2]:
    a, b, c = T.tri_points(t)
    return a.xy(), b.xy(), c.xy()


def validate_terrain(T: Terrain) -> None:
    nv = len(T.vertices)
    if nv < 3 or not T.triangles:
        raise ValidationError("empty-terrain")
    if len({(v.x, v.y) for v in T.vertices}) != nv:
        raise ValidationError("vertical-line", "two vertices share an xy-projection")
    for ti, t in enumerate(T.triangles):
        if len(set(t)) != 3 or not all(0 <= i < nv for i in t):
            raise ValidationError("bad-triangle", f"triangle {ti}")
        a, b, c = _tri_xy(T, t)
        if orientation(a, b, c) == 0:
            raise ValidationError("degenerate-triangle", f"triangle {ti}")
    # pairwise xy relations: disjoint interiors, contact only at shared
    # vertices or whole shared edges
    for ti in range(len(T.triangles)):
        pa = _tri_xy(T, T.triangles[ti])
        ea = [Segment2(pa[i], pa[(i + 1) % 3]) for i in range(3)]
        sa = set(T.triangles[ti])
        for tj in range(ti + 1, len(T.triangles)):
            pb = _tri_xy(T, T.triangles[tj])
            sb = set(T.triangles[tj])
            shared = sa & sb
            eb = [Segment2(pb[i], pb[(i + 1) % 3]) for i in range(3)]
            for i in range(3):
                for j in range(3):
                    if segments_cross(ea[i], eb[j], "open"):
                        raise ValidationError("not-a-triangulation",
                                              f"triangles {ti},{tj} overlap")
            # a vertex of one inside the other, or on an edge without being
            # a shared vertex, breaks edge-to-edge-ness
            for idx in T.triangles[tj]:
                if idx in shared:
                    continue
                p = T.vertices[idx].xy()
                if _point_in_ring(pa, p) != "outside":
                    raise ValidationError("not-a-triangulation",
                                          f"vertex {idx} meets triangle {ti}")
            for idx in T.triangles[ti]:
                if idx in shared:
                    continue
                p = T.vertices[idx].xy()
                if _point_in_ring(pb, p) != "outside":
                    raise ValidationError("not-a-triangulation",
                                          f"vertex {idx} meets triangle {tj}")
    # connectivity over shared edges
    parent = list(range(len(T.triangles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_edge = {}
    for ti, t in enumerate(T.triangles):
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = (a, b) if a < b else (b, a)
            if key in by_edge:
                ri, rj = find(by_edge[key]), find(ti)
                parent[ri] = rj
            else:
                by_edge[key] = ti
    if len({find(i) for i in range(len(T.triangles))}) != 1:
        raise ValidationError("not-connected")


def surface_z_at(T: Terrain, p: Point2) -> Optional[Fraction]:
    """Height of the surface over p, or None when p is outside the footprint."""
    for t in T.triangles:
        a, b, c = _tri_xy(T, t)
        o1 = orientation(a, b, p)
        o2 = orientation(b, c, p)
        o3 = orientation(c, a, p)
        if (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0):
            A, B, C = T.tri_points(t)
            # solve the plane z = ux + vy + w through A,B,C
            det = (B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y)
            u = ((B.z - A.z) * (C.y - A.y) - (C.z - A.z) * (B.y - A.y)) / det
            v = ((B.x - A.x) * (C.z - A.z) - (C.x - A.x) * (B.z - A.z)) / det
            return A.z + u * (p.x - A.x) + v * (p.y - A.y)
    return None


# -- features, regions, paths ------------------------------------------------

@dataclass(frozen=True)
class Feature:
    """A convex piece of the allowed bend locus."""
    kind: str        # domain-edge | terrain-edge | terrain-triangle | vertex
    id: int
    carrier: object  # Segment2, edge index pair, triangle, or point


Interval = tuple[Fraction, Fraction]


def merge_intervals(ivs: list[Interval]) -> list[Interval]:
    """Sort, merge touching/overlapping closed intervals."""
    ivs = sorted((lo, hi) for lo, hi in ivs if lo <= hi)
    out: list[Interval] = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def intervals_intersect(a: list[Interval], b: list[Interval]) -> list[Interval]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


@dataclass
class Region:
    """A k-reachable set.

    kind 'free-2d': cells = list of convex ccw polygons (tuples of Point2).
    kind 'boundary-1d': intervals = {feature id: sorted disjoint closed
    parameter intervals in [0,1] along the feature}.
    """
    kind: str
    generation: int
    cells: list[tuple[Point2, ...]] = field(default_factory=list)
    intervals: dict[int, list[Interval]] = field(default_factory=dict)

    def canonical(self) -> "Region":
        if self.kind == "boundary-1d":
            self.intervals = {k: merge_intervals(v)
                              for k, v in sorted(self.intervals.items()) if v}
        return self

    def is_empty(self) -> bool:
        if self.kind == "free-2d":
            return not self.cells
        return all(not v for v in self.intervals.values())


@dataclass(frozen=True)
class PolyPath:
    """Solution path: bends[0] = s, bends[-1] = t; link count = len-1."""
    bends: tuple
    variant: tuple[int, int]

    @property
    def links(self) -> int:
        return len(self.bends) - 1


@dataclass
class VisGraph:
    """Feature graph: adjacency over k-link weakly visible feature pairs."""
    features: list[Feature]
    k: int
    adjacency: dict[int, set[int]]

    def neighbors(self, i: int) -> set[int]:
        return self.adjacency.get(i, set())


# -- path verification --------------------------------------------------------

def _on_boundary_2d(d: PolygonalDomain, p: Point2) -> bool:
    return contains_point(d, p) == "boundary"


def _on_terrain_edge(T: Terrain, p: Point3) -> bool:
    for (i, j) in T.edges():
        a, b = T.vertices[i], T.vertices[j]
        if _on_segment3(p, a, b):
            return True
    return False


def _on_segment3(p: Point3, a: Point3, b: Point3) -> bool:
    # collinear and within the box
    ux, uy, uz = b.x - a.x, b.y - a.y, b.z - a.z
    vx, vy, vz = p.x - a.x, p.y - a.y, p.z - a.z
    if ux * vy - uy * vx != 0 or ux * vz - uz * vx != 0 or uy * vz - uz * vy != 0:
        return False
    dot = ux * vx + uy * vy + uz * vz
    return 0 <= dot <= ux * ux + uy * uy + uz * uz


def _point_on_surface(T: Terrain, p: Point3) -> bool:
    z = surface_z_at(T, p.xy())
    return z is not None and z == p.z


def verify_path(workspace, s, t, path: PolyPath) -> tuple[bool, str]:
    """NP certificate check: (ok, reason).  reason is '' on success,
    'bad-bend-location' or 'broken-link(i)' on failure."""
    if path.bends[0] != s or path.bends[-1] != t or len(path.bends) < 2:
        return False, "bad-bend-location"
    a, b = path.variant
    if isinstance(workspace, PolygonalDomain):
        from .visibility import visible
        for i, p in enumerate(path.bends):
            if contains_point(workspace, p) == "outside":
                return False, "bad-bend-location"
            if a <= 1 and 0 < i < len(path.bends) - 1 and not _on_boundary_2d(workspace, p):
                return False, "bad-bend-location"
            if a == 0 and 0 < i < len(path.bends) - 1 and p not in workspace.vertices():
                return False, "bad-bend-location"
        for i in range(len(path.bends) - 1):
            if not visible(workspace, path.bends[i], path.bends[i + 1]):
                return False, f"broken-link({i})"
        return True, ""
    # terrain
    from .terrain import terrain_visible, segment_on_surface
    T = workspace
    for i, p in enumerate(path.bends):
        inner = 0 < i < len(path.bends) - 1
        if a == 0 and inner and p not in T.vertices:
            return False, "bad-bend-location"
        if a == 1 and inner and not _on_terrain_edge(T, p):
            return False, "bad-bend-location"
        if a == 2 and inner and not _point_on_surface(T, p):
            return False, "bad-bend-location"
    for i in range(len(path.bends) - 1):
        p, q = path.bends[i], path.bends[i + 1]
        if b == 2:
            if not segment_on_surface(T, p, q):
                return False, f"broken-link({i})"
        else:
            if not terrain_visible(T, p, q):
                return False, f"broken-link({i})"
    return True, ""
