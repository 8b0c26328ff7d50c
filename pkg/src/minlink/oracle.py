"""Independent brute-force oracles for validating solvers on small inputs.

These deliberately avoid the staged-illumination machinery: the BFS oracle
works on a sampled visibility graph with the basic `visible` predicate only,
so solver results can be checked against a second code path.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Optional

from .geom import Point2, orientation
from .model import PolygonalDomain, Terrain, PolyPath


def grid_bfs_minlink(workspace, s, t, variant=(1, 2), resolution: int = 4,
                     extra_points=()) -> tuple[int, Optional[PolyPath]]:
    """Link-count upper bound via BFS over sampled bend candidates.

    Samples: all vertices, per-edge subdivisions at the given resolution,
    s, t, and any caller-supplied witness points.  The bound is tight
    whenever an optimal path can bend on sample points.  Raises
    ValueError("unreachable") when no sampled path exists.
    """
    if isinstance(workspace, PolygonalDomain):
        from .visibility import visible as vis2
        see = lambda p, q: vis2(workspace, p, q)
        samples = list(workspace.vertices())
        for e in workspace.edges():
            for i in range(1, resolution):
                samples.append(e.point_at(Fraction(i, resolution)))
    else:
        from .terrain import terrain_visible
        see = lambda p, q: terrain_visible(workspace, p, q)
        samples = list(workspace.vertices)
        for (i, j) in workspace.edges():
            a, b = workspace.vertices[i], workspace.vertices[j]
            from .model import Point3
            for k in range(1, resolution):
                f = Fraction(k, resolution)
                samples.append(Point3(a.x + f * (b.x - a.x),
                                      a.y + f * (b.y - a.y),
                                      a.z + f * (b.z - a.z)))
    samples.extend(extra_points)
    pts = [s] + [p for p in dict.fromkeys(samples) if p != s and p != t] + [t]
    n = len(pts)
    prev = {0: None}
    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        if u == n - 1:
            break
        for v in range(n):
            if v in prev or v == u:
                continue
            if see(pts[u], pts[v]):
                prev[v] = u
                frontier.append(v)
    if n - 1 not in prev:
        raise ValueError("unreachable")
    chain = []
    node = n - 1
    while node is not None:
        chain.append(pts[node])
        node = prev[node]
    chain.reverse()
    return len(chain) - 1, PolyPath(tuple(chain), variant)


def collinear_triples(lines: list[list[Fraction]],
                      ys=(1, 2, 3)) -> Optional[tuple]:
    """Exact O(s^3) search for one point per line, collinear across lines.

    `lines` holds the x-coordinates of the points on each of the three
    parallel horizontal lines; the lines sit at the given y values.
    Returns the triple of x-coordinates or None.
    """
    y1, y2, y3 = [Fraction(y) for y in ys]
    for x1 in lines[0]:
        for x2 in lines[1]:
            for x3 in lines[2]:
                p1 = Point2(Fraction(x1), y1)
                p2 = Point2(Fraction(x2), y2)
                p3 = Point2(Fraction(x3), y3)
                if orientation(p1, p2, p3) == 0:
                    return (x1, x2, x3)
    return None


def subset_sum_table(A: list[int]) -> set[int]:
    """All sums achievable by subsets of A (dynamic programming)."""
    sums = {0}
    for a in A:
        sums |= {s + a for s in sums}
    return sums
