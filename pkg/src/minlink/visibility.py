"""Exact 2D visibility: point visibility, visibility regions, staged
illumination for free and boundary-restricted bends, weak visibility.

Conventions: the domain is closed, and a sight segment may graze the
boundary (touch it, run along it, or pass through a vertex tangentially);
it is blocked only when some stretch of it is strictly outside.  This
keeps every illuminated region closed.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Optional

from .geom import (Point2, Segment2, orientation, on_segment, segments_cross,
                   line_line_intersection, ParallelLines)
from .errors import ResourceLimit
from .model import (PolygonalDomain, Region, contains_point, merge_intervals,
                    intervals_intersect, Interval)

ZERO = Fraction(0)
ONE = Fraction(1)


# -- per-domain cache --------------------------------------------------------

class _Cache:
    def __init__(self, d: PolygonalDomain):
        self.domain = d
        self.edges = d.edges()
        self.vertices = d.vertices()
        self.bboxes = []
        for e in self.edges:
            self.bboxes.append((min(e.a.x, e.b.x), min(e.a.y, e.b.y),
                                max(e.a.x, e.b.x), max(e.a.y, e.b.y)))
        self.vertex_slots: dict[tuple, list[tuple[int, Fraction]]] = {}
        for ei, e in enumerate(self.edges):
            self.vertex_slots.setdefault((e.a.x, e.a.y), []).append((ei, ZERO))
            self.vertex_slots.setdefault((e.b.x, e.b.y), []).append((ei, ONE))
        # reflex vertices (interior angle > pi); the domain interior lies on
        # the left of every directed boundary edge, so a right turn is reflex
        self.reflex = []
        for ring in d.rings():
            k = len(ring)
            for i in range(k):
                u, v, w = ring[i - 1], ring[i], ring[(i + 1) % k]
                if orientation(u, v, w) < 0:
                    self.reflex.append(v)
        self.fan_cells: dict[tuple, list] = {}
        self.expand_cells: dict[tuple, list] = {}


_caches: dict[int, tuple[PolygonalDomain, _Cache]] = {}


def _cache(d: PolygonalDomain) -> _Cache:
    got = _caches.get(id(d))
    if got is not None and got[0] is d:
        return got[1]
    c = _Cache(d)
    if len(_caches) > 64:
        _caches.clear()
    _caches[id(d)] = (d, c)
    return c


# -- point-to-point visibility ------------------------------------------------

def _segment_params_on(p: Point2, q: Point2, e: Segment2) -> list[Fraction]:
    """Params t in [0,1] where segment pq meets edge e (0, 1 or 2 values)."""
    r = (q.x - p.x, q.y - p.y)
    s = (e.b.x - e.a.x, e.b.y - e.a.y)
    ap = (e.a.x - p.x, e.a.y - p.y)
    den = r[0] * s[1] - r[1] * s[0]
    if den != 0:
        t = (ap[0] * s[1] - ap[1] * s[0]) / den
        u = (ap[0] * r[1] - ap[1] * r[0]) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            return [t]
        return []
    # parallel; collinear?
    if ap[0] * r[1] - ap[1] * r[0] != 0:
        return []
    rr = r[0] * r[0] + r[1] * r[1]
    ta = (ap[0] * r[0] + ap[1] * r[1]) / rr
    tb = ((e.b.x - p.x) * r[0] + (e.b.y - p.y) * r[1]) / rr
    lo, hi = min(ta, tb), max(ta, tb)
    lo, hi = max(lo, ZERO), min(hi, ONE)
    if lo > hi:
        return []
    return [lo, hi] if lo < hi else [lo]


def visible(d: PolygonalDomain, p: Point2, q: Point2) -> bool:
    """True iff the closed segment pq stays inside the closed domain."""
    if contains_point(d, p) == "outside" or contains_point(d, q) == "outside":
        return False
    if p == q:
        return True
    c = _cache(d)
    params = {ZERO, ONE}
    minx, maxx = min(p.x, q.x), max(p.x, q.x)
    miny, maxy = min(p.y, q.y), max(p.y, q.y)
    for e, bb in zip(c.edges, c.bboxes):
        if bb[0] > maxx or bb[2] < minx or bb[1] > maxy or bb[3] < miny:
            continue
        for t in _segment_params_on(p, q, e):
            params.add(t)
    ts = sorted(params)
    for i in range(len(ts) - 1):
        tm = (ts[i] + ts[i + 1]) / 2
        m = Point2(p.x + tm * (q.x - p.x), p.y + tm * (q.y - p.y))
        if contains_point(d, m) == "outside":
            return False
    return True


# -- visibility fan (region of a point) ----------------------------------------

def _angle_class(dx: Fraction, dy: Fraction) -> tuple:
    # orders directions ccw starting at (1,0); exact, no trig
    upper = dy > 0 or (dy == 0 and dx > 0)
    return (0 if upper else 1, )


def _dir_sort(dirs: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    import functools as _ft

    def cmp(a, b):
        ha, hb = _angle_class(*a), _angle_class(*b)
        if ha != hb:
            return -1 if ha < hb else 1
        cr = a[0] * b[1] - a[1] * b[0]
        return 0 if cr == 0 else (-1 if cr > 0 else 1)

    return sorted(dirs, key=_ft.cmp_to_key(cmp))


def _ray_nearest_hit(c: _Cache, p: Point2, dx: Fraction, dy: Fraction):
    """Nearest edge hit by the ray p + s*(dx,dy), s > 0.  Returns (s, edge)."""
    best = None
    best_edge = None
    for e in c.edges:
        ex, ey = e.b.x - e.a.x, e.b.y - e.a.y
        den = dx * ey - dy * ex
        if den == 0:
            continue  # parallel (collinear hits handled by adjacent wedges)
        # p + s d = e.a + u (e.b - e.a)
        ax, ay = e.a.x - p.x, e.a.y - p.y
        s = (ax * ey - ay * ex) / den
        u = (ax * dy - ay * dx) / den
        if s > 0 and 0 <= u <= 1:
            if best is None or s < best:
                best, best_edge = s, e
    return best, best_edge


def _wedge_cells_once(d: PolygonalDomain, p: Point2, d1, d2) -> list[tuple[Point2, ...]]:
    """Visible cell of the single wedge [d1, d2] from apex p (or nothing)."""
    cr = d1[0] * d2[1] - d1[1] * d2[0]
    if cr <= 0:
        return []
    c = _cache(d)
    dm = (d1[0] + d2[0], d1[1] + d2[1])
    s, e = _ray_nearest_hit(c, p, dm[0], dm[1])
    if s is None:
        return []
    try:
        a = line_line_intersection(e.a, e.b, p, Point2(p.x + d1[0], p.y + d1[1]))
        b = line_line_intersection(e.a, e.b, p, Point2(p.x + d2[0], p.y + d2[1]))
    except ParallelLines:
        return []
    # both rays must actually go forward
    if d1[0] * (a.x - p.x) + d1[1] * (a.y - p.y) <= 0:
        return []
    if d2[0] * (b.x - p.x) + d2[1] * (b.y - p.y) <= 0:
        return []
    if orientation(p, a, b) == 0:
        return []
    cx = (p.x + a.x + b.x) / 3
    cy = (p.y + a.y + b.y) / 3
    if contains_point(d, Point2(cx, cy)) == "outside":
        return []
    return [(p, a, b)]


def _wedge_cells(d: PolygonalDomain, p: Point2,
                 dirs: list[tuple[Fraction, Fraction]]) -> list[tuple[Point2, ...]]:
    cells = []
    for i in range(len(dirs)):
        if len(dirs) < 2:
            break
        d1 = dirs[i]
        d2 = dirs[(i + 1) % len(dirs)]
        cells.extend(_wedge_cells_once(d, p, d1, d2))
    return cells


def _fan_dirs(d: PolygonalDomain, p: Point2) -> list[tuple[Fraction, Fraction]]:
    seen = set()
    dirs = []
    cand = []
    for v in _cache(d).vertices:
        if v != p:
            cand.append((v.x - p.x, v.y - p.y))
    cand.extend([(ONE, ZERO), (ZERO, ONE), (-ONE, ZERO), (ZERO, -ONE)])
    full = []
    for (dx, dy) in cand:
        full.append((dx, dy))
        full.append((-dx, -dy))
    import math
    for (dx, dy) in full:
        g = math.gcd(dx.numerator * dy.denominator, dy.numerator * dx.denominator)
        nx = dx.numerator * dy.denominator
        ny = dy.numerator * dx.denominator
        if g:
            nx, ny = nx // g, ny // g
        key = (nx, ny)
        if key not in seen:
            seen.add(key)
            dirs.append((Fraction(nx), Fraction(ny)))
    return _dir_sort(dirs)


def visibility_region(d: PolygonalDomain, p: Point2) -> Region:
    """Exact visibility polygon of p as a fan of convex (triangle) cells."""
    dirs = _fan_dirs(d, p)
    cells = _wedge_cells(d, p, dirs)
    return Region(kind="free-2d", generation=1, cells=cells)


def _beam_region(d: PolygonalDomain, src: Segment2, w: Point2) -> list[tuple[Point2, ...]]:
    """Cells swept by free sights from points of src continuing through w."""
    # restrict src to the part that sees w
    lit = _lit_from_point(d, w, src)
    cells = []
    for (lo, hi) in lit:
        a = src.point_at(lo)
        b = src.point_at(hi)
        da = (w.x - a.x, w.y - a.y)
        db = (w.x - b.x, w.y - b.y)
        if da == (ZERO, ZERO) or db == (ZERO, ZERO):
            continue
        if da[0] * db[1] - da[1] * db[0] < 0:
            da, db = db, da
        elif da[0] * db[1] - da[1] * db[0] == 0:
            continue  # degenerate beam along one line: measure zero
        # split the wedge at every vertex direction strictly inside it
        inner = []
        for v in _cache(d).vertices:
            if v == w:
                continue
            dv = (v.x - w.x, v.y - w.y)
            if da[0] * dv[1] - da[1] * dv[0] > 0 and dv[0] * db[1] - dv[1] * db[0] > 0:
                inner.append(dv)
        dirs = [da] + _dir_sort_within(da, inner) + [db]
        for i in range(len(dirs) - 1):
            cells.extend(_wedge_cells_once(d, w, dirs[i], dirs[i + 1]))
    return cells


def _dir_sort_within(base, dirs):
    # sort directions ccw starting from base (all within < pi of base)
    import functools as _ft

    def cmp(u, v):
        cr = u[0] * v[1] - u[1] * v[0]
        return 0 if cr == 0 else (-1 if cr > 0 else 1)

    uniq = []
    for u in sorted(dirs, key=_ft.cmp_to_key(cmp)):
        if not uniq or uniq[-1][0] * u[1] - uniq[-1][1] * u[0] != 0:
            uniq.append(u)
    return uniq


# -- interval illumination (the 1D funnel) -------------------------------------

def _interior_ok_from_edge(e: Segment2, other: Point2) -> bool:
    """other lies on the closed interior side of directed boundary edge e."""
    return orientation(e.a, e.b, other) >= 0


def _proper_cross(p: Point2, q: Point2, g: Segment2) -> bool:
    """Sight pq is cut by wall g at a point interior to pq, transversally."""
    o1 = orientation(p, q, g.a)
    o2 = orientation(p, q, g.b)
    o3 = orientation(g.a, g.b, p)
    o4 = orientation(g.a, g.b, q)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def _lit_1d_collinear(d: PolygonalDomain, q: Point2, src: Segment2,
                      span: Interval) -> list[Interval]:
    """Visible part of src from q when q lies on line(src): exact 1D scan."""
    out = []
    ts = {span[0], span[1]}
    for e in _cache(d).edges:
        for t in _segment_params_on(src.a, src.b, e):
            if span[0] <= t <= span[1]:
                ts.add(t)
    ts = sorted(ts)
    for i in range(len(ts) - 1):
        tm = (ts[i] + ts[i + 1]) / 2
        if visible(d, q, src.point_at(tm)):
            out.append((ts[i], ts[i + 1]))
    return merge_intervals(out)


def _visible_part_of_src(d: PolygonalDomain, q: Point2, src: Segment2,
                         span: Interval, occluders: list[Segment2]) -> list[Interval]:
    """Params t within span such that q sees src(t), as closed intervals.

    Exact: proper crossings are subtracted as open stretches; residual
    isolated points are re-verified with the full predicate.
    """
    side = orientation(src.a, src.b, q)
    if side < 0:
        # every sight would arrive at src's exterior side; only contacts at
        # the span endpoints (shared domain vertices) can survive
        out = []
        for t in {span[0], span[1]}:
            if visible(d, q, src.point_at(t)):
                out.append((t, t))
        return sorted(out)
    if side == 0:
        return _lit_1d_collinear(d, q, src, span)
    residual: list[Interval] = [span]
    for g in occluders:
        if not residual:
            break
        crits = set()
        for w in (g.a, g.b):
            if w == q:
                continue
            try:
                x = line_line_intersection(src.a, src.b, q, w)
            except ParallelLines:
                continue
            t = _param_on(src, x)
            if t is not None:
                crits.add(t)
        for t in _segment_params_on(src.a, src.b, g):
            crits.add(t)
        new_res: list[Interval] = []
        for (lo, hi) in residual:
            cs = sorted({lo, hi} | {t for t in crits if lo < t < hi})
            if lo == hi:
                if not _proper_cross(q, src.point_at(lo), g):
                    new_res.append((lo, hi))
                continue
            for i in range(len(cs) - 1):
                tm = (cs[i] + cs[i + 1]) / 2
                if _proper_cross(q, src.point_at(tm), g):
                    # keep the grazing endpoints as isolated candidates
                    new_res.append((cs[i], cs[i]))
                    new_res.append((cs[i + 1], cs[i + 1]))
                else:
                    new_res.append((cs[i], cs[i + 1]))
        residual = merge_intervals(new_res)
    # isolated points must survive a full check (vertex-transversal cases)
    out = []
    for (lo, hi) in residual:
        if lo < hi:
            out.append((lo, hi))
        elif visible(d, q, src.point_at(lo)):
            out.append((lo, hi))
    return merge_intervals(out)


def _param_on(e: Segment2, p: Point2) -> Optional[Fraction]:
    dx, dy = e.b.x - e.a.x, e.b.y - e.a.y
    if dx != 0:
        return (p.x - e.a.x) / dx
    if dy != 0:
        return (p.y - e.a.y) / dy
    return None


def _hull_pts(pts: list[Point2]) -> list[Point2]:
    pts = sorted(set((p.x, p.y) for p in pts))
    pts = [Point2(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hull_intersects_bbox(hull: list[Point2], bb) -> bool:
    hx0 = min(p.x for p in hull)
    hx1 = max(p.x for p in hull)
    hy0 = min(p.y for p in hull)
    hy1 = max(p.y for p in hull)
    return not (bb[0] > hx1 or bb[2] < hx0 or bb[1] > hy1 or bb[3] < hy0)


def _segment_meets_hull(hull: list[Point2], e: Segment2) -> bool:
    if len(hull) == 0:
        return False
    if len(hull) <= 2:
        a = hull[0]
        b = hull[-1]
        if a == b:
            return on_segment(a, e.a, e.b)
        return segments_cross(Segment2(a, b), e, "closed")
    # point of e inside hull, or edge of hull crossing e
    for p in (e.a, e.b):
        inside = True
        for i in range(len(hull)):
            if orientation(hull[i], hull[(i + 1) % len(hull)], p) < 0:
                inside = False
                break
        if inside:
            return True
    for i in range(len(hull)):
        if segments_cross(Segment2(hull[i], hull[(i + 1) % len(hull)]), e, "closed"):
            return True
    return False


def _separating_wall(hull: list[Point2], src_pts, dst_pts, g: Segment2) -> bool:
    """Sound quick reject: wall g cuts every src-dst sight within the hull."""
    s1 = {orientation(g.a, g.b, p) for p in src_pts}
    s2 = {orientation(g.a, g.b, p) for p in dst_pts}
    if not (s1 == {1} and s2 == {-1}) and not (s1 == {-1} and s2 == {1}):
        return False
    # the hull's slice by line(g) must lie within g, so every crossing of
    # line(g) inside the hull happens through the wall itself
    gx, gy = g.b.x - g.a.x, g.b.y - g.a.y

    def gparam(p: Point2) -> Fraction:
        return (p.x - g.a.x) / gx if gx != 0 else (p.y - g.a.y) / gy

    params = []
    k = len(hull)
    for i in range(k):
        a = hull[i]
        b = hull[(i + 1) % k]
        oa = orientation(g.a, g.b, a)
        if oa == 0:
            params.append(gparam(a))
        if a == b:
            continue
        ob = orientation(g.a, g.b, b)
        if oa * ob < 0:
            try:
                params.append(gparam(line_line_intersection(g.a, g.b, a, b)))
            except ParallelLines:
                pass
    if not params:
        return False
    return min(params) >= 0 and max(params) <= 1


def lit_from_interval(d: PolygonalDomain, src_edge: int, iv: Interval,
                      target_edge: int) -> list[Interval]:
    """Part of target weakly visible from the sub-interval iv of src_edge."""
    c = _cache(d)
    e = c.edges[src_edge]
    f = c.edges[target_edge]
    p0, p1 = e.point_at(iv[0]), e.point_at(iv[1])
    hull = _hull_pts([p0, p1, f.a, f.b])
    occluders = []
    for gi, (g, bb) in enumerate(zip(c.edges, c.bboxes)):
        if gi == target_edge:
            continue
        if not _hull_intersects_bbox(hull, bb):
            continue
        if _segment_meets_hull(hull, g):
            occluders.append(g)
    for g in occluders:
        if _separating_wall(hull, [p0, p1], [f.a, f.b], g):
            return []
    # breakpoints on the target from all event-pair lines
    events = [p0, p1]
    for g in occluders:
        events.append(g.a)
        events.append(g.b)
    events = list({(p.x, p.y): p for p in events}.values())
    params = {ZERO, ONE}
    for i in range(len(events)):
        for j in range(i + 1, len(events)):
            a, b = events[i], events[j]
            if a == b:
                continue
            try:
                x = line_line_intersection(f.a, f.b, a, b)
            except ParallelLines:
                continue
            t = _param_on(f, x)
            if t is not None and 0 < t < 1:
                params.add(t)
    ts = sorted(params)
    src = Segment2(p0, p1) if p0 != p1 else None
    occ_f = occluders + [f]
    lit = []
    for i in range(len(ts) - 1):
        tm = (ts[i] + ts[i + 1]) / 2
        q = f.point_at(tm)
        if src is None:
            ok = visible(d, q, p0)
        else:
            ok = _sees_interval(d, q, src, occ_f, f)
        if ok:
            lit.append((ts[i], ts[i + 1]))
    return merge_intervals(lit)


def _sees_interval(d: PolygonalDomain, q: Point2, src: Segment2,
                   occluders: list[Segment2], f: Segment2) -> bool:
    """Does q (interior to edge f) see some point of the src interval?"""
    vis = _visible_part_of_src(d, q, src, (ZERO, ONE), occluders)
    side_q = orientation(src.a, src.b, q)
    for (lo, hi) in vis:
        if lo == hi:
            if side_q <= 0:
                return True  # already fully verified in that branch
            if visible(d, q, src.point_at(lo)):
                return True
            continue
        if side_q == 0:
            return True  # collinear branch pieces are verified
        # positive width: sound up to the departure side at q, which must
        # open into the domain (left of f); cut the piece by line(f)
        oa = orientation(f.a, f.b, src.point_at(lo))
        ob = orientation(f.a, f.b, src.point_at(hi))
        if oa > 0 or ob > 0:
            return True
        # both <= 0: at best a grazing contact along line(f); check one
        if (oa == 0 and visible(d, q, src.point_at(lo))) or \
           (ob == 0 and visible(d, q, src.point_at(hi))):
            return True
    return False


def _lit_from_point(d: PolygonalDomain, p: Point2, target: Segment2) -> list[Interval]:
    """Params on target visible from point p (exact, closed)."""
    c = _cache(d)
    params = {ZERO, ONE}
    for v in c.vertices:
        if v == p:
            continue
        try:
            x = line_line_intersection(target.a, target.b, p, v)
        except ParallelLines:
            continue
        t = _param_on(target, x)
        if t is not None and 0 < t < 1:
            params.add(t)
    ts = sorted(params)
    lit = []
    for i in range(len(ts) - 1):
        tm = (ts[i] + ts[i + 1]) / 2
        if visible(d, p, target.point_at(tm)):
            lit.append((ts[i], ts[i + 1]))
    return merge_intervals(lit)


def point_lit_intervals(d: PolygonalDomain, p: Point2) -> dict[int, list[Interval]]:
    """Lit set on every boundary edge from a point source."""
    c = _cache(d)
    out = {}
    for fi, f in enumerate(c.edges):
        got = _lit_from_point(d, p, f)
        if got:
            out[fi] = got
    return out


# -- staged boundary illumination ----------------------------------------------

def _vertex_closure(c: _Cache, lit: dict[int, list[Interval]]) -> None:
    """A lit interval reaching a shared vertex lights it on all its edges."""
    for ei, ivs in list(lit.items()):
        e = c.edges[ei]
        for (lo, hi) in ivs:
            for t, v in ((lo, None), (hi, None)):
                if t == ZERO:
                    key = (e.a.x, e.a.y)
                elif t == ONE:
                    key = (e.b.x, e.b.y)
                else:
                    continue
                for (fj, tf) in c.vertex_slots.get(key, []):
                    if fj == ei:
                        continue
                    lit[fj] = merge_intervals(lit.get(fj, []) + [(tf, tf)])


def illuminate_boundary(d: PolygonalDomain, w: Region) -> Region:
    """One step of staged illumination of boundary intervals (W -> W')."""
    assert w.kind == "boundary-1d"
    new = {k: list(v) for k, v in w.intervals.items()}
    c = _cache(d)
    for src_idx, ivs in w.intervals.items():
        for iv in ivs:
            for fi in range(len(c.edges)):
                cur = new.get(fi, [])
                if cur == [(ZERO, ONE)]:
                    continue
                got = lit_from_interval(d, src_idx, iv, fi)
                if got:
                    new[fi] = merge_intervals(cur + got)
    _vertex_closure(c, new)
    return Region(kind="boundary-1d", generation=w.generation + 1,
                  intervals=new).canonical()


class BoundaryIllumination:
    """Incremental staged illumination: processes only newly lit intervals."""

    def __init__(self, d: PolygonalDomain, seeds: dict[int, list[Interval]],
                 generation: int = 1):
        self.d = d
        self.cache = _cache(d)
        self.lit = {k: merge_intervals(v) for k, v in seeds.items() if v}
        self.processed: dict[int, list[Interval]] = {}
        self.frontier = {k: list(v) for k, v in self.lit.items()}
        self.generation = generation

    def region(self) -> Region:
        return Region(kind="boundary-1d", generation=self.generation,
                      intervals={k: list(v) for k, v in self.lit.items()}).canonical()

    def step(self) -> bool:
        """Advance one generation.  Returns False when nothing changed."""
        add: dict[int, list[Interval]] = {}
        for src_idx, ivs in sorted(self.frontier.items()):
            for iv in ivs:
                for fi in range(len(self.cache.edges)):
                    if self.lit.get(fi) == [(ZERO, ONE)]:
                        continue
                    got = lit_from_interval(self.d, src_idx, iv, fi)
                    if got:
                        add.setdefault(fi, []).extend(got)
        self.processed = {
            k: merge_intervals(self.processed.get(k, []) + self.frontier.get(k, []))
            for k in set(self.processed) | set(self.frontier)}
        changed = False
        new_frontier: dict[int, list[Interval]] = {}
        for fi, ivs in add.items():
            before = self.lit.get(fi, [])
            after = merge_intervals(before + ivs)
            if after != before:
                changed = True
                self.lit[fi] = after
                fresh = _interval_difference(after, self.processed.get(fi, []))
                if fresh:
                    new_frontier[fi] = fresh
        # vertex closure keeps cross-edge membership consistent; closure
        # points are not new light sources (their sights are already part
        # of the originating interval's expansion)
        closure = {k: list(v) for k, v in self.lit.items()}
        _vertex_closure(self.cache, closure)
        for fi, ivs in closure.items():
            before = self.lit.get(fi, [])
            after = merge_intervals(ivs)
            if after != before:
                self.lit[fi] = after
                self.processed[fi] = merge_intervals(
                    self.processed.get(fi, []) +
                    [iv for iv in after if iv[0] == iv[1]])
        self.frontier = new_frontier
        self.generation += 1
        return changed


def _interval_difference(a: list[Interval], b: list[Interval]) -> list[Interval]:
    """Closed-interval difference a minus the interiors of b."""
    out = []
    for (lo, hi) in a:
        pieces = [(lo, hi)]
        for (blo, bhi) in b:
            nxt = []
            for (plo, phi) in pieces:
                if bhi <= plo or blo >= phi:
                    nxt.append((plo, phi))
                    continue
                if blo > plo:
                    nxt.append((plo, min(blo, phi)))
                if bhi < phi:
                    nxt.append((max(bhi, plo), phi))
            pieces = nxt
        out.extend(p for p in pieces if p[0] <= p[1])
    return merge_intervals(out)


# -- weak visibility --------------------------------------------------------

def weak_visible(d: PolygonalDomain, e: int, f: int) -> bool:
    """True iff edges e and f contain mutually visible points."""
    if e == f:
        return True
    return bool(lit_from_interval(d, e, (ZERO, ONE), f))


def k_link_weak_visible(d: PolygonalDomain, e: int, f: int, k: int) -> bool:
    """True iff some point of f is reachable from e by a k-link path with
    bends on the boundary."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if e == f:
        return True
    eng = BoundaryIllumination(d, {e: [(ZERO, ONE)]})
    for _ in range(k):
        if eng.lit.get(f):
            return True
        if not eng.step():
            break
    return bool(eng.lit.get(f))


# -- free-bend illumination -----------------------------------------------------

def _cell_contains(cell: tuple[Point2, ...], p: Point2) -> bool:
    for i in range(len(cell)):
        if orientation(cell[i], cell[(i + 1) % len(cell)], p) < 0:
            return False
    return True


def _cell_subset(a: tuple[Point2, ...], b: tuple[Point2, ...]) -> bool:
    return all(_cell_contains(b, p) for p in a)


def _cell_bbox(cell):
    xs = [p.x for p in cell]
    ys = [p.y for p in cell]
    return (min(xs), min(ys), max(xs), max(ys))


def _prune_cells(cells: list[tuple[Point2, ...]]) -> list[tuple[Point2, ...]]:
    """Drop cells contained in another cell (pairwise test, bbox-filtered)."""
    cells = list({c: None for c in cells}.keys())
    boxes = [_cell_bbox(c) for c in cells]
    order = sorted(range(len(cells)),
                   key=lambda i: (boxes[i][0] - boxes[i][2]) * (boxes[i][1] - boxes[i][3]))
    alive = [True] * len(cells)
    for oi, i in enumerate(order):
        if not alive[i]:
            continue
        bi = boxes[i]
        for j in order[:oi]:
            if not alive[j] or i == j:
                continue
            bj = boxes[j]
            if bj[0] <= bi[0] and bj[1] <= bi[1] and bj[2] >= bi[2] and bj[3] >= bi[3]:
                if _cell_subset(cells[i], cells[j]):
                    alive[i] = False
                    break
    return [cells[i] for i in range(len(cells)) if alive[i]]


def _fan_cached(d: PolygonalDomain, p: Point2):
    c = _cache(d)
    key = (p.x, p.y)
    got = c.fan_cells.get(key)
    if got is None:
        got = visibility_region(d, p).cells
        c.fan_cells[key] = got
    return got


def _expand_segment(d: PolygonalDomain, a: Point2, b: Point2):
    """Weak visibility cells of segment ab: endpoint fans plus beams
    through every reflex vertex (the only window pins)."""
    c = _cache(d)
    key = (a.x, a.y, b.x, b.y) if (a.x, a.y) <= (b.x, b.y) else (b.x, b.y, a.x, a.y)
    got = c.expand_cells.get(key)
    if got is not None:
        return got
    cells = list(_fan_cached(d, a))
    cells.extend(_fan_cached(d, b))
    sigma = Segment2(a, b)
    for w in c.reflex:
        if w == a or w == b:
            continue
        cells.extend(_beam_region(d, sigma, w))
    cells = _prune_cells(cells)
    c.expand_cells[key] = cells
    return cells


def _strictly_inside(cell, p: Point2) -> bool:
    for i in range(len(cell)):
        if orientation(cell[i], cell[(i + 1) % len(cell)], p) <= 0:
            return False
    return True


def _line_key(a: Point2, b: Point2):
    # normalized (A, B, C) for the line A x + B y = C
    import math
    A = b.y - a.y
    B = a.x - b.x
    C = A * a.x + B * a.y
    den = math.lcm(A.denominator, B.denominator, C.denominator)
    ai, bi, ci = int(A * den), int(B * den), int(C * den)
    g = math.gcd(ai, math.gcd(bi, ci))
    if g:
        ai, bi, ci = ai // g, bi // g, ci // g
    if (ai, bi) < (0, 0) or (ai == 0 and bi < 0) or ai < 0:
        ai, bi, ci = -ai, -bi, -ci
    return (ai, bi, ci)


def illuminate(d: PolygonalDomain, r: Region, cell_cap: int = 10 ** 6) -> Region:
    """Free-bend illumination step: all points seeing some point of r.

    Source segments strictly inside another cell are skipped (their weak
    visibility is subsumed); the rest are merged along their supporting
    lines and expanded via endpoint fans plus reflex-vertex beams.
    """
    assert r.kind == "free-2d"
    cells = list(r.cells)
    big = sorted(r.cells, key=lambda c: _bbox_area(_cell_bbox(c)), reverse=True)[:48]
    by_line: dict[tuple, list] = {}
    for cell in r.cells:
        k = len(cell)
        for i in range(k):
            a, b = cell[i], cell[(i + 1) % k]
            if a == b:
                continue
            if any(cell is not C and _strictly_inside(C, a) and _strictly_inside(C, b)
                   for C in big):
                continue
            key = _line_key(a, b)
            axis = 0 if key[1] != 0 else 1  # parameter axis along the line
            lo = (a.x, a.y)[axis]
            hi = (b.x, b.y)[axis]
            if lo > hi:
                lo, hi = hi, lo
            by_line.setdefault(key, []).append((lo, hi))
    for key, ivs in sorted(by_line.items()):
        axis = 0 if key[1] != 0 else 1
        A, B, C = (Fraction(key[0]), Fraction(key[1]), Fraction(key[2]))
        for lo, hi in merge_intervals(ivs):
            if lo == hi:
                continue
            if axis == 0:
                a = Point2(lo, (C - A * lo) / B)
                b = Point2(hi, (C - A * hi) / B)
            else:
                a = Point2((C - B * lo) / A, lo)
                b = Point2((C - B * hi) / A, hi)
            cells.extend(_expand_segment(d, a, b))
            if len(cells) > cell_cap:
                raise ResourceLimit(f"cell count exceeded {cell_cap}")
    cells = _prune_cells(cells)
    return Region(kind="free-2d", generation=r.generation + 1, cells=cells)


def _bbox_area(bb):
    return (bb[2] - bb[0]) * (bb[3] - bb[1])


def region_contains_point(r: Region, d: PolygonalDomain, p) -> bool:
    if r.kind == "free-2d":
        return any(_cell_contains(cell, p) for cell in r.cells)
    # boundary-1d: p given as (edge index, param)
    ei, t = p
    return any(lo <= t <= hi for lo, hi in r.intervals.get(ei, []))


def point_sees_region(d: PolygonalDomain, q: Point2, r: Region) -> bool:
    """True iff q sees some point of the free-2d region r."""
    fan = visibility_region(d, q)
    for cell in r.cells:
        if _cell_contains(cell, q):
            return True
    for tri in fan.cells:
        for cell in r.cells:
            if _convex_intersect(tri, cell):
                return True
    return False


def _convex_intersect(a: tuple[Point2, ...], b: tuple[Point2, ...]) -> bool:
    """Closed convex polygons intersection test by separating axes."""
    for poly1, poly2 in ((a, b), (b, a)):
        for i in range(len(poly1)):
            p1, p2 = poly1[i], poly1[(i + 1) % len(poly1)]
            if p1 == p2:
                continue
            if all(orientation(p1, p2, q) < 0 for q in poly2):
                return False
    return True


def clip_convex(subject: tuple[Point2, ...], clip: tuple[Point2, ...]):
    """Sutherland-Hodgman clip of convex subject by convex clip (both ccw)."""
    out = list(subject)
    for i in range(len(clip)):
        a, b = clip[i], clip[(i + 1) % len(clip)]
        if a == b:
            continue
        inp = out
        out = []
        if not inp:
            break
        for j in range(len(inp)):
            cur, nxt = inp[j], inp[(j + 1) % len(inp)]
            cin = orientation(a, b, cur) >= 0
            nin = orientation(a, b, nxt) >= 0
            if cin:
                out.append(cur)
            if cin != nin:
                try:
                    out.append(line_line_intersection(a, b, cur, nxt))
                except ParallelLines:
                    pass
        out = [p for k, p in enumerate(out) if p != out[(k + 1) % len(out)] or len(out) == 1]
    return tuple(out)
