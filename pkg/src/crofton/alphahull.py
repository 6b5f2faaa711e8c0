"""Planar alpha-convex hull complement and its line-crossing counter.

The complement of the alpha-convex hull of a planar sample is a union of
open radius-alpha balls (anchored on Delaunay edges and empty of sample
points) and the open outward sides of the convex-hull edges.  A line crosses
the hull boundary exactly at element-boundary points not strictly interior
to any other element, which is what ``crossing_count`` counts.

Delaunay triangulation is built with incremental Bowyer-Watson insertion
inside a super-triangle: points are inserted in Morton order, located by
walking, and the cavity is grown by breadth-first search on the in-circle
predicate.  Co-circular ties are normalized deterministically so that the
kept diagonal contains the lowest vertex index of the quad.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from crofton.geom import Ball, HalfSpace, Line, TANGENT_TOL

_REL_EPS = 1e-12       # relative epsilon for orientation / in-circle signs
_STRICT_TOL = 1e-9     # strict-interior tolerance for complement membership


class DegenerateInputError(ValueError):
    """Input points are collinear or too few for a planar triangulation."""


@dataclass(frozen=True, eq=False)
class Triangulation2:
    """Planar Delaunay triangulation with adjacency and circumcircle data."""

    vertices: np.ndarray       # (n, 2)
    triangles: np.ndarray      # (T, 3) vertex indices, positively oriented
    neighbors: np.ndarray      # (T, 3); entry i is the triangle across the
                               # edge opposite vertex i, or -1 on the hull
    circumcenters: np.ndarray  # (T, 2)
    circumradii: np.ndarray    # (T,)

    def edges(self) -> np.ndarray:
        """Unique undirected edges as a sorted (E, 2) index array."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)


def _orient(ax, ay, bx, by, px, py):
    """Sign of the turn a->b->p with a relative epsilon; +1 = left/ccw."""
    acx = bx - ax
    acy = by - ay
    abx = px - ax
    aby = py - ay
    det = acx * aby - acy * abx
    mag = abs(acx * aby) + abs(acy * abx)
    if det > _REL_EPS * mag:
        return 1
    if det < -_REL_EPS * mag:
        return -1
    return 0


def _in_circle(ax, ay, bx, by, cx, cy, px, py):
    """> 0 iff p is strictly inside the circumcircle of ccw (a, b, c)."""
    adx = ax - px
    ady = ay - py
    bdx = bx - px
    bdy = by - py
    cdx = cx - px
    cdy = cy - py
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    det = (ad * (bdx * cdy - cdx * bdy)
           + bd * (cdx * ady - adx * cdy)
           + cd * (adx * bdy - bdx * ady))
    mag = (ad * (abs(bdx * cdy) + abs(cdx * bdy))
           + bd * (abs(cdx * ady) + abs(adx * cdy))
           + cd * (abs(adx * bdy) + abs(bdx * ady)))
    tol = _REL_EPS * mag
    if det > tol:
        return 1
    if det < -tol:
        return -1
    return 0


def _morton_order(pts: np.ndarray) -> np.ndarray:
    """Spatially coherent insertion order (16-bit Morton code)."""
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span[span == 0] = 1.0
    q = np.clip(((pts - lo) / span) * 65535.0, 0, 65535).astype(np.uint64)

    def spread(x):
        x = (x | (x << 8)) & np.uint64(0x00FF00FF)
        x = (x | (x << 4)) & np.uint64(0x0F0F0F0F)
        x = (x | (x << 2)) & np.uint64(0x33333333)
        x = (x | (x << 1)) & np.uint64(0x55555555)
        return x

    code = (spread(q[:, 0]) << np.uint64(1)) | spread(q[:, 1])
    return np.argsort(code, kind="stable")


class _Mesh:
    """Mutable triangle soup used during incremental construction."""

    def __init__(self, vx, vy):
        self.vx = vx
        self.vy = vy
        self.tri: list = []    # [a, b, c] or None when freed
        self.nbr: list = []    # [t0, t1, t2]; entry i across edge opposite vertex i

    def add(self, verts, nbrs) -> int:
        self.tri.append(verts)
        self.nbr.append(nbrs)
        return len(self.tri) - 1

    def locate(self, px, py, start: int) -> int:
        vx, vy, tri, nbr = self.vx, self.vy, self.tri, self.nbr
        t = start
        for _ in range(4 * len(tri) + 16):
            a, b, c = tri[t]
            if _orient(vx[b], vy[b], vx[c], vy[c], px, py) < 0:
                t = nbr[t][0]
            elif _orient(vx[c], vy[c], vx[a], vy[a], px, py) < 0:
                t = nbr[t][1]
            elif _orient(vx[a], vy[a], vx[b], vy[b], px, py) < 0:
                t = nbr[t][2]
            else:
                return t
        # fallback for a degenerate walk cycle
        for t, tv in enumerate(self.tri):
            if tv is None:
                continue
            a, b, c = tv
            if (_orient(vx[a], vy[a], vx[b], vy[b], px, py) >= 0
                    and _orient(vx[b], vy[b], vx[c], vy[c], px, py) >= 0
                    and _orient(vx[c], vy[c], vx[a], vy[a], px, py) >= 0):
                return t
        raise RuntimeError("point location failed")

    def in_circle_of(self, t: int, px, py) -> int:
        a, b, c = self.tri[t]
        vx, vy = self.vx, self.vy
        return _in_circle(vx[a], vy[a], vx[b], vy[b], vx[c], vy[c], px, py)

    def insert(self, p: int, start: int) -> int:
        """Bowyer-Watson insertion of vertex p; returns a new triangle id."""
        vx, vy, tri, nbr = self.vx, self.vy, self.tri, self.nbr
        px, py = vx[p], vy[p]
        t0 = self.locate(px, py, start)
        # grow the cavity of circumcircle-violating triangles
        bad = {t0}
        stack = [t0]
        while stack:
            t = stack.pop()
            for u in nbr[t]:
                if u >= 0 and u not in bad and self.in_circle_of(u, px, py) > 0:
                    bad.add(u)
                    stack.append(u)
        # directed boundary edges (u, v) with the cavity on their left
        boundary = []
        for t in bad:
            a, b, c = tri[t]
            for i, (u, v) in enumerate(((b, c), (c, a), (a, b))):
                out = nbr[t][i]
                if out not in bad:
                    boundary.append((u, v, out))
        for t in bad:
            tri[t] = None
            nbr[t] = None
        start_of = {}
        end_of = {}
        created = []
        for u, v, out in boundary:
            t = self.add([u, v, p], [-1, -1, out])
            if out >= 0:
                # the outer triangle's entry across (u, v) sits opposite its
                # third vertex; an outer triangle can border the cavity on two
                # edges, so matching by membership in `bad` would be ambiguous
                tv = tri[out]
                for j in range(3):
                    if tv[j] != u and tv[j] != v:
                        nbr[out][j] = t
                        break
            start_of[u] = t
            end_of[v] = t
            created.append((t, u, v))
        for t, u, v in created:
            self.nbr[t][0] = start_of[v]   # across (v, p)
            self.nbr[t][1] = end_of[u]     # across (p, u)
        return created[0][0]


def _normalize_cocircular(tri, nbr, vx, vy, max_passes: int = 3) -> None:
    """Flip co-circular quads so the kept diagonal holds the lowest index."""
    for _ in range(max_passes):
        changed = False
        for t in range(len(tri)):
            if tri[t] is None:
                continue
            for i_t in range(3):
                u = nbr[t][i_t]
                if u <= t or tri[u] is None:
                    continue
                r = tri[t][i_t]
                p = tri[t][(i_t + 1) % 3]
                q = tri[t][(i_t + 2) % 3]
                i_u = next(j for j in range(3) if tri[u][j] not in (p, q))
                s = tri[u][i_u]
                if _in_circle(vx[r], vy[r], vx[p], vy[p], vx[q], vy[q],
                              vx[s], vy[s]) != 0:
                    continue
                m = min(p, q, r, s)
                if m in (p, q):
                    continue
                # flip only strictly convex quads (r, p, s, q)
                if (_orient(vx[r], vy[r], vx[p], vy[p], vx[s], vy[s]) <= 0
                        or _orient(vx[s], vy[s], vx[q], vy[q], vx[r], vy[r]) <= 0):
                    continue
                A = nbr[t][(i_t + 1) % 3]
                B = nbr[t][(i_t + 2) % 3]
                C = nbr[u][(i_u + 1) % 3]
                D = nbr[u][(i_u + 2) % 3]
                tri[t] = [r, p, s]
                nbr[t] = [C, u, B]
                tri[u] = [r, s, q]
                nbr[u] = [D, A, t]
                if A >= 0:
                    nbr[A][nbr[A].index(t)] = u
                if C >= 0:
                    nbr[C][nbr[C].index(u)] = t
                changed = True
        if not changed:
            return


def delaunay2(points) -> Triangulation2:
    """Delaunay triangulation of a planar point set.

    Raises DegenerateInputError for fewer than 3 distinct points or an
    all-collinear input.  Exact duplicate points are inserted once.
    """
    pts = np.asarray(points, dtype=float)
    if hasattr(points, "points"):
        pts = np.asarray(points.points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"need (n, 2) points, got {pts.shape}")
    n = len(pts)
    if n < 3:
        raise DegenerateInputError("need at least 3 points")

    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    center = 0.5 * (lo + hi)
    m = 64.0 * max(float((hi - lo).max()), 1.0)
    sup = np.array([[center[0] - 3 * m, center[1] - 2 * m],
                    [center[0] + 3 * m, center[1] - 2 * m],
                    [center[0], center[1] + 3 * m]])
    allpts = np.vstack([pts, sup])
    vx = allpts[:, 0].tolist()
    vy = allpts[:, 1].tolist()

    mesh = _Mesh(vx, vy)
    mesh.add([n, n + 1, n + 2], [-1, -1, -1])
    last = 0
    seen = set()
    for p in _morton_order(pts):
        key = (vx[p], vy[p])
        if key in seen:
            continue
        seen.add(key)
        last = mesh.insert(int(p), last)

    keep = [t for t, tv in enumerate(mesh.tri)
            if tv is not None and max(tv) < n]
    if not keep:
        raise DegenerateInputError("points are collinear")
    remap = {t: i for i, t in enumerate(keep)}
    tri = [list(mesh.tri[t]) for t in keep]
    nbr = [[remap.get(u, -1) if u is not None and u >= 0 else -1
            for u in mesh.nbr[t]] for t in keep]

    _normalize_cocircular(tri, nbr, vx, vy)

    triangles = np.array(tri, dtype=np.int64)
    neighbors = np.array(nbr, dtype=np.int64)
    a = pts[triangles[:, 0]]
    b = pts[triangles[:, 1]]
    c = pts[triangles[:, 2]]
    ab = b - a
    ac = c - a
    den = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    ab2 = np.einsum("ij,ij->i", ab, ab)
    ac2 = np.einsum("ij,ij->i", ac, ac)
    with np.errstate(divide="ignore", invalid="ignore"):
        ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2) / den
        uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2) / den
    centers = a + np.column_stack((ux, uy))
    radii = np.hypot(ux, uy)
    return Triangulation2(vertices=pts, triangles=triangles, neighbors=neighbors,
                          circumcenters=centers, circumradii=radii)


def hull_indices(points) -> np.ndarray:
    """Convex hull vertex indices in counterclockwise order (monotone chain)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateInputError("need at least 3 planar points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def chain(seq):
        out: list[int] = []
        for idx in seq:
            while len(out) >= 2:
                a, b = pts[out[-2]], pts[out[-1]]
                if _orient(a[0], a[1], b[0], b[1], pts[idx][0], pts[idx][1]) <= 0:
                    out.pop()
                else:
                    break
            out.append(int(idx))
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInputError("points are collinear")
    return np.array(hull, dtype=np.int64)


def convex_hull2(points) -> list[HalfSpace]:
    """One outward half-space per hull edge; their intersection is the hull."""
    pts = np.asarray(points, dtype=float)
    if hasattr(points, "points"):
        pts = np.asarray(points.points, dtype=float)
    hull = hull_indices(pts)
    out = []
    for i in range(len(hull)):
        p = pts[hull[i]]
        q = pts[hull[(i + 1) % len(hull)]]
        e = q - p
        nrm = np.array([e[1], -e[0]]) / float(np.linalg.norm(e))
        out.append(HalfSpace(normal=nrm, offset=float(np.dot(nrm, p))))
    return out


@dataclass(frozen=True, eq=False)
class ComplementElements:
    """Finite element list whose union covers the alpha-hull complement
    near the sample, plus the sample itself for depth queries.

    Each ball has radius ``alpha`` and an open interior free of sample
    points; each half-space is the sample-free outward side of a hull edge
    (stored in the <= convention of geom.HalfSpace).  The element union can
    under-cover complement regions farther than alpha from every sample
    point (for example the middle of a large hole); the crossing counter
    handles those through a nearest-sample depth test instead.
    """

    balls: tuple
    halfspaces: tuple
    alpha: float
    sample: np.ndarray
    ball_centers: np.ndarray = field(init=False)
    hs_normals: np.ndarray = field(init=False)
    hs_offsets: np.ndarray = field(init=False)
    _tree: cKDTree = field(init=False, repr=False)

    def __post_init__(self):
        sample = np.array(self.sample, dtype=float)
        sample.setflags(write=False)
        object.__setattr__(self, "sample", sample)
        object.__setattr__(self, "_tree", cKDTree(sample))
        centers = (np.array([b.center for b in self.balls], dtype=float)
                   if self.balls else np.empty((0, 2)))
        normals = (np.array([h.normal for h in self.halfspaces], dtype=float)
                   if self.halfspaces else np.empty((0, 2)))
        offsets = np.array([h.offset for h in self.halfspaces], dtype=float)
        for name, arr in (("ball_centers", centers), ("hs_normals", normals),
                          ("hs_offsets", offsets)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def sample_depth(self, pts: np.ndarray) -> np.ndarray:
        """Distance from each query point to the nearest sample point."""
        d, _ = self._tree.query(np.atleast_2d(pts), k=1, workers=-1)
        return d

    def covers_strictly(self, pts: np.ndarray) -> np.ndarray:
        """True where a point is strictly inside some complement element."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        tol = _STRICT_TOL * max(1.0, self.alpha)
        out = np.zeros(len(pts), dtype=bool)
        if len(self.ball_centers):
            d2 = ((pts[:, None, :] - self.ball_centers[None, :, :]) ** 2).sum(-1)
            out |= (d2 < (self.alpha - tol) ** 2).any(axis=1)
        if len(self.hs_normals):
            proj = pts @ self.hs_normals.T
            out |= (proj < self.hs_offsets[None, :] - _STRICT_TOL).any(axis=1)
        return out


def alpha_complement2(points, alpha: float) -> ComplementElements:
    """Element list covering the complement of the alpha-convex hull.

    Candidate balls of radius alpha are anchored on every Delaunay edge not
    longer than 2*alpha (two per edge); a candidate survives iff its open
    interior holds no sample point.  Hull half-spaces cover escapes to
    infinity.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    pts = np.asarray(points, dtype=float)
    if hasattr(points, "points"):
        pts = np.asarray(points.points, dtype=float)
    tri = delaunay2(pts)
    edges = tri.edges()
    p = pts[edges[:, 0]]
    q = pts[edges[:, 1]]
    d = q - p
    len2 = np.einsum("ij,ij->i", d, d)
    ok = len2 <= 4.0 * alpha * alpha
    p, q, d, len2 = p[ok], q[ok], d[ok], len2[ok]
    lengths = np.sqrt(len2)
    h = np.sqrt(np.maximum(alpha * alpha - 0.25 * len2, 0.0))
    perp = np.column_stack((-d[:, 1], d[:, 0])) / lengths[:, None]
    mid = 0.5 * (p + q)
    candidates = np.concatenate([mid + h[:, None] * perp, mid - h[:, None] * perp])

    tol = _STRICT_TOL * max(1.0, alpha)
    if len(candidates):
        nn, _ = cKDTree(pts).query(candidates, k=1, workers=-1)
        keep = nn >= alpha - tol
        retained = candidates[keep]
    else:
        retained = candidates
    balls = tuple(Ball(center=c, radius=alpha) for c in retained)

    halfspaces = tuple(HalfSpace(normal=-hs.normal, offset=-hs.offset)
                       for hs in convex_hull2(pts))
    return ComplementElements(balls=balls, halfspaces=halfspaces,
                              alpha=float(alpha), sample=pts)


def crossing_count(line: Line, comp: ComplementElements) -> int:
    """Number of hull-boundary crossings of a line.

    Collects the boundary crossings of every complement element and keeps
    those not strictly interior to any element; coincident parameters within
    1e-9 are counted once.  A candidate farther than alpha from every sample
    point is strictly inside the complement (the alpha-ball centered at the
    candidate itself contains it and is empty), so it is suppressed even
    when no listed element covers it; every true hull-boundary point lies
    within alpha of the sample, so this never drops a real crossing.
    """
    base = line.base_point
    theta = line.theta
    lams = []
    alpha = comp.alpha
    if len(comp.ball_centers):
        w = comp.ball_centers - base
        t = w @ theta
        disc = t * t - np.einsum("ij,ij->i", w, w) + alpha * alpha
        ok = disc > TANGENT_TOL * alpha * alpha
        hh = np.sqrt(disc[ok])
        tt = t[ok]
        lams.extend((tt - hh).tolist())
        lams.extend((tt + hh).tolist())
    if len(comp.hs_normals):
        slope = comp.hs_normals @ theta
        level = comp.hs_normals @ base
        ok = np.abs(slope) > 1e-12
        lams.extend(((comp.hs_offsets[ok] - level[ok]) / slope[ok]).tolist())
    if not lams:
        return 0
    lams = np.array(lams, dtype=float)
    z = base[None, :] + lams[:, None] * theta[None, :]
    keep = ~comp.covers_strictly(z)
    keep &= comp.sample_depth(z) <= alpha * (1.0 + _STRICT_TOL)
    kept = np.sort(lams[keep])
    if len(kept) == 0:
        return 0
    distinct = 1 + int(np.count_nonzero(np.diff(kept) > 1e-9))
    return distinct
