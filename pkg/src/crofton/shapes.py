"""Ground-truth test bodies with closed-form boundary measures and oracles.

Every shape knows its exact boundary measure, an exact line-crossing count
derived from chord geometry (circles, arcs, segments, spheres, and the torus
quartic), a nearest-boundary projection valid inside the rolling tube, and a
uniform rejection sampler.  The 2D bodies are assembled from circular-arc and
segment boundary pieces so counting and projection share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from crofton.geom import Line

TANGENT_TOL = 1e-9  # refusal tolerance for tangency / junction proximity

_TWO_PI = 2.0 * math.pi


class TangentLineError(RuntimeError):
    """Line is tangent to the boundary within tolerance; caller should resample."""


class ProjectionError(ValueError):
    """Nearest-boundary projection is not unique for this point."""


@dataclass(frozen=True)
class PointCloud:
    """A finite sample in R^d with a provenance tag (iid | rbm | file)."""

    dimension: int
    points: np.ndarray
    provenance: str = "iid"

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dimension:
            raise ValueError(f"points must be (n, {self.dimension}), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def _circle_roots(center: np.ndarray, radius: float, line: Line):
    """Line parameters on a circle/sphere |x - c| = r, or None if tangent.

    Raises TangentLineError when the discriminant sits within the refusal
    band around zero (the line grazes the circle).
    """
    w = center - line.base_point
    t = float(np.dot(w, line.theta))
    disc = t * t - float(np.dot(w, w)) + radius * radius
    tol = 2.0 * radius * TANGENT_TOL * max(1.0, radius)
    if abs(disc) <= tol:
        return "tangent"
    if disc < 0:
        return None
    h = math.sqrt(disc)
    return (t - h, t + h)


@dataclass(frozen=True, eq=False)
class _Arc:
    """Circular boundary piece from angle a0 to a1 (ccw, a1 - a0 <= 2*pi)."""

    center: np.ndarray
    radius: float
    a0: float
    a1: float

    @property
    def full(self) -> bool:
        return self.a1 - self.a0 >= _TWO_PI - 1e-12

    def _on_arc(self, phi: float) -> bool | None:
        """True/False membership; None signals a junction graze (refuse)."""
        if self.full:
            return True
        span = self.a1 - self.a0
        rel = (phi - self.a0) % _TWO_PI
        margin = TANGENT_TOL / self.radius
        if rel <= margin or abs(rel - span) <= margin or abs(rel - _TWO_PI) <= margin:
            return None
        return rel < span

    def crossings(self, line: Line):
        roots = _circle_roots(self.center, self.radius, line)
        if roots == "tangent":
            t = float(np.dot(self.center - line.base_point, line.theta))
            z = line.point(t)
            phi = math.atan2(z[1] - self.center[1], z[0] - self.center[0])
            if self.full or self._on_arc(phi) is not False:
                raise TangentLineError("line grazes a boundary arc")
            return []
        if roots is None:
            return []
        out = []
        for lam in roots:
            z = line.point(lam)
            phi = math.atan2(z[1] - self.center[1], z[0] - self.center[0])
            hit = self._on_arc(phi)
            if hit is None:
                raise TangentLineError("crossing at an arc junction")
            if hit:
                u = (z - self.center) / self.radius
                out.append((lam, abs(float(np.dot(u, line.theta)))))
        return out

    def nearest(self, x: np.ndarray):
        v = x - self.center
        rho = float(np.hypot(v[0], v[1]))
        if rho < 1e-30:
            raise ProjectionError("point coincides with an arc center")
        phi = math.atan2(v[1], v[0])
        if not self.full:
            span = self.a1 - self.a0
            rel = (phi - self.a0) % _TWO_PI
            if rel > span:
                # clamp to the closer endpoint
                rel = 0.0 if (rel - span) > (_TWO_PI - rel) else span
            phi = self.a0 + rel
        p = self.center + self.radius * np.array([math.cos(phi), math.sin(phi)])
        return float(np.linalg.norm(x - p)), p


@dataclass(frozen=True, eq=False)
class _Segment:
    """Straight boundary piece between two endpoints."""

    p0: np.ndarray
    p1: np.ndarray

    def crossings(self, line: Line):
        e = self.p1 - self.p0
        length = float(np.linalg.norm(e))
        eu = e / length
        det = float(line.theta[0] * eu[1] - line.theta[1] * eu[0])
        w = self.p0 - line.base_point
        if abs(det) <= TANGENT_TOL:
            off = float(w[0] * line.theta[1] - w[1] * line.theta[0])
            if abs(off) <= TANGENT_TOL:
                raise TangentLineError("line runs along a boundary segment")
            return []
        lam = float(w[0] * eu[1] - w[1] * eu[0]) / det
        u = float(w[0] * line.theta[1] - w[1] * line.theta[0]) / det
        if abs(u) <= TANGENT_TOL or abs(u - length) <= TANGENT_TOL:
            raise TangentLineError("crossing at a segment endpoint")
        if 0.0 < u < length:
            return [(lam, abs(det))]
        return []

    def nearest(self, x: np.ndarray):
        e = self.p1 - self.p0
        length2 = float(np.dot(e, e))
        u = float(np.dot(x - self.p0, e)) / length2
        u = min(max(u, 0.0), 1.0)
        p = self.p0 + u * e
        return float(np.linalg.norm(x - p)), p


class Shape:
    """Base class: a compact body with exact geometric oracles."""

    dim: int
    kind: str
    rolling_alpha: float    # min of the two rolling radii below
    inside_rolling: float   # rolling-ball radius along the inside of the boundary
    outside_rolling: float  # rolling-ball radius along the outside (inf if convex)
    bound_radius: float     # max |x| over the body
    max_crossings: int      # largest possible line-boundary crossing count

    def params(self) -> dict:
        raise NotImplementedError

    def boundary_measure(self) -> float:
        raise NotImplementedError

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x) -> bool:
        return bool(self.contains_many(np.asarray(x, dtype=float)[None, :])[0])

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def interior_point(self) -> np.ndarray:
        raise NotImplementedError

    def _crossings(self, line: Line) -> list[tuple[float, float]]:
        """(lam, |<theta, normal>|) pairs, unsorted; raises TangentLineError."""
        raise NotImplementedError

    def line_crossings(self, line: Line) -> np.ndarray:
        """Sorted crossing parameters of the line with the boundary."""
        lams = sorted(lam for lam, _ in self._crossings(line))
        return np.array(lams, dtype=float)

    def crossing_transversality(self, line: Line) -> np.ndarray:
        """|<direction, boundary normal>| at each crossing (0 = grazing)."""
        return np.array(sorted(t for _, t in self._crossings(line)), dtype=float)

    def true_line_count(self, line: Line) -> int:
        return len(self._crossings(line))

    def project_to_boundary(self, x) -> np.ndarray:
        raise NotImplementedError

    def sample(self, n: int, seed: int) -> PointCloud:
        """n iid uniform draws via rejection from the bounding box."""
        if n < 1:
            raise ValueError("need n >= 1")
        lo, hi = self.bounding_box()
        rng = np.random.default_rng(seed)
        out = []
        got = 0
        batch = max(2048, n)
        empty_batches = 0
        while got < n:
            cand = rng.uniform(lo, hi, size=(batch, self.dim))
            hit = cand[self.contains_many(cand)]
            if len(hit) == 0:
                empty_batches += 1
                if empty_batches > 64:
                    raise ValueError(f"shape {self.kind} has degenerate volume")
                continue
            out.append(hit)
            got += len(hit)
        pts = np.concatenate(out)[:n]
        return PointCloud(self.dim, pts, provenance="iid")


class _PieceShape2(Shape):
    """2D body whose boundary is a closed chain of arcs and segments."""

    dim = 2
    _pieces: tuple

    def _crossings(self, line: Line):
        out = []
        for piece in self._pieces:
            out.extend(piece.crossings(line))
        return out

    def project_to_boundary(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        best = min((piece.nearest(x) for piece in self._pieces), key=lambda t: t[0])
        bound = self.inside_rolling if self.contains(x) else self.outside_rolling
        if best[0] >= bound:
            raise ProjectionError(
                f"point at distance {best[0]:.3g} from the boundary exceeds the "
                f"rolling radius {bound:.3g}; projection may not be unique")
        return best[1]


class Disk(_PieceShape2):
    """Disk of radius r centered at the origin."""

    kind = "disk"
    max_crossings = 2

    def __init__(self, r: float = 1.0):
        if not r > 0:
            raise ValueError("r must be positive")
        self.r = float(r)
        self.inside_rolling = self.r
        self.outside_rolling = math.inf
        self.rolling_alpha = self.r
        self.bound_radius = self.r
        self._pieces = (_Arc(np.zeros(2), self.r, 0.0, _TWO_PI),)

    def params(self):
        return {"r": self.r}

    def boundary_measure(self) -> float:
        return _TWO_PI * self.r

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        return np.einsum("ij,ij->i", pts, pts) <= self.r * self.r

    def bounding_box(self):
        r = np.array([self.r, self.r])
        return -r, r

    def interior_point(self):
        return np.zeros(2)


class Annulus(_PieceShape2):
    """Ring r1 <= |x| <= r2."""

    kind = "annulus"
    max_crossings = 4

    def __init__(self, r1: float = 1.0, r2: float = 2.0):
        if not 0 < r1 < r2:
            raise ValueError("need 0 < r1 < r2")
        self.r1, self.r2 = float(r1), float(r2)
        self.inside_rolling = 0.5 * (self.r2 - self.r1)
        self.outside_rolling = self.r1
        self.rolling_alpha = min(self.inside_rolling, self.outside_rolling)
        self.bound_radius = self.r2
        self._pieces = (_Arc(np.zeros(2), self.r1, 0.0, _TWO_PI),
                        _Arc(np.zeros(2), self.r2, 0.0, _TWO_PI))

    def params(self):
        return {"r1": self.r1, "r2": self.r2}

    def boundary_measure(self) -> float:
        return _TWO_PI * (self.r1 + self.r2)

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        d2 = np.einsum("ij,ij->i", pts, pts)
        return (d2 >= self.r1 * self.r1) & (d2 <= self.r2 * self.r2)

    def bounding_box(self):
        r = np.array([self.r2, self.r2])
        return -r, r

    def interior_point(self):
        return np.array([0.5 * (self.r1 + self.r2), 0.0])


class RoundedSquare(_PieceShape2):
    """Square of side s grown by a disk of radius rho (rounded corners)."""

    kind = "rounded-square"
    max_crossings = 2

    def __init__(self, side: float = 2.0, corner: float = 0.5):
        if not (side > 0 and corner > 0):
            raise ValueError("side and corner must be positive")
        self.side, self.corner = float(side), float(corner)
        h, rho = 0.5 * self.side, self.corner
        self.inside_rolling = rho
        self.outside_rolling = math.inf
        self.rolling_alpha = rho
        self.bound_radius = math.hypot(h, h) + rho
        corners = [np.array([h, h]), np.array([-h, h]),
                   np.array([-h, -h]), np.array([h, -h])]
        segs = [
            _Segment(np.array([h, h + rho]), np.array([-h, h + rho])),
            _Segment(np.array([-h - rho, h]), np.array([-h - rho, -h])),
            _Segment(np.array([-h, -h - rho]), np.array([h, -h - rho])),
            _Segment(np.array([h + rho, -h]), np.array([h + rho, h])),
        ]
        arcs = [_Arc(c, rho, k * math.pi / 2, (k + 1) * math.pi / 2)
                for k, c in enumerate(corners)]
        self._pieces = tuple(segs + arcs)

    def params(self):
        return {"side": self.side, "corner": self.corner}

    def boundary_measure(self) -> float:
        return 4.0 * self.side + _TWO_PI * self.corner

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        h = 0.5 * self.side
        dx = np.maximum(np.abs(pts[:, 0]) - h, 0.0)
        dy = np.maximum(np.abs(pts[:, 1]) - h, 0.0)
        return dx * dx + dy * dy <= self.corner * self.corner

    def bounding_box(self):
        r = 0.5 * self.side + self.corner
        v = np.array([r, r])
        return -v, v

    def interior_point(self):
        return np.zeros(2)


class Peanut(_PieceShape2):
    """Two unit disks at (+-c, 0) joined by concave bridge arcs of radius b.

    The bridge circles sit at (0, +-h) with h = sqrt((1+b)^2 - c^2), tangent
    to both unit circles; the boundary is four arcs of circle.  Perimeter in
    closed form with psi = atan2(h, c):

        4*(pi - psi) + 2*b*(pi - 2*psi)
    """

    kind = "peanut"
    max_crossings = 4

    def __init__(self, c: float = 0.9, bridge: float = 1.0):
        if not (0 < c < 1.0 + bridge):
            raise ValueError("need 0 < c < 1 + bridge")
        if not bridge > 0:
            raise ValueError("bridge radius must be positive")
        self.c, self.bridge = float(c), float(bridge)
        h = math.sqrt((1.0 + self.bridge) ** 2 - self.c ** 2)
        if h <= self.bridge:
            raise ValueError("bridge circle reaches the axis; neck would vanish")
        self.h = h
        self.neck_halfwidth = h - self.bridge
        self.x_tangent = self.c * self.bridge / (1.0 + self.bridge)
        self.inside_rolling = min(1.0, self.neck_halfwidth)
        self.outside_rolling = self.bridge
        self.rolling_alpha = min(self.inside_rolling, self.outside_rolling)
        self.bound_radius = self.c + 1.0
        phi = math.atan2(h, -self.c)    # lobe arc half-angle, in (pi/2, pi)
        right = _Arc(np.array([self.c, 0.0]), 1.0, -phi, phi)
        left = _Arc(np.array([-self.c, 0.0]), 1.0, math.pi - phi, math.pi + phi)
        # bridge arcs span between the two tangency directions (+-c, -h)
        a_right = math.atan2(-h, self.c)
        a_left = math.atan2(-h, -self.c)
        top = _Arc(np.array([0.0, h]), self.bridge, a_left, a_right)
        bottom = _Arc(np.array([0.0, -h]), self.bridge, -a_right, -a_left)
        self._pieces = (right, left, top, bottom)

    def params(self):
        return {"c": self.c, "bridge": self.bridge}

    def boundary_measure(self) -> float:
        psi = math.atan2(self.h, self.c)
        return 4.0 * (math.pi - psi) + 2.0 * self.bridge * (math.pi - 2.0 * psi)

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        x, y = pts[:, 0], pts[:, 1]
        in_right = (x - self.c) ** 2 + y * y <= 1.0
        in_left = (x + self.c) ** 2 + y * y <= 1.0
        with np.errstate(invalid="ignore"):
            cap = self.h - np.sqrt(np.maximum(self.bridge ** 2 - x * x, 0.0))
        in_neck = (np.abs(x) <= self.x_tangent) & (np.abs(y) <= cap)
        return in_right | in_left | in_neck

    def bounding_box(self):
        return (np.array([-self.c - 1.0, -1.0]), np.array([self.c + 1.0, 1.0]))

    def interior_point(self):
        return np.array([self.c, 0.0])


class Ball3(Shape):
    """Solid ball of radius r in R^3."""

    dim = 3
    kind = "ball3"
    max_crossings = 2

    def __init__(self, r: float = 1.0):
        if not r > 0:
            raise ValueError("r must be positive")
        self.r = float(r)
        self.inside_rolling = self.r
        self.outside_rolling = math.inf
        self.rolling_alpha = self.r
        self.bound_radius = self.r

    def params(self):
        return {"r": self.r}

    def boundary_measure(self) -> float:
        return 4.0 * math.pi * self.r * self.r

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        return np.einsum("ij,ij->i", pts, pts) <= self.r * self.r

    def bounding_box(self):
        r = np.full(3, self.r)
        return -r, r

    def interior_point(self):
        return np.zeros(3)

    def _crossings(self, line: Line):
        roots = _circle_roots(np.zeros(3), self.r, line)
        if roots == "tangent":
            raise TangentLineError("line grazes the sphere")
        if roots is None:
            return []
        out = []
        for lam in roots:
            z = line.point(lam)
            out.append((lam, abs(float(np.dot(z, line.theta))) / self.r))
        return out

    def project_to_boundary(self, x):
        x = np.asarray(x, dtype=float)
        nrm = float(np.linalg.norm(x))
        if nrm < 1e-12:
            raise ProjectionError("projection from the center is not unique")
        return (self.r / nrm) * x


class Shell3(Shape):
    """Spherical shell r1 <= |x| <= r2 in R^3."""

    dim = 3
    kind = "shell3"
    max_crossings = 4

    def __init__(self, r1: float = 1.0, r2: float = 2.0):
        if not 0 < r1 < r2:
            raise ValueError("need 0 < r1 < r2")
        self.r1, self.r2 = float(r1), float(r2)
        self.inside_rolling = 0.5 * (self.r2 - self.r1)
        self.outside_rolling = self.r1
        self.rolling_alpha = min(self.inside_rolling, self.outside_rolling)
        self.bound_radius = self.r2

    def params(self):
        return {"r1": self.r1, "r2": self.r2}

    def boundary_measure(self) -> float:
        return 4.0 * math.pi * (self.r1 ** 2 + self.r2 ** 2)

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        d2 = np.einsum("ij,ij->i", pts, pts)
        return (d2 >= self.r1 ** 2) & (d2 <= self.r2 ** 2)

    def bounding_box(self):
        r = np.full(3, self.r2)
        return -r, r

    def interior_point(self):
        return np.array([0.5 * (self.r1 + self.r2), 0.0, 0.0])

    def _crossings(self, line: Line):
        out = []
        for r in (self.r1, self.r2):
            roots = _circle_roots(np.zeros(3), r, line)
            if roots == "tangent":
                raise TangentLineError("line grazes a shell sphere")
            if roots is None:
                continue
            for lam in roots:
                z = line.point(lam)
                out.append((lam, abs(float(np.dot(z, line.theta))) / r))
        return out

    def project_to_boundary(self, x):
        x = np.asarray(x, dtype=float)
        nrm = float(np.linalg.norm(x))
        if nrm < 1e-12:
            raise ProjectionError("projection from the center is not unique")
        mid = 0.5 * (self.r1 + self.r2)
        target = self.r2 if nrm >= mid else self.r1
        bound = self.inside_rolling if self.contains(x) else self.outside_rolling
        if nrm > self.r2:
            bound = math.inf  # outside the outer sphere projection is unique
        if abs(nrm - target) >= bound:
            raise ProjectionError("point is too far from the shell boundary")
        return (target / nrm) * x


class Torus(Shape):
    """Torus of revolution about the z-axis: tube radius r on a circle of radius R.

    Implicit form f(x) = (|x|^2 + R^2 - r^2)^2 - 4 R^2 (x1^2 + x2^2) = 0; a
    line meets the surface where a quartic in the parameter vanishes, so the
    crossing count is the number of real quartic roots.
    """

    dim = 3
    kind = "torus"
    max_crossings = 4

    def __init__(self, R: float = 2.0, r: float = 0.5):
        if not 0 < r < R:
            raise ValueError("need 0 < r < R")
        self.R, self.r = float(R), float(r)
        self.inside_rolling = self.r
        self.outside_rolling = self.R - self.r
        self.rolling_alpha = min(self.inside_rolling, self.outside_rolling)
        self.bound_radius = self.R + self.r

    def params(self):
        return {"R": self.R, "r": self.r}

    def boundary_measure(self) -> float:
        return 4.0 * math.pi ** 2 * self.R * self.r

    def contains_many(self, pts):
        pts = np.asarray(pts, dtype=float)
        rho = np.hypot(pts[:, 0], pts[:, 1])
        return (rho - self.R) ** 2 + pts[:, 2] ** 2 <= self.r * self.r

    def bounding_box(self):
        out = self.R + self.r
        return (np.array([-out, -out, -self.r]), np.array([out, out, self.r]))

    def interior_point(self):
        return np.array([self.R, 0.0, 0.0])

    def _quartic(self, line: Line) -> np.ndarray:
        """Coefficients (highest first) of the surface quartic along the line."""
        p, t = line.base_point, line.theta
        b = 2.0 * float(np.dot(p, t))
        c = float(np.dot(p, p)) + self.R ** 2 - self.r ** 2
        # u(lam) = lam^2 + b lam + c ;  q(lam) = planar |x|^2 quadratic
        qa = t[0] ** 2 + t[1] ** 2
        qb = 2.0 * (p[0] * t[0] + p[1] * t[1])
        qc = p[0] ** 2 + p[1] ** 2
        u = np.array([1.0, b, c])
        poly = np.convolve(u, u)
        poly[2:] -= 4.0 * self.R ** 2 * np.array([qa, qb, qc])
        return poly

    def _real_roots(self, line: Line) -> np.ndarray:
        roots = np.roots(self._quartic(line))
        scale = 1.0 + np.abs(roots.real)
        real = roots[np.abs(roots.imag) <= TANGENT_TOL * scale].real
        real = np.sort(real)
        if len(real) >= 2 and np.min(np.diff(real)) <= TANGENT_TOL * (1.0 + np.abs(real[:-1]).max()):
            raise TangentLineError("line is tangent to the torus")
        return real

    def _normal(self, z: np.ndarray) -> np.ndarray:
        u = float(np.dot(z, z)) + self.R ** 2 - self.r ** 2
        g = np.array([4.0 * z[0] * (u - 2.0 * self.R ** 2),
                      4.0 * z[1] * (u - 2.0 * self.R ** 2),
                      4.0 * z[2] * u])
        n = float(np.linalg.norm(g))
        if n < 1e-14:
            raise TangentLineError("degenerate torus normal at crossing")
        return g / n

    def _crossings(self, line: Line):
        out = []
        for lam in self._real_roots(line):
            z = line.point(float(lam))
            out.append((float(lam), abs(float(np.dot(self._normal(z), line.theta)))))
        return out

    def batched_line_counts(self, bases: np.ndarray, thetas: np.ndarray) -> np.ndarray:
        """Real-root counts for many lines at once via companion eigenvalues.

        Tangent lines (refusal band) get count -1; callers decide how to
        handle them.  Used to keep exact-counter Monte Carlo runs fast.
        """
        m = len(bases)
        coeffs = np.empty((m, 5))
        b = 2.0 * np.einsum("ij,ij->i", bases, thetas)
        c = np.einsum("ij,ij->i", bases, bases) + self.R ** 2 - self.r ** 2
        coeffs[:, 0] = 1.0
        coeffs[:, 1] = 2.0 * b
        coeffs[:, 2] = b * b + 2.0 * c
        coeffs[:, 3] = 2.0 * b * c
        coeffs[:, 4] = c * c
        qa = thetas[:, 0] ** 2 + thetas[:, 1] ** 2
        qb = 2.0 * (bases[:, 0] * thetas[:, 0] + bases[:, 1] * thetas[:, 1])
        qc = bases[:, 0] ** 2 + bases[:, 1] ** 2
        coeffs[:, 2] -= 4.0 * self.R ** 2 * qa
        coeffs[:, 3] -= 4.0 * self.R ** 2 * qb
        coeffs[:, 4] -= 4.0 * self.R ** 2 * qc
        comp = np.zeros((m, 4, 4))
        comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
        comp[:, :, 3] = -coeffs[:, 4:0:-1]
        roots = np.linalg.eigvals(comp)
        scale = 1.0 + np.abs(roots.real)
        is_real = np.abs(roots.imag) <= TANGENT_TOL * scale
        counts = is_real.sum(axis=1).astype(np.int64)
        ambiguous = (~is_real & (np.abs(roots.imag) <= 1e-6 * scale)).any(axis=1)
        counts[ambiguous] = -1
        return counts

    def project_to_boundary(self, x):
        x = np.asarray(x, dtype=float)
        rho = float(np.hypot(x[0], x[1]))
        if rho < 1e-12:
            raise ProjectionError("projection from the torus axis is not unique")
        ring = np.array([self.R * x[0] / rho, self.R * x[1] / rho, 0.0])
        v = x - ring
        nv = float(np.linalg.norm(v))
        if nv < 1e-12:
            raise ProjectionError("projection from the tube center circle is not unique")
        return ring + (self.r / nv) * v


_SHAPE_CLASSES = {
    cls.kind: cls
    for cls in (Disk, Annulus, RoundedSquare, Peanut, Ball3, Shell3, Torus)
}


def make_shape(kind: str, **params) -> Shape:
    """Construct a shape by kind name (disk, annulus, rounded-square, peanut,
    ball3, shell3, torus) and keyword parameters."""
    if kind not in _SHAPE_CLASSES:
        raise ValueError(f"unknown shape {kind!r}; known: {sorted(_SHAPE_CLASSES)}")
    return _SHAPE_CLASSES[kind](**params)


def sample_iid(shape: Shape, n: int, seed: int) -> PointCloud:
    """n independent uniform draws on the shape; deterministic per seed."""
    return shape.sample(n, seed)


def boundary_measure(shape: Shape) -> float:
    return shape.boundary_measure()


def true_line_count(shape: Shape, line: Line) -> int:
    """Exact number of line-boundary crossings; refuses near-tangent lines."""
    return shape.true_line_count(line)


def project_to_boundary(shape: Shape, x) -> np.ndarray:
    return shape.project_to_boundary(x)
