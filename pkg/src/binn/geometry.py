"""2D boundaries as ordered parametric segments.

A segment maps the local coordinate xi in [-1, 1] to a point on the
boundary and carries a constant Jacobian (its half arc-length), the unit
outward normal, a boundary-condition tag and the source point at xi = 0.
Segments are line pieces or circular arcs; both have |dx/dxi| constant,
so the arc coordinate is exactly t = a * xi, which the singular
quadrature relies on.

Orientation convention: segments are ordered with the computational
domain on the left, so the outward normal is always the tangent rotated
by -90 degrees. Interior boundaries run counter-clockwise; holes of
exterior domains run clockwise; the loaded patch of a half-plane
(material at x1 > 0) runs from x2 = +len to -len so the normal is
(-1, 0).
"""

import numpy as np

DIRICHLET = "dirichlet"
NEUMANN = "neumann"
INTERFACE = "interface"


class BoundaryCondition:
    """Tag plus prescribed-value callable (None for interface segments)."""

    def __init__(self, tag, value=None):
        if tag not in (DIRICHLET, NEUMANN, INTERFACE):
            raise ValueError(f"unknown boundary condition tag {tag!r}")
        if tag == INTERFACE and value is not None:
            raise ValueError("interface segments carry no prescribed value")
        if tag != INTERFACE and value is None:
            raise ValueError(f"{tag} condition requires a value function")
        self.tag = tag
        self.value = value

    def __repr__(self):
        return f"BoundaryCondition({self.tag})"


def dirichlet(value):
    return BoundaryCondition(DIRICHLET, value)


def neumann(value):
    return BoundaryCondition(NEUMANN, value)


def interface():
    return BoundaryCondition(INTERFACE)


class Segment:
    """Base class; subclasses implement point(xi) and distance(x)."""

    def __init__(self, bc, region_id=0):
        self.bc = bc
        self.region_id = region_id

    @property
    def source(self):
        """Source point (x, n) at the segment center xi = 0."""
        x, _, n = self.point(0.0)
        return x, n

    def split(self, k):
        """k equal sub-segments with the same bc/region (interior refinement)."""
        raise NotImplementedError

    def normal_at(self, x):
        """Unit outward normal at a point assumed to lie on the segment."""
        raise NotImplementedError

    def points(self, xis):
        """Vectorized point(): arrays x (m,2), jac (m,), n (m,2)."""
        xis = np.atleast_1d(xis)
        out_x = np.empty((len(xis), 2))
        out_j = np.empty(len(xis))
        out_n = np.empty((len(xis), 2))
        for i, xi in enumerate(xis):
            out_x[i], out_j[i], out_n[i] = self.point(xi)
        return out_x, out_j, out_n


class LineSegment(Segment):
    def __init__(self, p0, p1, bc, region_id=0):
        super().__init__(bc, region_id)
        p0 = np.asarray(p0, dtype=float)
        p1 = np.asarray(p1, dtype=float)
        length = np.linalg.norm(p1 - p0)
        if length <= 0.0:
            raise ValueError(f"degenerate line segment from {p0} to {p1}")
        self.p0 = p0
        self.p1 = p1
        self.mid = 0.5 * (p0 + p1)
        self.half = 0.5 * (p1 - p0)
        self.half_arc = 0.5 * length
        tau = self.half / self.half_arc
        self.normal = np.array([tau[1], -tau[0]])

    def point(self, xi):
        if abs(xi) > 1.0 + 1e-12:
            raise ValueError(f"local coordinate {xi} outside [-1, 1]")
        return self.mid + xi * self.half, self.half_arc, self.normal

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        xi = np.dot(x - self.mid, self.half) / self.half_arc**2
        xi = np.clip(xi, -1.0, 1.0)
        return np.linalg.norm(x - (self.mid + xi * self.half))

    def split(self, k):
        pts = [self.p0 + (self.p1 - self.p0) * i / k for i in range(k + 1)]
        return [LineSegment(pts[i], pts[i + 1], self.bc, self.region_id)
                for i in range(k)]

    def normal_at(self, x):
        return self.normal


class ArcSegment(Segment):
    """Circular arc from angle theta0 to theta1 (signed sweep sets orientation)."""

    def __init__(self, center, radius, theta0, theta1, bc, region_id=0):
        super().__init__(bc, region_id)
        if radius <= 0.0:
            raise ValueError(f"arc radius must be positive, got {radius}")
        if theta0 == theta1:
            raise ValueError("degenerate arc with zero sweep")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.theta0 = float(theta0)
        self.theta1 = float(theta1)
        self.sweep = self.theta1 - self.theta0
        self.half_arc = 0.5 * self.radius * abs(self.sweep)

    def point(self, xi):
        if abs(xi) > 1.0 + 1e-12:
            raise ValueError(f"local coordinate {xi} outside [-1, 1]")
        theta = 0.5 * (self.theta0 + self.theta1) + 0.5 * xi * self.sweep
        radial = np.array([np.cos(theta), np.sin(theta)])
        x = self.center + self.radius * radial
        # tangent = sign(sweep) * (-sin, cos); rotating by -90 deg gives
        # n = sign(sweep) * radial: outward for ccw arcs, inward for cw.
        n = np.sign(self.sweep) * radial
        return x, self.half_arc, n

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        v = x - self.center
        ang = np.arctan2(v[1], v[0])
        lo, hi = sorted((self.theta0, self.theta1))
        # shift ang by 2*pi*k into [lo, hi] if possible
        k = np.round((0.5 * (lo + hi) - ang) / (2 * np.pi))
        ang_shifted = ang + 2 * np.pi * k
        if lo <= ang_shifted <= hi:
            return abs(np.linalg.norm(v) - self.radius)
        ends = [self.point(-1.0)[0], self.point(1.0)[0]]
        return min(np.linalg.norm(x - e) for e in ends)

    def split(self, k):
        thetas = self.theta0 + self.sweep * np.arange(k + 1) / k
        return [ArcSegment(self.center, self.radius, thetas[i], thetas[i + 1],
                           self.bc, self.region_id) for i in range(k)]

    def normal_at(self, x):
        v = np.asarray(x, dtype=float) - self.center
        return np.sign(self.sweep) * v / np.linalg.norm(v)


class Boundary:
    """Ordered segment loop (or open chain for half-plane patches)."""

    def __init__(self, segments, closed=True):
        if not segments:
            raise ValueError("boundary needs at least one segment")
        self.segments = list(segments)
        self.closed = closed

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def total_length(self):
        return sum(2.0 * s.half_arc for s in self.segments)

    def check_chaining(self, tol=1e-9):
        """Verify consecutive segment endpoints coincide."""
        segs = self.segments
        n = len(segs)
        last = n if self.closed else n - 1
        for i in range(last):
            end = segs[i].point(1.0)[0]
            start = segs[(i + 1) % n].point(-1.0)[0]
            if np.linalg.norm(end - start) > tol:
                raise ValueError(
                    f"segments {i} and {(i + 1) % n} do not chain: "
                    f"{end} vs {start}"
                )

    def distance(self, x):
        return min(s.distance(x) for s in self.segments)


def circle_boundary(center, radius, n_segments, bc, region_id=0,
                    clockwise=False, start_angle=0.0):
    """Closed circle split into n_segments equal arcs.

    clockwise=True is the hole-of-an-exterior-domain orientation (normals
    point into the circle).
    """
    if radius <= 0.0:
        raise ValueError(f"circle radius must be positive, got {radius}")
    if n_segments < 1:
        raise ValueError("need at least one segment")
    sweep = -2 * np.pi if clockwise else 2 * np.pi
    thetas = start_angle + sweep * np.arange(n_segments + 1) / n_segments
    segs = [
        ArcSegment(center, radius, thetas[i], thetas[i + 1],
                   bc(i) if callable(bc) and not isinstance(bc, BoundaryCondition) else bc,
                   region_id)
        for i in range(n_segments)
    ]
    return Boundary(segs, closed=True)


def polygon_boundary(vertices, per_edge, bcs, region_id=0):
    """Closed polygon; vertices ordered ccw, per-edge segment counts.

    bcs is one BoundaryCondition per edge, so corners always fall on
    segment boundaries and no source point sits on a corner.
    """
    vertices = [np.asarray(v, dtype=float) for v in vertices]
    n_edges = len(vertices)
    if np.isscalar(per_edge):
        per_edge = [int(per_edge)] * n_edges
    if len(per_edge) != n_edges or len(bcs) != n_edges:
        raise ValueError("need one segment count and one bc per edge")
    segs = []
    for e in range(n_edges):
        v0, v1 = vertices[e], vertices[(e + 1) % n_edges]
        m = per_edge[e]
        if m < 1:
            raise ValueError(f"edge {e} needs at least one segment")
        pts = [v0 + (v1 - v0) * k / m for k in range(m + 1)]
        for k in range(m):
            segs.append(LineSegment(pts[k], pts[k + 1], bcs[e], region_id))
    return Boundary(segs, closed=True)


def flower_boundary(n_segments, bc, region_id=0, petal_radius=1.0, n_petals=5):
    """Flower of n_petals outward semicircles on a regular polygon.

    The petal diameter equals the polygon side (2 * petal_radius); adjacent
    petals meet at the polygon vertices. n_segments must split evenly over
    the petals.
    """
    if n_segments % n_petals:
        raise ValueError(
            f"{n_segments} segments do not split evenly over {n_petals} petals"
        )
    per_petal = n_segments // n_petals
    circum = petal_radius / np.sin(np.pi / n_petals)
    verts = [
        circum * np.array([np.cos(np.pi / 2 + 2 * np.pi * j / n_petals),
                           np.sin(np.pi / 2 + 2 * np.pi * j / n_petals)])
        for j in range(n_petals)
    ]
    segs = []
    for j in range(n_petals):
        v0, v1 = verts[j], verts[(j + 1) % n_petals]
        center = 0.5 * (v0 + v1)
        t0 = np.arctan2(*(v0 - center)[::-1])
        # ccw semicircle from v0 to v1 bulges away from the origin
        thetas = t0 + np.pi * np.arange(per_petal + 1) / per_petal
        for k in range(per_petal):
            segs.append(ArcSegment(center, petal_radius, thetas[k],
                                   thetas[k + 1], bc, region_id))
    return Boundary(segs, closed=True)


def halfplane_patch(half_width, n_segments, bc, region_id=0):
    """Loaded patch x2 in [-half_width, half_width] on the surface x1 = 0.

    The material occupies x1 > 0; traversal runs from +half_width down to
    -half_width so the outward normal is (-1, 0).
    """
    if half_width <= 0.0:
        raise ValueError("patch half width must be positive")
    x2 = half_width - 2.0 * half_width * np.arange(n_segments + 1) / n_segments
    segs = [
        LineSegment((0.0, x2[k]), (0.0, x2[k + 1]), bc, region_id)
        for k in range(n_segments)
    ]
    return Boundary(segs, closed=False)


def build_boundary(spec):
    """Build a boundary from a plain-dict description (config files).

    spec["shape"] selects circle / polygon / flower / halfplane_patch with
    the corresponding builder arguments; bc entries are dicts like
    {"tag": "dirichlet", "value": 1.0}.
    """
    def make_bc(d):
        tag = d["tag"]
        if tag == INTERFACE:
            return interface()
        value = d["value"]
        if np.isscalar(value):
            const = float(value)
            return BoundaryCondition(tag, lambda x, c=const: c)
        value = np.asarray(value, dtype=float)
        return BoundaryCondition(tag, lambda x, v=value: v.copy())

    shape = spec.get("shape")
    if shape == "circle":
        return circle_boundary(spec.get("center", (0.0, 0.0)), spec["radius"],
                               spec["segments"], make_bc(spec["bc"]),
                               clockwise=spec.get("clockwise", False))
    if shape == "polygon":
        return polygon_boundary(spec["vertices"], spec["per_edge"],
                                [make_bc(b) for b in spec["bc"]])
    if shape == "flower":
        return flower_boundary(spec["segments"], make_bc(spec["bc"]),
                               petal_radius=spec.get("petal_radius", 1.0),
                               n_petals=spec.get("petals", 5))
    if shape == "halfplane_patch":
        return halfplane_patch(spec["half_width"], spec["segments"],
                               make_bc(spec["bc"]))
    raise ValueError(f"unknown boundary shape {shape!r}")
