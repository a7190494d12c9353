"""Exact-formula primitives for the upper half-plane model of H^2.

Everything here is a pure function of real 2x2 unit-determinant matrices
acting by z -> (az+b)/(cz+d).  The point at infinity on the boundary is a
distinguished value and is handled by explicit case analysis, never by a
large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Module-wide tolerance policy: one epsilon for geometric predicates, a
# tighter one for determinant drift in long products.
EPS_GEOM = 1e-9
EPS_DET = 1e-12


class GeometryError(ValueError):
    pass


class UncertainPredicate(GeometryError):
    """A predicate landed inside its tolerance band; refusing to guess."""


class DegenerateConfig(GeometryError):
    """Shared endpoints or otherwise degenerate input configuration."""


def _normalize_entries(a: float, b: float, c: float, d: float):
    det = a * d - b * c
    if det <= 0.0:
        raise GeometryError(f"matrix determinant {det} is not positive")
    s = 1.0 / math.sqrt(det)
    a, b, c, d = a * s, b * s, c * s, d * s
    # Canonical sign: first entry in reading order that is clearly nonzero
    # becomes positive, so equality up to sign is a plain comparison.
    for e in (a, b, c, d):
        if abs(e) > EPS_GEOM:
            if e < 0.0:
                a, b, c, d = -a, -b, -c, -d
            break
    return a, b, c, d


@dataclass(frozen=True)
class Isometry:
    """An element of PSL(2,R): a real unit-determinant matrix up to sign."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = _normalize_entries(self.a, self.b, self.c, self.d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        # ad - bc is computed with cancellation error proportional to the
        # squared entry scale, so the drift check is relative to it.
        scale = max(1.0, a * a + b * b + c * c + d * d)
        if abs(a * d - b * c - 1.0) > EPS_DET * 8.0 * scale:
            raise GeometryError("determinant drift beyond tolerance")

    @staticmethod
    def identity() -> "Isometry":
        return Isometry(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def diagonal(length: float) -> "Isometry":
        """Translation by `length` along the imaginary axis (0 -> infinity)."""
        e = math.exp(0.5 * length)
        return Isometry(e, 0.0, 0.0, 1.0 / e)

    @staticmethod
    def unit_circle_translation(u: float) -> "Isometry":
        """Translation by u along the geodesic (-1, 1), attracting +1."""
        return Isometry(math.cosh(0.5 * u), math.sinh(0.5 * u),
                        math.sinh(0.5 * u), math.cosh(0.5 * u))

    @staticmethod
    def rotation_about_i(theta: float) -> "Isometry":
        """Elliptic rotation by angle theta around the point i."""
        c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
        return Isometry(c, s, -s, c)

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def trace(self) -> float:
        return self.a + self.d

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def is_identity(self, tol: float = EPS_GEOM) -> bool:
        return (abs(self.a - 1.0) <= tol and abs(self.d - 1.0) <= tol
                and abs(self.b) <= tol and abs(self.c) <= tol)

    def almost_equal(self, other: "Isometry", tol: float = EPS_GEOM) -> bool:
        return (abs(self.a - other.a) <= tol and abs(self.b - other.b) <= tol
                and abs(self.c - other.c) <= tol and abs(self.d - other.d) <= tol)

    def apply(self, z: complex) -> complex:
        """Act on an interior point of the upper half-plane."""
        if z.imag <= 0.0:
            raise GeometryError("point not in the open upper half-plane")
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply_boundary(self, p: "BoundaryPoint") -> "BoundaryPoint":
        if p.at_infinity:
            if abs(self.c) <= EPS_GEOM:
                return BoundaryPoint.infinity()
            return BoundaryPoint(self.a / self.c)
        denom = self.c * p.x + self.d
        if abs(denom) <= EPS_GEOM:
            return BoundaryPoint.infinity()
        return BoundaryPoint((self.a * p.x + self.b) / denom)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the boundary circle: a real number or infinity."""

    x: float
    at_infinity: bool = False

    @staticmethod
    def infinity() -> "BoundaryPoint":
        return BoundaryPoint(0.0, True)

    def close_to(self, other: "BoundaryPoint", tol: float = EPS_GEOM) -> bool:
        if self.at_infinity or other.at_infinity:
            return self.at_infinity and other.at_infinity
        return abs(self.x - other.x) <= tol

    def disk_angle(self) -> float:
        """Angle of the Cayley image (z-i)/(z+i) on the unit circle."""
        if self.at_infinity:
            return 0.0
        return math.atan2(-2.0 * self.x, self.x * self.x - 1.0)

    def __repr__(self):
        return "oo" if self.at_infinity else f"{self.x!r}"


def chordal_distance(p: BoundaryPoint, q: BoundaryPoint) -> float:
    """Euclidean chord length between the disk-model images of p and q."""
    return abs(2.0 * math.sin(0.5 * (p.disk_angle() - q.disk_angle())))


@dataclass(frozen=True)
class GeodesicLine:
    """Unordered pair of distinct boundary points."""

    p: BoundaryPoint
    q: BoundaryPoint

    def __post_init__(self):
        p, q = self.p, self.q
        if p.close_to(q):
            raise DegenerateConfig("geodesic endpoints coincide")
        # Canonical ordering: infinity last, otherwise by value.
        swap = p.at_infinity or (not q.at_infinity and q.x < p.x)
        if swap:
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def endpoints(self):
        return self.p, self.q


def compose(f: Isometry, g: Isometry) -> Isometry:
    return Isometry(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
    )


def classify(g: Isometry, tol: float = EPS_GEOM) -> str:
    """Standard trichotomy by |trace|: 'hyperbolic', 'parabolic', 'elliptic'."""
    if g.is_identity(1e-7):
        raise GeometryError("trivial element")
    t = abs(g.trace())
    if t > 2.0 + tol:
        return "hyperbolic"
    if t >= 2.0 - tol:
        return "parabolic"
    return "elliptic"


def translation_length(g: Isometry) -> float:
    """2*arccosh(|tr g|/2) for hyperbolic g."""
    if classify(g) != "hyperbolic":
        raise GeometryError("translation length requires a hyperbolic element")
    return 2.0 * math.acosh(0.5 * abs(g.trace()))


def fixed_points(g: Isometry):
    """(attracting, repelling) boundary fixed points of a hyperbolic g.

    Roots of c*x^2 + (d-a)*x - b = 0, with infinity handled when c = 0.
    The attracting point is the one where |c*x + d| > 1.
    """
    if classify(g) != "hyperbolic":
        raise GeometryError("fixed points on the boundary require a hyperbolic element")
    a, b, c, d = g.a, g.b, g.c, g.d
    if abs(c) <= EPS_GEOM:
        other = BoundaryPoint(b / (d - a)) if abs(d - a) > EPS_GEOM else None
        if other is None:
            raise UncertainPredicate("parabolic-like fixed point configuration")
        # At infinity the derivative is (a/d)^2 in the chart w = 1/z.
        if abs(a) > abs(d):
            return BoundaryPoint.infinity(), other
        return other, BoundaryPoint.infinity()
    disc = (a - d) * (a - d) + 4.0 * b * c
    if disc <= 0.0:
        raise GeometryError("no real fixed points")
    r = math.sqrt(disc)
    x1 = (a - d + r) / (2.0 * c)
    x2 = (a - d - r) / (2.0 * c)
    if abs(c * x1 + d) > abs(c * x2 + d):
        return BoundaryPoint(x1), BoundaryPoint(x2)
    return BoundaryPoint(x2), BoundaryPoint(x1)


def axis(g: Isometry) -> GeodesicLine:
    att, rep = fixed_points(g)
    return GeodesicLine(att, rep)


def link(l1: GeodesicLine, l2: GeodesicLine, tol: float = EPS_GEOM) -> bool:
    """True iff the geodesics cross: endpoint pairs alternate on the circle.

    Exact case analysis for infinity; a shared endpoint raises
    DegenerateConfig rather than guessing.
    """
    pts1, pts2 = l1.endpoints(), l2.endpoints()
    for u in pts1:
        for v in pts2:
            if u.close_to(v, tol):
                raise DegenerateConfig("degenerate configuration: shared endpoint")
    finites = [p for p in (*pts1, *pts2) if not p.at_infinity]
    n_inf = 4 - len(finites)
    if n_inf == 0:
        a, b = pts1[0].x, pts1[1].x
        c, d = pts2[0].x, pts2[1].x
        prod = (a - c) * (a - d) * (b - c) * (b - d)
        scale = max(abs(a - c), abs(a - d), abs(b - c), abs(b - d)) ** 4
        if abs(prod) <= tol * max(scale, 1.0) * 1e-6:
            raise UncertainPredicate("linking predicate inside tolerance band")
        return prod < 0.0
    # Exactly one point can be at infinity once shared endpoints are excluded.
    if pts1[0].at_infinity or pts1[1].at_infinity:
        a = pts1[0].x if pts1[1].at_infinity else pts1[1].x
        c, d = pts2[0].x, pts2[1].x
    else:
        a = pts2[0].x if pts2[1].at_infinity else pts2[1].x
        c, d = pts1[0].x, pts1[1].x
    # {a, oo} vs {c, d}: they cross iff a lies strictly between c and d.
    prod = (a - c) * (a - d)
    if abs(prod) <= tol * max((c - d) ** 2, 1.0) * 1e-6:
        raise UncertainPredicate("linking predicate inside tolerance band")
    return prod < 0.0


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    """Distance in the upper half-plane; errors on boundary input."""
    z1, z2 = complex(z1), complex(z2)
    if z1.imag <= 0.0 or z2.imag <= 0.0:
        raise GeometryError("points must lie in the open upper half-plane")
    q = abs(z1 - z2) ** 2 / (2.0 * z1.imag * z2.imag)
    return math.acosh(1.0 + q)


def point_to_disk(z: complex) -> complex:
    """Cayley transform to the Poincare disk (render-time only)."""
    return (z - 1j) / (z + 1j)


def segment_map(p: complex, q: complex) -> Isometry:
    """The isometry sending p to i and q to a point on the imaginary axis above i."""
    if p.imag <= 0.0 or q.imag <= 0.0:
        raise GeometryError("segment endpoints must be interior points")
    shift = Isometry(1.0 / math.sqrt(p.imag), -p.real / math.sqrt(p.imag),
                     0.0, math.sqrt(p.imag))
    q1 = shift.apply(q)
    w = (q1 - 1j) / (q1 + 1j)
    theta = math.atan2(w.imag, w.real)
    best = None
    for cand in (theta, -theta):
        out = compose(Isometry.rotation_about_i(cand), shift)
        zq = out.apply(q)
        if abs(zq.real) <= 1e-9 * abs(zq) and zq.imag > 1.0:
            best = out
            break
    if best is None:
        raise GeometryError("segment normalization failed")
    return best


def isometry_between_segments(p: complex, q: complex, p2: complex, q2: complex) -> Isometry:
    """Unique orientation-preserving isometry with p -> p2 and q -> q2.

    Requires d(p,q) = d(p2,q2); the caller is trusted on that.
    """
    return compose(segment_map(p2, q2).inverse(), segment_map(p, q))
