"""Exact geometry of the hyperbolic upper half-plane.

Points are (x, y) with y > 0, metric ds^2 = (dx^2 + dy^2)/y^2 and measure
dx dy / y^2.  The module provides distances, the set families used by the
half-ball maximal operators (balls, special half planes, half balls,
trigona, infinite rectangles and their admissible hulls, modified half
balls), closed-form areas, boundary markers and the affine isometries
w -> w*Im(z0) + Re(z0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the upper half-plane, y > 0 strictly."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"HPoint requires y > 0, got y={self.y}")


class SetKind(Enum):
    BALL = "ball"
    HALF_PLANE = "half_plane"
    HALF_BALL = "half_ball"
    TRIGONON = "trigonon"
    RECTANGLE = "rectangle"
    ADMISSIBLE_RECTANGLE = "admissible_rectangle"
    MODIFIED_HALF_BALL = "modified_half_ball"


@dataclass(frozen=True)
class H2Set:
    """Tagged descriptor of one member of the half-plane set families.

    ``radius`` is the hyperbolic radius R (absent for the half plane).
    Admissible rectangles store the integer ``j`` with center height e^j
    and carry an integer radius >= 2.
    """

    kind: SetKind
    center: HPoint
    radius: Optional[float] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind is SetKind.HALF_PLANE:
            if self.radius is not None:
                raise ValueError("half plane carries no radius")
            return
        if self.radius is None or not self.radius > 0:
            raise ValueError(f"{self.kind.value} requires a positive radius")
        if self.kind is SetKind.ADMISSIBLE_RECTANGLE:
            if self.j is None:
                raise ValueError("admissible rectangle requires the height exponent j")
            K = self.radius
            if K != int(K) or K < 2:
                raise ValueError("admissible rectangle radius must be an integer >= 2")
            if not math.isclose(self.center.y, math.exp(self.j), rel_tol=1e-12):
                raise ValueError("admissible rectangle center height must equal e^j")
        if self.kind is SetKind.MODIFIED_HALF_BALL and self.radius < 1:
            raise ValueError("modified half ball requires R >= 1")


def ball(z: HPoint, R: float) -> H2Set:
    return H2Set(SetKind.BALL, z, R)


def half_plane(z: HPoint) -> H2Set:
    return H2Set(SetKind.HALF_PLANE, z)


def half_ball(z: HPoint, R: float) -> H2Set:
    return H2Set(SetKind.HALF_BALL, z, R)


def trigonon(z: HPoint, R: float) -> H2Set:
    return H2Set(SetKind.TRIGONON, z, R)


def rectangle(z: HPoint, R: float) -> H2Set:
    return H2Set(SetKind.RECTANGLE, z, R)


def admissible_rectangle(x: float, j: int, K: int) -> H2Set:
    return H2Set(SetKind.ADMISSIBLE_RECTANGLE, HPoint(x, math.exp(j)), float(K), j)


def modified_half_ball(z: HPoint, R: float) -> H2Set:
    return H2Set(SetKind.MODIFIED_HALF_BALL, z, R)


@dataclass(frozen=True)
class BoundaryMarkers:
    """Euclidean data of the geodesic ball together with the points where
    the ball circle meets the special half plane boundary (q-) and where
    the bottom horocycle of the trigonon meets it (p-)."""

    euclid_center: tuple
    euclid_radius: float
    q_minus: HPoint
    q_plus: HPoint
    p_minus: HPoint
    p_plus: HPoint


def distance(z: HPoint, w: HPoint) -> float:
    """Hyperbolic distance 2 asinh(|z - w| / (2 sqrt(Im z Im w)))."""
    d2 = (z.x - w.x) ** 2 + (z.y - w.y) ** 2
    return 2.0 * math.asinh(math.sqrt(d2) / (2.0 * math.sqrt(z.y * w.y)))


def contains_mask(s: H2Set, x, y):
    """Vectorized strict membership of points (x, y) in the open set s."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    zx, zy = s.center.x, s.center.y
    kind = s.kind
    if kind is SetKind.BALL:
        return _ball_mask(zx, zy, s.radius, x, y)
    if kind is SetKind.HALF_PLANE:
        return (x - zx) ** 2 + y * y < zy * zy
    if kind is SetKind.HALF_BALL:
        return _ball_mask(zx, zy, s.radius, x, y) & ((x - zx) ** 2 + y * y < zy * zy)
    if kind is SetKind.TRIGONON:
        return ((x - zx) ** 2 + y * y < zy * zy) & (y > math.exp(-s.radius) * zy)
    if kind in (SetKind.RECTANGLE, SetKind.ADMISSIBLE_RECTANGLE):
        return (np.abs(x - zx) < zy) & (y > math.exp(-s.radius) * zy)
    if kind is SetKind.MODIFIED_HALF_BALL:
        base = _ball_mask(zx, zy, s.radius, x, y) & ((x - zx) ** 2 + y * y < zy * zy)
        sat = _ball_mask(zx, math.exp(s.radius) * zy, 1.0, x, y)
        return base | sat
    raise ValueError(f"unknown kind {kind}")


def _ball_mask(zx, zy, R, x, y):
    # d(z, w) < R  <=>  |z - w|^2 < 4 Im z Im w sinh^2(R/2)
    s2 = math.sinh(R / 2.0) ** 2
    return (x - zx) ** 2 + (y - zy) ** 2 < 4.0 * zy * y * s2


def contains(s: H2Set, w: HPoint) -> bool:
    return bool(contains_mask(s, w.x, w.y))


def area(s: H2Set) -> float:
    """Closed-form Riemannian area of the descriptor.

    Raises for the half plane, which has infinite measure.
    """
    kind, R = s.kind, s.radius
    if kind is SetKind.BALL:
        return 4.0 * math.pi * math.sinh(R / 2.0) ** 2
    if kind is SetKind.HALF_BALL:
        return 2.0 * math.pi * math.sinh(R / 2.0) ** 2
    if kind is SetKind.TRIGONON:
        return trigonon_area(R)
    if kind in (SetKind.RECTANGLE, SetKind.ADMISSIBLE_RECTANGLE):
        return 2.0 * math.exp(R)
    if kind is SetKind.MODIFIED_HALF_BALL:
        # the satellite ball is disjoint from the half ball for R >= 1
        return 2.0 * math.pi * math.sinh(R / 2.0) ** 2 + 4.0 * math.pi * math.sinh(0.5) ** 2
    raise ValueError("half plane has infinite measure")


def trigonon_area(R: float) -> float:
    return 2.0 * math.exp(R) * math.sqrt(1.0 - math.exp(-2.0 * R)) - 2.0 * math.acos(math.exp(-R))


def boundary_markers(z: HPoint, R: float) -> BoundaryMarkers:
    """Euclidean center/radius of B_R(z) and the four marker points."""
    if not R > 0:
        raise ValueError("R must be positive")
    ec = (z.x, z.y * math.cosh(R))
    er = z.y * math.sinh(R)
    qy = z.y / math.cosh(R)
    qdx = z.y * math.tanh(R)
    py = math.exp(-R) * z.y
    pdx = z.y * math.sqrt(1.0 - math.exp(-2.0 * R))
    return BoundaryMarkers(
        euclid_center=ec,
        euclid_radius=er,
        q_minus=HPoint(z.x - qdx, qy),
        q_plus=HPoint(z.x + qdx, qy),
        p_minus=HPoint(z.x - pdx, py),
        p_plus=HPoint(z.x + pdx, py),
    )


def admissible_hull(q: H2Set) -> H2Set:
    """Smallest-lattice admissible rectangle containing the rectangle q.

    Same horizontal center, height exponent j = ceil(log Im z), radius
    K = ceil(R) + 2.  The area ratio e^(K - R) lies in [e^2, e^3).
    """
    if q.kind is not SetKind.RECTANGLE:
        raise ValueError("admissible_hull expects a rectangle")
    if not q.radius > 1:
        raise ValueError("hull construction assumes R > 1")
    j = math.ceil(math.log(q.center.y) - 1e-15)
    K = math.ceil(q.radius - 1e-15) + 2
    return admissible_rectangle(q.center.x, j, K)


def apply_affine(z0: HPoint, w: HPoint) -> HPoint:
    """Isometry w -> w * Im(z0) + Re(z0); maps i to z0."""
    return HPoint(w.x * z0.y + z0.x, w.y * z0.y)


def transform_set(z0: HPoint, s: H2Set) -> H2Set:
    """Image of a descriptor under the affine isometry of z0.

    Kinds are preserved; an admissible rectangle stays admissible only
    when log Im(z0) is an integer, otherwise the image is the same set
    described as a plain rectangle.
    """
    c = apply_affine(z0, s.center)
    if s.kind is SetKind.HALF_PLANE:
        return H2Set(SetKind.HALF_PLANE, c)
    if s.kind is SetKind.ADMISSIBLE_RECTANGLE:
        shift = math.log(z0.y)
        if math.isclose(shift, round(shift), abs_tol=1e-12):
            return admissible_rectangle(c.x, s.j + round(shift), int(s.radius))
        return H2Set(SetKind.RECTANGLE, c, s.radius)
    return H2Set(s.kind, c, s.radius)


def bounding_box(s: H2Set):
    """(x_lo, x_hi, y_lo, y_hi) enclosing s; y_hi may be inf."""
    zx, zy, R = s.center.x, s.center.y, s.radius
    kind = s.kind
    if kind is SetKind.BALL:
        sh = zy * math.sinh(R)
        return (zx - sh, zx + sh, zy * math.exp(-R), zy * math.exp(R))
    if kind is SetKind.HALF_PLANE:
        return (zx - zy, zx + zy, 0.0, zy)
    if kind in (SetKind.HALF_BALL, SetKind.TRIGONON):
        return (zx - zy, zx + zy, zy * math.exp(-R), zy)
    if kind in (SetKind.RECTANGLE, SetKind.ADMISSIBLE_RECTANGLE):
        return (zx - zy, zx + zy, zy * math.exp(-R), math.inf)
    if kind is SetKind.MODIFIED_HALF_BALL:
        sat_half_width = zy * math.exp(R) * math.sinh(1.0)
        half_width = max(zy, sat_half_width)
        return (zx - half_width, zx + half_width, zy * math.exp(-R), zy * math.exp(R + 1.0))
    raise ValueError(f"unknown kind {kind}")
