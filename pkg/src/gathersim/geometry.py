"""Planar primitives shared by the whole package.

Everything here is a plain function over small immutable values.  The one
policy decision worth calling out is the tolerance model: a single absolute
epsilon (see Tolerance) governs coincidence, on-segment and on-circle tests,
while collinearity normalizes the cross product by the two leg lengths so the
verdict does not depend on the overall scale of the input.
"""

from __future__ import annotations

import math
import random
import struct
import zlib
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Union


class Point(NamedTuple):
    x: float
    y: float


class Circle(NamedTuple):
    center: Point
    radius: float


class Polygon(NamedTuple):
    """Strictly convex polygon, vertices counterclockwise."""

    vertices: tuple[Point, ...]


class DegenerateHull(NamedTuple):
    """Hull marker for an all-collinear point set: just the extreme pair."""

    a: Point
    b: Point


Hull = Union[Polygon, DegenerateHull]

# Sector kinds, by angular span at the apex.
CONVEX = "convex"
CONCAVE = "concave"
STRAIGHT = "straight"


class SectorPair(NamedTuple):
    """Two open sectors cut out of the plane by a pair of half-lines.

    Both half-lines start at ``apex``; one passes through ``ray1_through``,
    the other through ``ray2_through``.  Sector 1 is the open region swept
    counterclockwise from the first half-line to the second, sector 2 is the
    rest.  The apex and both half-lines belong to neither sector, so every
    other point of the plane lies in exactly one of the two.
    """

    apex: Point
    ray1_through: Point
    ray2_through: Point
    kind1: str
    kind2: str


@dataclass(frozen=True)
class Tolerance:
    """Single epsilon shared by all approximate predicates."""

    eps: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.eps >= 0.0 and math.isfinite(self.eps)):
            raise ValueError("eps must be a finite non-negative float")


_DEFAULT_TOL = Tolerance()


def dist(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def points_coincide(a: Point, b: Point, tol: Tolerance = _DEFAULT_TOL) -> bool:
    return dist(a, b) <= tol.eps


def _cross(o: Point, a: Point, b: Point) -> float:
    """Twice the signed area of triangle (o, a, b)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def collinear(a: Point, b: Point, c: Point, tol: Tolerance = _DEFAULT_TOL) -> bool:
    """Scale-free collinearity of three points.

    The cross product at ``a`` is compared against eps times the product of
    the leg lengths, so stretching the whole configuration does not change
    the answer.  Coincident inputs count as collinear.
    """
    la = dist(a, b)
    lb = dist(a, c)
    if la == 0.0 or lb == 0.0:
        return True
    return abs(_cross(a, b, c)) <= tol.eps * la * lb


def _segment_distance(q: Point, a: Point, b: Point) -> float:
    vx, vy = b.x - a.x, b.y - a.y
    wx, wy = q.x - a.x, q.y - a.y
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / vv
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(wx - t * vx, wy - t * vy)


def point_on_segment(q: Point, a: Point, b: Point, tol: Tolerance = _DEFAULT_TOL) -> bool:
    """Whether q lies on the closed segment [a, b], endpoints included."""
    return _segment_distance(q, a, b) <= tol.eps


def point_between_collinear(c: Point, r: Point, rp: Point, tol: Tolerance = _DEFAULT_TOL) -> bool:
    """Whether c sits strictly between r and rp on their common line.

    Raises ValueError when the three points are not collinear; returns False
    when c coincides with either endpoint.
    """
    if not collinear(r, rp, c, tol):
        raise ValueError("point_between_collinear needs collinear input")
    if points_coincide(c, r, tol) or points_coincide(c, rp, tol):
        return False
    return (r.x - c.x) * (rp.x - c.x) + (r.y - c.y) * (rp.y - c.y) < 0.0


def make_sector_pair(
    r: Point, rp: Point, c: Point, tol: Tolerance = _DEFAULT_TOL
) -> Optional[SectorPair]:
    """Build the two open sectors at apex c through r and rp.

    Kinds: a span under half a turn is "convex", over is "concave", and when
    c lies strictly between collinear r and rp both sectors are open
    half-planes ("straight").  Returns None when the three points are
    collinear with c not strictly between, since the two half-lines then
    overlap and cut out nothing usable.  Coincident inputs are rejected.
    """
    if (
        points_coincide(r, rp, tol)
        or points_coincide(r, c, tol)
        or points_coincide(rp, c, tol)
    ):
        raise ValueError("sector pair needs three pairwise distinct points")
    if collinear(c, r, rp, tol):
        if point_between_collinear(c, r, rp, tol):
            return SectorPair(c, r, rp, STRAIGHT, STRAIGHT)
        return None
    if _cross(c, r, rp) > 0.0:
        return SectorPair(c, r, rp, CONVEX, CONCAVE)
    return SectorPair(c, r, rp, CONCAVE, CONVEX)


def _on_closed_half_line(c: Point, through: Point, q: Point, tol: Tolerance) -> bool:
    if not collinear(c, through, q, tol):
        return False
    # Collinear with the ray: on it unless strictly behind the apex.
    return (through.x - c.x) * (q.x - c.x) + (through.y - c.y) * (q.y - c.y) >= 0.0


def sector_contains(
    sectors: SectorPair, which: int, q: Point, tol: Tolerance = _DEFAULT_TOL
) -> bool:
    """Open-sector membership; ``which`` picks sector 1 or 2.

    Points on either bounding half-line, or at the apex, are in neither
    sector, so for any other q exactly one of the two calls answers True.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    c = sectors.apex
    if points_coincide(q, c, tol):
        return False
    if _on_closed_half_line(c, sectors.ray1_through, q, tol):
        return False
    if _on_closed_half_line(c, sectors.ray2_through, q, tol):
        return False
    r, rp = sectors.ray1_through, sectors.ray2_through
    turn = _cross(c, r, rp)
    if collinear(c, r, rp, tol):
        # Straight pair: sector 1 is the open half-plane left of the r ray.
        in_first = _cross(c, r, q) > 0.0
    elif turn > 0.0:
        in_first = _cross(c, r, q) > 0.0 and _cross(c, q, rp) > 0.0
    else:
        in_second = _cross(c, rp, q) > 0.0 and _cross(c, q, r) > 0.0
        in_first = not in_second
    return in_first if which == 1 else not in_first


def on_circle(p: Point, circle: Circle, tol: Tolerance = _DEFAULT_TOL) -> bool:
    return abs(dist(p, circle.center) - circle.radius) <= tol.eps


def strictly_inside_circle(p: Point, circle: Circle, tol: Tolerance = _DEFAULT_TOL) -> bool:
    return dist(p, circle.center) < circle.radius - tol.eps


def _require_distinct(points: Sequence[Point]) -> None:
    seen = set()
    for p in points:
        if p in seen:
            raise ValueError(f"duplicate point {p}; inputs must be pairwise distinct")
        seen.add(p)


def _input_seed(points: Sequence[Point]) -> int:
    coords = []
    for p in points:
        coords.append(p.x)
        coords.append(p.y)
    return zlib.crc32(struct.pack(f"<{len(coords)}d", *coords))


def smallest_enclosing_circle(points: Iterable[Point]) -> Circle:
    """Smallest circle enclosing the given distinct points.

    Randomized move-to-front construction; expected linear time.  The shuffle
    is seeded from a checksum of the input coordinates, so the same point set
    always walks the same path and returns bit-identical output, regardless
    of input order.
    """
    pts = list(points)
    if not pts:
        raise ValueError("smallest_enclosing_circle needs at least one point")
    _require_distinct(pts)
    shuffled = sorted(pts)
    random.Random(_input_seed(shuffled)).shuffle(shuffled)
    circle: Optional[Circle] = None
    for i, p in enumerate(shuffled):
        if circle is None or not _encloses(circle, p):
            circle = _sec_one_known(shuffled[: i + 1], p)
    assert circle is not None
    return circle


def _encloses(circle: Circle, p: Point) -> bool:
    # Multiplicative slack soaks up the rounding in the circumcenter solve.
    return dist(p, circle.center) <= circle.radius * (1.0 + 1e-14)


def _sec_one_known(points: Sequence[Point], p: Point) -> Circle:
    circle = Circle(p, 0.0)
    for i, q in enumerate(points):
        if not _encloses(circle, q):
            if circle.radius == 0.0:
                circle = _diameter_circle(p, q)
            else:
                circle = _sec_two_known(points[: i + 1], p, q)
    return circle


def _sec_two_known(points: Sequence[Point], p: Point, q: Point) -> Circle:
    base = _diameter_circle(p, q)
    left: Optional[Circle] = None
    right: Optional[Circle] = None
    # Pick the best boundary circle on each side of line pq.
    for r in points:
        if _encloses(base, r):
            continue
        side = _cross(p, q, r)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        cc_side = _cross(p, q, c.center)
        if side > 0.0 and (left is None or cc_side > _cross(p, q, left.center)):
            left = c
        elif side < 0.0 and (right is None or cc_side < _cross(p, q, right.center)):
            right = c
    if left is None and right is None:
        return base
    if left is None:
        return right  # type: ignore[return-value]
    if right is None:
        return left
    return left if left.radius <= right.radius else right


def _diameter_circle(a: Point, b: Point) -> Circle:
    cx = (a.x + b.x) / 2.0
    cy = (a.y + b.y) / 2.0
    center = Point(cx, cy)
    return Circle(center, max(dist(center, a), dist(center, b)))


def _circumcircle(a: Point, b: Point, c: Point) -> Optional[Circle]:
    # Shift toward the bounding-box midpoint before solving; this keeps the
    # determinant well conditioned when the triangle sits far from the origin.
    ox = (min(a.x, b.x, c.x) + max(a.x, b.x, c.x)) / 2.0
    oy = (min(a.y, b.y, c.y) + max(a.y, b.y, c.y)) / 2.0
    ax, ay = a.x - ox, a.y - oy
    bx, by = b.x - ox, b.y - oy
    cx, cy = c.x - ox, c.y - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + (
        (ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by)
    ) / d
    y = oy + (
        (ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax)
    ) / d
    center = Point(x, y)
    return Circle(center, max(dist(center, a), dist(center, b), dist(center, c)))


def convex_hull(points: Iterable[Point], tol: Tolerance = _DEFAULT_TOL) -> Hull:
    """Convex hull with strictly convex vertices, counterclockwise.

    Monotone chain with exact orientation tests builds the structure; an
    eps-collinear merge pass then removes corners flatter than the shared
    tolerance, so no three surviving vertices are collinear under the same
    predicate everything else uses.  Merging can leave an input point within
    about eps of the boundary rather than exactly inside, which is the
    resolution the rest of the package works at anyway.  An all-collinear
    input yields a DegenerateHull holding the farthest-apart pair.
    """
    pts = sorted(points)
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    _require_distinct(pts)
    # Degeneracy is judged against the farthest-apart pair, not the
    # lexicographic extremes: on a near-vertical line the lex order follows
    # coordinate noise instead of the line, and the longest baseline keeps
    # the normalized collinearity test well conditioned.
    far1 = max(pts, key=lambda p: dist(pts[0], p))
    far2 = max(pts, key=lambda p: dist(far1, p))
    lo, hi = (far1, far2) if far1 <= far2 else (far2, far1)
    if all(collinear(lo, hi, p, tol) for p in pts):
        return DegenerateHull(lo, hi)

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    ring = _merge_flat_corners(lower[:-1] + upper[:-1], tol)
    if len(ring) < 3:
        # The set is eps-flat even though no single baseline showed it.
        return DegenerateHull(lo, hi)
    start = ring.index(min(ring))
    return Polygon(tuple(ring[start:] + ring[:start]))


def _merge_flat_corners(ring: list[Point], tol: Tolerance) -> list[Point]:
    verts = list(ring)
    changed = True
    while changed and len(verts) >= 3:
        changed = False
        for i in range(len(verts)):
            a = verts[i - 1]
            b = verts[i]
            c = verts[(i + 1) % len(verts)]
            if collinear(a, b, c, tol):
                del verts[i]
                changed = True
                break
    return verts


def hull_boundary_contains(hull: Hull, q: Point, tol: Tolerance = _DEFAULT_TOL) -> bool:
    """Whether q lies on the hull boundary (vertices and edges included)."""
    if isinstance(hull, DegenerateHull):
        return point_on_segment(q, hull.a, hull.b, tol)
    verts = hull.vertices
    if len(verts) == 1:
        return points_coincide(q, verts[0], tol)
    return any(
        point_on_segment(q, verts[i], verts[(i + 1) % len(verts)], tol)
        for i in range(len(verts))
    )


def is_adjacent_on_sec(
    p: Point,
    pp: Point,
    points: Iterable[Point],
    sec: Circle,
    tol: Tolerance = _DEFAULT_TOL,
) -> bool:
    """Whether p and pp are angular neighbours on the circle.

    Both must sit on ``sec``; they are adjacent when one of the two sectors
    they cut at the center holds no further input point that is also on the
    circle.  Points on the bounding half-lines never count as separators.
    """
    if points_coincide(p, pp, tol):
        return False
    if sec.radius <= tol.eps:
        return False
    if not (on_circle(p, sec, tol) and on_circle(pp, sec, tol)):
        return False
    pair = make_sector_pair(p, pp, sec.center, tol)
    if pair is None:
        # Collinear without the center between them; cannot happen for two
        # distinct points on a proper circle, but be safe.
        return False
    pts = list(points)
    for which in (1, 2):
        blocked = any(
            on_circle(q, sec, tol) and sector_contains(pair, which, q, tol)
            for q in pts
        )
        if not blocked:
            return True
    return False
