"""Geometry kernel tests.

Frozen numeric expectations here were derived independently before the fast
implementations existed: circumcenters by solving the two perpendicular
bisector equations by hand, hulls by inspection.  The fast code has to come
to them, not the other way round.
"""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gathersim.geometry import (
    CONCAVE,
    CONVEX,
    STRAIGHT,
    DegenerateHull,
    Point,
    Polygon,
    Tolerance,
    collinear,
    convex_hull,
    dist,
    hull_boundary_contains,
    is_adjacent_on_sec,
    make_sector_pair,
    on_circle,
    point_between_collinear,
    point_on_segment,
    points_coincide,
    sector_contains,
    smallest_enclosing_circle,
    strictly_inside_circle,
)

TOL = Tolerance()

# Circumcenter of {(0,0),(1,0),(0.5,0.8660254)} from the bisector equations
#   x = 0.5
#   0.25 + y^2 = (y - 0.8660254)^2  =>  y = (0.8660254^2 - 0.25) / (2 * 0.8660254)
EQUILATERAL = [Point(0.0, 0.0), Point(1.0, 0.0), Point(0.5, 0.8660254)]
EQUILATERAL_CENTER_Y = 0.2886751320718538
EQUILATERAL_RADIUS = 0.5773502679281463


def _finite_coord():
    return st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, width=64)


def _points(min_size, max_size):
    return st.lists(
        st.tuples(_finite_coord(), _finite_coord()).map(lambda t: Point(*t)),
        min_size=min_size,
        max_size=max_size,
        unique=True,
    )


# -- coincidence, segments, betweenness -------------------------------------


def test_points_coincide_basic():
    assert points_coincide(Point(0, 0), Point(0, 0), TOL)
    assert not points_coincide(Point(0, 0), Point(1, 0), TOL)
    assert points_coincide(Point(0, 0), Point(0, 5e-10), TOL)


def test_point_on_segment_examples():
    a, b = Point(0, 0), Point(2, 0)
    assert point_on_segment(Point(1, 0), a, b, TOL)
    assert not point_on_segment(Point(1, 1), a, b, TOL)
    assert not point_on_segment(Point(3, 0), a, b, TOL)


def test_point_on_segment_includes_endpoints():
    a, b = Point(1, 2), Point(5, -3)
    assert point_on_segment(a, a, b, TOL)
    assert point_on_segment(b, a, b, TOL)


def test_point_between_collinear_examples():
    assert point_between_collinear(Point(1, 0), Point(0, 0), Point(2, 0), TOL)
    assert not point_between_collinear(Point(0, 0), Point(1, 0), Point(2, 0), TOL)
    # endpoint coincidence is not "strictly between"
    assert not point_between_collinear(Point(2, 0), Point(0, 0), Point(2, 0), TOL)


def test_point_between_collinear_rejects_off_line():
    with pytest.raises(ValueError):
        point_between_collinear(Point(1, 1), Point(0, 0), Point(2, 0), TOL)


def test_collinear_is_scale_free():
    a, b, c = Point(0, 0), Point(1, 0), Point(2, 1e-12)
    assert collinear(a, b, c, TOL)
    scale = 1e6
    assert collinear(
        Point(a.x * scale, a.y * scale),
        Point(b.x * scale, b.y * scale),
        Point(c.x * scale, c.y * scale),
        TOL,
    )


# -- sector pairs ------------------------------------------------------------


def test_sector_pair_right_angle_kinds():
    pair = make_sector_pair(Point(1, 0), Point(0, 1), Point(0, 0), TOL)
    assert pair is not None
    assert {pair.kind1, pair.kind2} == {CONVEX, CONCAVE}


def test_sector_pair_straight():
    pair = make_sector_pair(Point(-1, 0), Point(1, 0), Point(0, 0), TOL)
    assert pair is not None
    assert (pair.kind1, pair.kind2) == (STRAIGHT, STRAIGHT)


def test_sector_pair_collinear_not_between_is_none():
    assert make_sector_pair(Point(1, 0), Point(2, 0), Point(0, 0), TOL) is None


def test_sector_pair_coincident_inputs_rejected():
    with pytest.raises(ValueError):
        make_sector_pair(Point(1, 0), Point(1, 0), Point(0, 0), TOL)
    with pytest.raises(ValueError):
        make_sector_pair(Point(1, 0), Point(0, 1), Point(1, 0), TOL)


def test_sector_contains_examples():
    pair = make_sector_pair(Point(1, 0), Point(0, 1), Point(0, 0), TOL)
    convex_side = 1 if pair.kind1 == CONVEX else 2
    concave_side = 3 - convex_side
    assert sector_contains(pair, convex_side, Point(1, 1), TOL)
    assert not sector_contains(pair, concave_side, Point(1, 1), TOL)
    # on a bounding half-line: in neither
    assert not sector_contains(pair, 1, Point(2, 0), TOL)
    assert not sector_contains(pair, 2, Point(2, 0), TOL)
    assert sector_contains(pair, concave_side, Point(-1, -1), TOL)


def test_sector_apex_in_neither():
    pair = make_sector_pair(Point(1, 0), Point(0, 1), Point(0, 0), TOL)
    assert not sector_contains(pair, 1, Point(0, 0), TOL)
    assert not sector_contains(pair, 2, Point(0, 0), TOL)


def test_sector_half_line_beyond_anchor_excluded():
    # The half-line through r extends past r; q behind the apex is NOT on it.
    pair = make_sector_pair(Point(1, 0), Point(0, 1), Point(0, 0), TOL)
    assert not sector_contains(pair, 1, Point(5, 0), TOL)
    assert not sector_contains(pair, 2, Point(5, 0), TOL)
    # (-1, 0) is behind the apex relative to r=(1,0): belongs to a sector.
    assert sector_contains(pair, 1, Point(-1, 0), TOL) or sector_contains(
        pair, 2, Point(-1, 0), TOL
    )


def test_straight_sectors_are_half_planes():
    pair = make_sector_pair(Point(-1, 0), Point(1, 0), Point(0, 0), TOL)
    above = Point(0.3, 2.0)
    below = Point(-0.7, -0.1)
    assert sector_contains(pair, 1, above, TOL) != sector_contains(pair, 2, above, TOL)
    assert sector_contains(pair, 1, above, TOL) != sector_contains(pair, 1, below, TOL)


@settings(max_examples=300)
@given(_points(3, 3), st.tuples(_finite_coord(), _finite_coord()))
def test_sector_exclusivity(pts, raw_q):
    """Any probe off the half-lines lies in exactly one of the two sectors."""
    r, rp, c = pts
    q = Point(*raw_q)
    try:
        pair = make_sector_pair(r, rp, c, TOL)
    except ValueError:
        return
    if pair is None:
        return
    in1 = sector_contains(pair, 1, q, TOL)
    in2 = sector_contains(pair, 2, q, TOL)
    assert not (in1 and in2)
    on_ray = (
        points_coincide(q, c, TOL)
        or (collinear(c, r, q, TOL) and (r.x - c.x) * (q.x - c.x) + (r.y - c.y) * (q.y - c.y) >= 0)
        or (collinear(c, rp, q, TOL) and (rp.x - c.x) * (q.x - c.x) + (rp.y - c.y) * (q.y - c.y) >= 0)
    )
    if on_ray:
        assert not in1 and not in2
    else:
        assert in1 or in2


# -- smallest enclosing circle ----------------------------------------------


def test_sec_two_points():
    sec = smallest_enclosing_circle([Point(0, 0), Point(2, 0)])
    assert points_coincide(sec.center, Point(1, 0), TOL)
    assert abs(sec.radius - 1.0) <= 1e-12


def test_sec_equilateral_frozen_values():
    sec = smallest_enclosing_circle(EQUILATERAL)
    assert abs(sec.center.x - 0.5) <= 1e-12
    assert abs(sec.center.y - EQUILATERAL_CENTER_Y) <= 1e-12
    assert abs(sec.radius - EQUILATERAL_RADIUS) <= 1e-12


def test_sec_third_point_inside():
    sec = smallest_enclosing_circle([Point(0, 0), Point(4, 0), Point(2, 1)])
    assert points_coincide(sec.center, Point(2, 0), TOL)
    assert abs(sec.radius - 2.0) <= 1e-12
    assert strictly_inside_circle(Point(2, 1), sec, TOL)


def test_sec_single_point():
    sec = smallest_enclosing_circle([Point(3, 3)])
    assert sec.center == Point(3, 3)
    assert sec.radius == 0.0


def test_sec_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        smallest_enclosing_circle([])
    with pytest.raises(ValueError):
        smallest_enclosing_circle([Point(1, 1), Point(1, 1)])


def test_sec_input_order_invariant_bitwise():
    rng = random.Random(7)
    pts = [Point(rng.random() * 10, rng.random() * 10) for _ in range(9)]
    base = smallest_enclosing_circle(pts)
    for _ in range(10):
        rng.shuffle(pts)
        assert smallest_enclosing_circle(pts) == base


@settings(max_examples=200, deadline=None)
@given(_points(1, 12))
def test_sec_encloses_and_is_supported(pts):
    sec = smallest_enclosing_circle(pts)
    span = max(1.0, sec.radius)
    for p in pts:
        assert dist(p, sec.center) <= sec.radius + 1e-9 * span
    if len(pts) == 1:
        assert sec.radius == 0.0
        return
    rim = [p for p in pts if abs(dist(p, sec.center) - sec.radius) <= 1e-9 * span]
    assert len(rim) >= 2
    if len(rim) == 2:
        assert abs(dist(rim[0], rim[1]) - 2 * sec.radius) <= 1e-8 * span


# -- convex hull -------------------------------------------------------------


def test_hull_square_with_interior_point():
    hull = convex_hull(
        [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(0.5, 0.5)], TOL
    )
    assert isinstance(hull, Polygon)
    assert set(hull.vertices) == {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}
    assert hull.vertices[0] == Point(0, 0)


def test_hull_collinear_degenerate():
    hull = convex_hull([Point(0, 0), Point(1, 0), Point(2, 0)], TOL)
    assert hull == DegenerateHull(Point(0, 0), Point(2, 0))


def test_hull_triangle():
    pts = [Point(0, 0), Point(3, 0), Point(0, 4)]
    hull = convex_hull(pts, TOL)
    assert isinstance(hull, Polygon)
    assert set(hull.vertices) == set(pts)


def test_hull_boundary_contains():
    hull = convex_hull([Point(0, 0), Point(2, 0), Point(0, 2)], TOL)
    assert hull_boundary_contains(hull, Point(1, 0), TOL)
    assert hull_boundary_contains(hull, Point(0, 0), TOL)
    assert hull_boundary_contains(hull, Point(1, 1), TOL)  # on the hypotenuse
    assert not hull_boundary_contains(hull, Point(0.5, 0.5), TOL)
    assert not hull_boundary_contains(hull, Point(3, 3), TOL)


@settings(max_examples=200, deadline=None)
@given(_points(1, 15))
def test_hull_contains_all_points_and_is_convex(pts):
    hull = convex_hull(pts, TOL)
    if isinstance(hull, DegenerateHull):
        for p in pts:
            assert point_on_segment(p, hull.a, hull.b, Tolerance(1e-6))
        return
    verts = hull.vertices
    assert set(verts) <= set(pts)
    # counterclockwise and strictly convex at every corner
    m = len(verts)
    if m >= 3:
        area2 = sum(
            verts[i].x * verts[(i + 1) % m].y - verts[(i + 1) % m].x * verts[i].y
            for i in range(m)
        )
        assert area2 > 0
        for i in range(m):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % m]
            cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
            assert cross > 0
    # every input point inside or on the hull
    for p in pts:
        for i in range(m):
            a, b = verts[i], verts[(i + 1) % m]
            cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
            assert cross >= -1e-6 * max(1.0, dist(a, b)) * max(1.0, dist(a, p))


# -- adjacency on the enclosing circle ---------------------------------------


def test_adjacent_square_edge_corners():
    pts = [Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1)]
    sec = smallest_enclosing_circle(pts)
    assert is_adjacent_on_sec(Point(1, 0), Point(0, 1), pts, sec, TOL)


def test_diagonal_square_corners_not_adjacent():
    pts = [Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1)]
    sec = smallest_enclosing_circle(pts)
    assert not is_adjacent_on_sec(Point(1, 0), Point(-1, 0), pts, sec, TOL)


def test_not_on_circle_never_adjacent():
    pts = [Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1), Point(0.1, 0.1)]
    sec = smallest_enclosing_circle(pts)
    assert not is_adjacent_on_sec(Point(0.1, 0.1), Point(1, 0), pts, sec, TOL)


def test_adjacent_ignores_interior_points():
    # Interior points sit in some sector but are not on the arc.
    pts = [Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1), Point(0.2, 0.3)]
    sec = smallest_enclosing_circle(pts)
    assert is_adjacent_on_sec(Point(0, 1), Point(-1, 0), pts, sec, TOL)


# -- circle predicates -------------------------------------------------------


def test_on_circle_and_inside():
    sec = smallest_enclosing_circle([Point(-1, 0), Point(1, 0)])
    assert on_circle(Point(1, 0), sec, TOL)
    assert on_circle(Point(0, 1), sec, TOL)
    assert strictly_inside_circle(Point(0.5, 0), sec, TOL)
    assert not strictly_inside_circle(Point(1, 0), sec, TOL)
    assert not on_circle(Point(0, 0), sec, TOL)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(-1e-9)
    with pytest.raises(ValueError):
        Tolerance(math.inf)
    assert Tolerance(0.0).eps == 0.0
