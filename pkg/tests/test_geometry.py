import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitdist.geometry import (DEFAULT_TOL, Arc, Ball, HalfSpace, NoCrossingError, Segment, Sphere,
                               Tolerances, distance, halfspace_contains, unit_point_on_arc,
                               unit_point_on_polyline, unit_point_on_segment)

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
pt2 = st.tuples(coord, coord).map(np.array)


def test_tolerance_defaults():
    assert DEFAULT_TOL.geom_eps == 1e-9
    assert DEFAULT_TOL.bisect_eps == 1e-12
    with pytest.raises(ValueError):
        Tolerances(geom_eps=1e-12, bisect_eps=1e-9)


def test_distance_examples():
    assert distance((0, 0), (1, 0)) == 1
    assert distance((0, 0), (0, 0)) == 0
    p, q = 0.3, 0.4
    assert distance((p + 1, 0), (p + q / 2, math.sqrt(1 - (1 - q / 2) ** 2))) == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValueError):
        distance((0, 0), (0, 0, 0))


def test_halfspace_examples():
    h = HalfSpace((0, 0), (1, 0))
    assert halfspace_contains(h, (-1, 5))
    assert halfspace_contains(h, (0, 0))
    assert not halfspace_contains(h, (0.5, 0))
    with pytest.raises(ValueError):
        HalfSpace((1, 1), (1, 1))


def test_ball_sphere():
    assert Ball((0, 0), 1).contains((1, 0))
    assert not Ball((0, 0), 1).contains((1.1, 0))
    assert Sphere((0, 0), 1).on((0, 1))
    with pytest.raises(ValueError):
        Ball((0, 0), -1)


def test_unit_point_on_segment_examples():
    y = unit_point_on_segment((0, -0.8), Segment((0, 0), (1, 0)))
    assert np.allclose(y, (0.6, 0), atol=1e-9)
    assert np.allclose(unit_point_on_segment((-1, 0), Segment((0, 0), (1, 0))), (0, 0))
    assert np.allclose(unit_point_on_segment((0, 1), Segment((0, 0), (1, 0))), (0, 0))
    with pytest.raises(NoCrossingError):
        unit_point_on_segment((0, 5), Segment((0, 0), (1, 0)))


def test_unit_point_on_polyline_examples():
    assert np.allclose(unit_point_on_polyline((2, 0), [(0, 0), (1, 0)]), (1, 0))
    y = unit_point_on_polyline((1.5, 0.8), [(0, 0), (2, 0)])
    assert np.allclose(y, (0.9, 0), atol=1e-9)
    assert np.allclose(unit_point_on_polyline((0, 1), [(0, 0), (5, 5)]), (0, 0))
    with pytest.raises(NoCrossingError):
        unit_point_on_polyline((0, 0), [(2, 0), (2, 2), (0.5, 2)])


def test_unit_point_on_arc_examples():
    arc = Arc.from_endpoints(Sphere((1, 0), 1), (2, 0), (0, 0), toward=(0, 1))
    y = unit_point_on_arc((0, 0), arc)
    assert np.allclose(y, (0.5, math.sqrt(3) / 2), atol=1e-9)
    arc = Arc.from_endpoints(Sphere((0, 0), 1), (1, 0), (0, 1))
    assert np.allclose(unit_point_on_arc((2, 0), arc), (1, 0))
    # x one unit beyond the pole: the pole is the answer
    arc = Arc.from_endpoints(Sphere((0, 0), 1), (1, 0), (0, 1))
    assert np.allclose(unit_point_on_arc((0, 2), arc), (0, 1), atol=1e-9)


@given(pt2, pt2, pt2)
def test_distance_is_metric(p, q, r):
    assert distance(p, q) == distance(q, p) >= 0
    assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12


@given(pt2, pt2, st.floats(0, 1))
@settings(max_examples=200)
def test_unit_point_on_segment_property(a, b, t):
    # x at distance one from a point of the segment, so the segment carries a crossing
    # unless it lies entirely inside or outside the unit ball
    s = Segment(a, b)
    x = s.at(t) + np.array([0.0, 1.0])
    try:
        y = unit_point_on_segment(x, s)
    except NoCrossingError:
        assert min(distance(x, a), distance(x, b)) > 1 or max(distance(x, a), distance(x, b)) < 1
        return
    assert abs(distance(x, y) - 1) <= 1e-9
    # y on the segment
    d = b - a
    L2 = float(d @ d)
    tt = 0.0 if L2 == 0 else float(np.clip((y - a) @ d / L2, 0, 1))
    assert distance(y, a + tt * d) <= 1e-9
    assert np.array_equal(y, unit_point_on_segment(x, s))


@given(st.floats(0, 2 * math.pi), st.floats(0.05, 3.0))
def test_unit_point_on_arc_property(phi, span):
    arc = Arc(np.zeros(2), 1.0, np.array([1.0, 0]), np.array([0, 1.0]), 0.0, span)
    x = arc.at(0.0) * 0  # center: every arc point at distance 1
    y = unit_point_on_arc(x, arc)
    assert abs(distance(x, y) - 1) <= 1e-9
    x = np.array([math.cos(phi), math.sin(phi)]) * 0.5
    try:
        y = unit_point_on_arc(x, arc)
    except NoCrossingError:
        return
    assert abs(distance(x, y) - 1) <= 1e-9
    assert abs(np.linalg.norm(y) - 1) <= 1e-9
