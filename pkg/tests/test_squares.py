import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitdist.squares import (STATUS, classify_point, classify_points, corners, critical_lengths,
                              emit_region_svg, labels_csv, regime_of)

L5 = 2 / math.sqrt(5)


def test_classify_examples():
    lab = classify_point(1, (0.95, 0.95))
    assert lab.component_id == "big-union" and lab.regime == "above-2/√5"
    assert classify_point(1, (0.5, 0.5)).component_id == "isolated"
    assert classify_point(L5, (0, 0)).component_id == "arc-frame"
    with pytest.raises(ValueError):
        classify_point(1, (1.5, 0.5))


def test_at_critical_three_components():
    l = L5
    assert classify_point(l, (l, 0.2 * l)).component_id == "diag-anti"
    assert classify_point(l, (0.2 * l, l)).component_id == "diag-anti"
    assert classify_point(l, (l, 0.8 * l)).component_id == "diag-main"
    # a point on the unit circle about (0,0) inside the square belongs to the frame
    p = (l, math.sqrt(1 - l * l))
    assert classify_point(l, p).component_id == "arc-frame"
    ids = {lab.component_id for lab in classify_points(l, np.random.default_rng(0).uniform(0, l, (5000, 2)))}
    assert ids <= {"diag-main", "diag-anti", "arc-frame", "isolated"}
    assert {"diag-main", "diag-anti"} <= ids


def test_between_four_corner_arcs():
    l = 0.8
    assert regime_of(l) == "between-1/√2-and-2/√5"
    for k, v in enumerate(corners(l), start=1):
        assert classify_point(l, v).component_id == f"arc-corner-{k}"
    assert classify_point(0.6, (0.3, 0.3)).regime == "below-1/√2"
    assert classify_point(0.6, (0, 0)).component_id == "isolated"


def test_critical_lengths():
    c = critical_lengths()
    vals = [x.value for x in c]
    assert vals == sorted(vals)
    assert np.allclose(vals, [0.70711, 0.89443, 0.99228, 1.41421], atol=1e-5)
    assert any(abs(x.value - 0.894427) < 1e-6 for x in c)
    flagged = [x for x in c if not x.transition]
    assert len(flagged) == 1 and flagged[0].value == pytest.approx(8 / math.sqrt(65))


def test_svg_outputs():
    svg = emit_region_svg(1)
    assert 'class="big-union"' in svg and 'class="diag-main"' not in svg and STATUS in svg
    svg = emit_region_svg(L5)
    assert all(c in svg for c in ('class="diag-main"', 'class="diag-anti"', 'class="arc-frame"'))
    svg = emit_region_svg(0.75)
    assert all(f"arc-corner-{k}" in svg for k in range(1, 5)) and 'class="arc-frame"' not in svg
    assert emit_region_svg(0.75) == svg
    assert 'viewBox="0 0 1000 1000"' in svg
    with pytest.raises(ValueError):
        emit_region_svg(1.5)


def test_labels_csv():
    text = labels_csv(1, [(0.5, 0.5), (1, 1)])
    lines = text.splitlines()
    assert lines[0].startswith("# status=conjectured")
    assert lines[1] == "x,y,regime,component_id"
    assert lines[2].endswith("isolated") and lines[3].endswith("big-union")


@given(st.floats(0.3, 1.4), st.floats(0, 1), st.floats(0, 1), st.floats(-1e-4, 1e-4))
@settings(max_examples=300)
def test_labels_continuous_in_l_away_from_critical(l, a, b, dl):
    # regime only changes across the critical lengths
    crit = [1 / math.sqrt(2), L5, math.sqrt(2)]
    if any(min(l, l + dl) <= c <= max(l, l + dl) for c in crit) or any(abs(l - c) < 2e-9 for c in crit):
        return
    assert regime_of(l) == regime_of(l + dl)


@given(st.floats(1 / math.sqrt(2), L5), st.floats(0, 2 * math.pi), st.integers(0, 3))
def test_arc_labels_lie_on_circles(l, t, k):
    v = corners(l)[k]
    p = v + np.array([math.cos(t), math.sin(t)])
    if np.any(p < 0) or np.any(p > l):
        return
    lab = classify_point(l, p)
    assert lab.component_id.startswith("arc-")
    V = corners(l)
    assert np.min(np.abs(np.linalg.norm(V - p, axis=1) - 1)) <= 1e-9
