import random

import pytest

from ecoroute.graph import TrafficMode
from ecoroute.preprocess import (
    SegmentRecord,
    aggregate_link_mode,
    build_graph,
    classify_segment_mode,
    insert_fictitious_nodes,
)


def seg(a, b, seq, length, speed):
    return SegmentRecord(a, b, seq, length, speed)


SPEED_FOR_MODE = {1: 15.0, 2: 30.0, 3: 50.0}


def segs_with_modes(modes, a=1, b=2, length=1.0):
    return [seg(a, b, i, length, SPEED_FOR_MODE[m]) for i, m in enumerate(modes)]


def test_classify_thresholds():
    assert classify_segment_mode(15) == 1
    assert classify_segment_mode(20) == 2
    assert classify_segment_mode(40) == 2
    assert classify_segment_mode(50) == 3
    with pytest.raises(ValueError):
        classify_segment_mode(0)
    with pytest.raises(ValueError):
        classify_segment_mode(-5)


def test_split_on_two_mode_jump():
    pieces, added = insert_fictitious_nodes(segs_with_modes([3, 1]))
    assert added == 1
    assert [(p.tail, p.head) for p in pieces] == [(1, 3), (3, 2)]


def test_no_split_on_one_mode_jump():
    pieces, added = insert_fictitious_nodes(segs_with_modes([3, 2, 2]))
    assert added == 0
    assert [(p.tail, p.head) for p in pieces] == [(1, 2)]


def test_two_splits():
    pieces, added = insert_fictitious_nodes(segs_with_modes([1, 3, 1]))
    assert added == 2
    assert [(p.tail, p.head) for p in pieces] == [(1, 3), (3, 4), (4, 2)]


def test_aggregate_examples():
    assert aggregate_link_mode(segs_with_modes([2, 2, 3])) is TrafficMode.MEDIUM
    assert aggregate_link_mode(segs_with_modes([1])) is TrafficMode.HIGH
    # half-up rounding of 2.5 goes to index 3, which is the fast/low-traffic mode
    assert aggregate_link_mode(segs_with_modes([2, 3])) is TrafficMode.LOW


def test_aggregate_is_length_weighted():
    segments = [seg(1, 2, 0, 9.0, 50.0), seg(1, 2, 1, 1.0, 30.0)]  # mostly mode 3
    assert aggregate_link_mode(segments) is TrafficMode.LOW


def test_build_graph_homogeneous_merge():
    g, report = build_graph([seg(1, 2, 0, 2, 50), seg(1, 2, 1, 3, 50)])
    assert report.fictitious_nodes_added == 0
    assert report.links_out == 1
    link = g.link(1, 2)
    assert link.length_mi == pytest.approx(5.0)
    assert link.avg_speed_mph == pytest.approx(50.0)
    assert link.mode is TrafficMode.LOW


def test_build_graph_split():
    g, report = build_graph([seg(1, 2, 0, 2, 50), seg(1, 2, 1, 2, 15)])
    assert report.fictitious_nodes_added == 1
    assert report.links_out == 2
    assert g.link(1, 3).mode is TrafficMode.LOW
    assert g.link(3, 2).mode is TrafficMode.HIGH


def test_build_graph_passthrough():
    g, report = build_graph([seg(1, 2, 0, 2, 50), seg(2, 3, 0, 3, 50)])
    assert report.fictitious_nodes_added == 0
    assert g.nodes == {1, 2, 3}
    assert len(g.links) == 2


def test_duplicate_segment_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        build_graph([seg(1, 2, 0, 2, 50), seg(1, 2, 0, 3, 40)])


def test_noncontiguous_seq_rejected():
    with pytest.raises(ValueError, match="contiguous"):
        build_graph([seg(1, 2, 0, 2, 50), seg(1, 2, 2, 3, 40)])


def random_segments(rng: random.Random):
    segments = []
    n_links = rng.randint(1, 8)
    for k in range(n_links):
        a = rng.randint(1, 10)
        b = rng.randint(1, 10)
        while b == a:
            b = rng.randint(1, 10)
        if any(s.link_from == a and s.link_to == b for s in segments):
            continue
        for i in range(rng.randint(1, 6)):
            segments.append(seg(a, b, i, rng.uniform(0.1, 5), rng.uniform(5, 70)))
    return segments


def test_conservation_on_random_segment_sets():
    rng = random.Random(2024)
    for _ in range(50):
        segments = random_segments(rng)
        g, report = build_graph(segments)
        in_length = sum(s.length_mi for s in segments)
        in_time = sum(s.length_mi / s.avg_speed_mph for s in segments)
        out_length = sum(l.length_mi for l in g.links)
        out_time = sum(l.travel_time_h for l in g.links)
        assert out_length == pytest.approx(in_length, rel=1e-9)
        assert out_time == pytest.approx(in_time, rel=1e-9)
        assert report.links_out == len(g.links)


def test_no_internal_two_mode_jump_after_split():
    rng = random.Random(77)
    for _ in range(50):
        segments = random_segments(rng)
        pieces, _ = insert_fictitious_nodes(segments)
        for piece in pieces:
            modes = [classify_segment_mode(s.avg_speed_mph) for s in piece.segments]
            assert all(abs(b - a) < 2 for a, b in zip(modes, modes[1:]))
