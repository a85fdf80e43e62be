"""Turn per-segment speed records into a routable graph.

Segments are classified into three speed modes; a link is split with a fictitious
node wherever two consecutive segments jump by two modes; each resulting link gets
a single length-weighted mode and a travel-time-preserving average speed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .graph import Link, NetworkGraph, TrafficMode

# Mode index 1 is the slowest traffic (stop-and-go cycle), 3 the fastest (highway).
MODE_BY_INDEX = {1: TrafficMode.HIGH, 2: TrafficMode.MEDIUM, 3: TrafficMode.LOW}


@dataclass(frozen=True)
class SegmentRecord:
    """One road segment of a link, identified by (link endpoints, position)."""

    link_from: int
    link_to: int
    seq: int
    length_mi: float
    avg_speed_mph: float

    def __post_init__(self) -> None:
        if self.seq < 0:
            raise ValueError("segment seq must be >= 0")
        if not self.length_mi > 0:
            raise ValueError("segment length must be > 0")
        if not self.avg_speed_mph > 0:
            raise ValueError("segment speed must be > 0")


@dataclass(frozen=True)
class LinkPiece:
    """A maximal run of segments between two (possibly fictitious) nodes."""

    tail: int
    head: int
    segments: tuple[SegmentRecord, ...]


@dataclass(frozen=True)
class PreprocessReport:
    fictitious_nodes_added: int
    links_out: int
    link_modes: dict[tuple[int, int], TrafficMode]


def classify_segment_mode(avg_speed_mph: float) -> int:
    """Speed-threshold mode index: 1 below 20 mph, 2 up to 40 mph inclusive, 3 above."""
    if not avg_speed_mph > 0:
        raise ValueError(f"segment speed must be positive, got {avg_speed_mph}")
    if avg_speed_mph < 20:
        return 1
    if avg_speed_mph <= 40:
        return 2
    return 3


def _grouped(segments: Sequence[SegmentRecord]) -> dict[tuple[int, int], list[SegmentRecord]]:
    groups: dict[tuple[int, int], dict[int, SegmentRecord]] = {}
    for s in segments:
        key = (s.link_from, s.link_to)
        per = groups.setdefault(key, {})
        if s.seq in per:
            raise ValueError(f"duplicate segment (link {key[0]}->{key[1]}, seq {s.seq})")
        per[s.seq] = s
    out: dict[tuple[int, int], list[SegmentRecord]] = {}
    for key in sorted(groups):
        per = groups[key]
        if sorted(per) != list(range(len(per))):
            raise ValueError(
                f"segment seq values for link {key[0]}->{key[1]} must be contiguous from 0"
            )
        out[key] = [per[i] for i in range(len(per))]
    return out


def insert_fictitious_nodes(
    segments: Sequence[SegmentRecord],
) -> tuple[list[LinkPiece], int]:
    """Split each link at every boundary where consecutive segments jump two modes.

    Fresh node ids are allocated above the maximum id present in the input.
    Returns the link pieces and the number of fictitious nodes added.
    """
    if not segments:
        return [], 0
    groups = _grouped(segments)
    next_id = max(max(s.link_from, s.link_to) for s in segments) + 1
    pieces: list[LinkPiece] = []
    added = 0
    for (a, b), segs in groups.items():
        modes = [classify_segment_mode(s.avg_speed_mph) for s in segs]
        runs: list[list[SegmentRecord]] = [[segs[0]]]
        for prev, cur, seg in zip(modes, modes[1:], segs[1:]):
            if abs(cur - prev) == 2:
                runs.append([seg])
            else:
                runs[-1].append(seg)
        tail = a
        for k, run in enumerate(runs):
            if k == len(runs) - 1:
                head = b
            else:
                head = next_id
                next_id += 1
                added += 1
            pieces.append(LinkPiece(tail, head, tuple(run)))
            tail = head
    return pieces, added


def aggregate_link_mode(segments: Sequence[SegmentRecord]) -> TrafficMode:
    """Length-weighted mean mode index, rounded half-up, mapped to a traffic mode."""
    if not segments:
        raise ValueError("cannot aggregate an empty segment list")
    total = sum(s.length_mi for s in segments)
    mean = sum(classify_segment_mode(s.avg_speed_mph) * s.length_mi for s in segments) / total
    idx = min(3, max(1, math.floor(mean + 0.5)))
    return MODE_BY_INDEX[idx]


def build_graph(
    segments: Sequence[SegmentRecord],
) -> tuple[NetworkGraph, PreprocessReport]:
    """Classify, split, and aggregate segments into a NetworkGraph.

    Link length is the segment-length sum; link speed is the length-weighted
    harmonic mean of segment speeds, so total travel time is preserved.
    """
    pieces, added = insert_fictitious_nodes(segments)
    links = []
    modes: dict[tuple[int, int], TrafficMode] = {}
    for piece in pieces:
        length = sum(s.length_mi for s in piece.segments)
        speed = length / sum(s.length_mi / s.avg_speed_mph for s in piece.segments)
        mode = aggregate_link_mode(piece.segments)
        links.append(Link(piece.tail, piece.head, length, speed, mode))
        modes[(piece.tail, piece.head)] = mode
    graph = NetworkGraph(links)
    return graph, PreprocessReport(added, len(links), modes)
