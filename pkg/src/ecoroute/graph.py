"""Directed traffic-network graph: links, adjacency queries, simple-path enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

# A route is an ordered node sequence; consecutive pairs must be links of the graph.
Path = tuple[int, ...]


class TrafficMode(Enum):
    """Congestion level of a link; each level is calibrated by one drive cycle."""

    LOW = "low"        # free flow (highway cycle)
    MEDIUM = "medium"  # urban traffic (urban cycle)
    HIGH = "high"      # congested (stop-and-go cycle)


class UnknownNodeError(KeyError):
    """Raised when a query references a node id not present in the graph."""


class PathEnumerationOverflow(RuntimeError):
    """Raised when a path enumeration exceeds its configured budget."""


@dataclass(frozen=True)
class Link:
    """One directed road link with averaged traffic conditions."""

    tail: int
    head: int
    length_mi: float
    avg_speed_mph: float
    mode: TrafficMode

    def __post_init__(self) -> None:
        if self.tail < 1 or self.head < 1:
            raise ValueError(f"node ids must be positive integers, got {self.tail}->{self.head}")
        if self.tail == self.head:
            raise ValueError(f"self-loop at node {self.tail} is not allowed")
        if not self.length_mi > 0:
            raise ValueError(f"link {self.tail}->{self.head}: length must be > 0")
        if not self.avg_speed_mph > 0:
            raise ValueError(f"link {self.tail}->{self.head}: speed must be > 0")

    @property
    def travel_time_h(self) -> float:
        return self.length_mi / self.avg_speed_mph


def travel_time(link: Link) -> float:
    """Free-flow traversal time of a link in hours."""
    return link.travel_time_h


class NetworkGraph:
    """Immutable directed graph with at most one link per ordered node pair.

    Safe for unlimited concurrent reads; all mutation happens in the constructor.
    """

    def __init__(self, links: Iterable[Link], extra_nodes: Iterable[int] = ()) -> None:
        links = tuple(links)
        by_pair: dict[tuple[int, int], Link] = {}
        for link in links:
            key = (link.tail, link.head)
            if key in by_pair:
                raise ValueError(f"parallel link {link.tail}->{link.head} is not allowed")
            by_pair[key] = link
        nodes = set(extra_nodes)
        for link in links:
            nodes.add(link.tail)
            nodes.add(link.head)
        if any(n < 1 for n in nodes):
            raise ValueError("node ids must be positive integers")
        out: dict[int, list[Link]] = {n: [] for n in nodes}
        inc: dict[int, list[Link]] = {n: [] for n in nodes}
        for link in links:
            out[link.tail].append(link)
            inc[link.head].append(link)
        self._links = links
        self._by_pair = by_pair
        self._out = {n: tuple(sorted(ls, key=lambda l: l.head)) for n, ls in out.items()}
        self._in = {n: tuple(sorted(ls, key=lambda l: l.tail)) for n, ls in inc.items()}
        self._nodes = frozenset(nodes)

    @property
    def nodes(self) -> frozenset[int]:
        return self._nodes

    @property
    def links(self) -> tuple[Link, ...]:
        return self._links

    def has_node(self, i: int) -> bool:
        return i in self._nodes

    def _check_node(self, i: int) -> None:
        if i not in self._nodes:
            raise UnknownNodeError(f"unknown node id {i}")

    def out_links(self, i: int) -> tuple[Link, ...]:
        self._check_node(i)
        return self._out[i]

    def in_links(self, i: int) -> tuple[Link, ...]:
        self._check_node(i)
        return self._in[i]

    def out_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(l.head for l in self.out_links(i))

    def in_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(l.tail for l in self.in_links(i))

    def link(self, i: int, j: int) -> Link:
        self._check_node(i)
        self._check_node(j)
        try:
            return self._by_pair[(i, j)]
        except KeyError:
            raise ValueError(f"no link {i}->{j} in graph") from None

    def path_links(self, path: Sequence[int]) -> tuple[Link, ...]:
        """Resolve a node sequence to its links, validating the simple-path invariant."""
        if len(path) < 2:
            raise ValueError("a path needs at least two nodes")
        if len(set(path)) != len(path):
            raise ValueError(f"path revisits a node: {list(path)}")
        return tuple(self.link(i, j) for i, j in zip(path, path[1:]))

    def path_travel_time(self, path: Sequence[int]) -> float:
        return sum(l.travel_time_h for l in self.path_links(path))

    def without_nodes(self, removed: Iterable[int], keep: Iterable[int] = ()) -> "NetworkGraph":
        """Subgraph with the given nodes (and their links) removed."""
        removed = set(removed)
        links = [l for l in self._links if l.tail not in removed and l.head not in removed]
        return NetworkGraph(links, extra_nodes=set(keep) - removed)

    def enumerate_simple_paths(self, origin: int, dest: int, max_paths: int) -> list[Path]:
        """All simple origin->dest paths in lexicographic node-sequence order.

        Raises PathEnumerationOverflow as soon as more than max_paths exist.
        """
        self._check_node(origin)
        self._check_node(dest)
        if origin == dest:
            raise ValueError("origin and destination must differ")
        if max_paths < 1:
            raise ValueError("max_paths must be >= 1")
        results: list[Path] = []
        stack: list[int] = [origin]
        on_path = {origin}

        def visit(node: int) -> None:
            if node == dest:
                if len(results) >= max_paths:
                    raise PathEnumerationOverflow(
                        f"instance too large for enumeration: more than {max_paths} "
                        f"simple paths from {origin} to {dest}"
                    )
                results.append(tuple(stack))
                return
            for link in self._out[node]:
                nxt = link.head
                if nxt in on_path:
                    continue
                stack.append(nxt)
                on_path.add(nxt)
                visit(nxt)
                stack.pop()
                on_path.remove(nxt)

        visit(origin)
        return results

    def __iter__(self) -> Iterator[Link]:
        return iter(self._links)

    def __repr__(self) -> str:
        return f"NetworkGraph({len(self._nodes)} nodes, {len(self._links)} links)"
