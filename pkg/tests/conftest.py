import random
from pathlib import Path

import pytest

from ecoroute.graph import Link, NetworkGraph, TrafficMode

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

MODES = (TrafficMode.LOW, TrafficMode.MEDIUM, TrafficMode.HIGH)


def random_instance(rng: random.Random, max_nodes: int = 10, max_links: int = 25):
    """Random connected routing instance with a guaranteed 1 -> n path."""
    n = rng.randint(3, max_nodes)
    nodes = list(range(1, n + 1))
    mid = nodes[1:-1]
    rng.shuffle(mid)
    k = rng.randint(0, len(mid))
    spine = [1] + mid[:k] + [n]
    pairs = set(zip(spine, spine[1:]))
    others = [(i, j) for i in nodes for j in nodes if i != j and (i, j) not in pairs]
    rng.shuffle(others)
    extra = rng.randint(0, max(0, max_links - len(pairs)))
    pairs |= set(others[:extra])
    links = [
        Link(i, j, rng.uniform(1, 30), rng.uniform(10, 70), rng.choice(MODES))
        for (i, j) in sorted(pairs)
    ]
    return NetworkGraph(links), 1, n


def random_chain(rng: random.Random, max_links: int = 12):
    """Random simple path graph 1 -> k+1 for fixed-path allocation tests."""
    k = rng.randint(1, max_links)
    links = [
        Link(i, i + 1, rng.uniform(1, 30), rng.uniform(10, 70), rng.choice(MODES))
        for i in range(1, k + 1)
    ]
    return NetworkGraph(links), tuple(range(1, k + 2))


@pytest.fixture
def triangle() -> NetworkGraph:
    return NetworkGraph(
        [
            Link(1, 2, 10, 50, TrafficMode.MEDIUM),
            Link(2, 3, 10, 50, TrafficMode.MEDIUM),
            Link(1, 3, 15, 50, TrafficMode.MEDIUM),
        ]
    )
