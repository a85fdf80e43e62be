"""Route optimization for a plug-in hybrid on a traffic network.

Four route providers share one result type: minimum-time baseline, the
charge-depleting-first optimum (hybrid LP + enumeration), the combined
routing/power-train MILP, and brute-force enumeration oracles used to verify
the first three on small instances.
"""
from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lp as lpmod
from .energy import (
    VehicleEnergyParams,
    cdf_link_step,
    cdf_path_cost,
    link_mode_costs,
    optimal_pt_allocation,
    split_path_cost,
)
from .graph import NetworkGraph, Path, PathEnumerationOverflow

PERIODS = ("AM", "MD", "PM", "NT")

DEFAULT_MAX_PATHS = 200_000


class UnreachableDestinationError(RuntimeError):
    """Raised when no origin->destination path exists."""


@dataclass(frozen=True)
class RouteSolution:
    """A chosen route plus its power-train split and accounting."""

    path: Path
    y: tuple[float, ...]                 # electric fraction per path link
    energy_cost: float                   # $
    travel_time_h: float
    battery_trajectory: tuple[float, ...]  # kWh at each path node, clamped >= 0
    algorithm: str


@dataclass(frozen=True)
class OdRouteDistribution:
    """Observed routes between one origin-destination pair in one time period."""

    origin: int
    dest: int
    period: str
    routes: tuple[tuple[Path, float], ...]

    def __post_init__(self) -> None:
        if self.period not in PERIODS:
            raise ValueError(f"period must be one of {PERIODS}, got {self.period!r}")
        if not self.routes:
            raise ValueError("route distribution needs at least one route")
        if any(p < 0 for _, p in self.routes):
            raise ValueError("route probabilities must be nonnegative")
        total = sum(p for _, p in self.routes)
        if total <= 0:
            raise ValueError("route probabilities must not all be zero")
        # Accept rows given as probabilities (sum 1) or percentages (sum 100).
        if abs(total - 1.0) > 1e-9 and abs(total - 100.0) > 1e-4:
            warnings.warn(
                f"route probabilities for ({self.origin},{self.dest}) {self.period} "
                f"sum to {total:g}; renormalizing",
                stacklevel=2,
            )
        normalized = tuple((tuple(path), p / total) for path, p in self.routes)
        object.__setattr__(self, "routes", normalized)


def _check_query(g: NetworkGraph, origin: int, dest: int) -> None:
    g.out_links(origin)  # raises UnknownNodeError
    g.out_links(dest)
    if origin == dest:
        raise ValueError("origin and destination must differ")


def _cdf_solution(
    path: Path, g: NetworkGraph, params: VehicleEnergyParams, algorithm: str
) -> RouteSolution:
    total, breakdowns = cdf_path_cost(path, g, params)
    links = g.path_links(path)
    y = []
    for link, bd in zip(links, breakdowns):
        _, _, cd_energy = link_mode_costs(link, params)
        y.append(bd.cd_energy_used / cd_energy)
    trajectory = (max(params.e_init, 0.0),) + tuple(bd.battery_after for bd in breakdowns)
    return RouteSolution(
        tuple(path), tuple(y), total, g.path_travel_time(path), trajectory, algorithm
    )


def _split_solution(
    path: Path,
    y: Sequence[float],
    g: NetworkGraph,
    params: VehicleEnergyParams,
    algorithm: str,
) -> RouteSolution:
    cost, _ = split_path_cost(path, y, g, params)
    links = g.path_links(path)
    battery = params.e_init
    trajectory = [max(battery, 0.0)]
    for link, yi in zip(links, y):
        _, _, cd_energy = link_mode_costs(link, params)
        battery -= cd_energy * yi
        trajectory.append(max(battery, 0.0))
    return RouteSolution(
        tuple(path), tuple(y), cost, g.path_travel_time(path), tuple(trajectory), algorithm
    )


def shortest_time_path(
    g: NetworkGraph, params: VehicleEnergyParams, origin: int, dest: int
) -> RouteSolution:
    """Dijkstra on link travel times; equal-time ties resolve to the
    lexicographically smallest node sequence. Energy is the battery-first cost
    of the resulting path."""
    _check_query(g, origin, dest)
    heap: list[tuple[float, Path]] = [(0.0, (origin,))]
    settled: set[int] = set()
    while heap:
        t, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == dest:
            sol = _cdf_solution(path, g, params, "mintime")
            return sol
        for link in g.out_links(node):
            if link.head not in settled:
                heapq.heappush(heap, (t + link.travel_time_h, path + (link.head,)))
    raise UnreachableDestinationError(f"no path from {origin} to {dest}")


def _flow_lp(
    g: NetworkGraph, costs: Sequence[float], source: int, sink: int
) -> lpmod.LinearProgram:
    """Unit-supply flow conservation LP over the graph links, x in [0, 1]."""
    links = g.links
    nodes = sorted(g.nodes)
    row = {node: i for i, node in enumerate(nodes)}
    a = np.zeros((len(nodes), len(links)))
    for k, link in enumerate(links):
        a[row[link.tail], k] += 1.0
        a[row[link.head], k] -= 1.0
    rhs = np.zeros(len(nodes))
    rhs[row[source]] = 1.0
    rhs[row[sink]] = -1.0
    return lpmod.LinearProgram(
        np.asarray(costs, dtype=float),
        a,
        [lpmod.EQ] * len(nodes),
        rhs,
        np.zeros(len(links)),
        np.ones(len(links)),
    )


def _extract_path(g: NetworkGraph, x: Sequence[float], source: int, sink: int) -> Path:
    """Follow arcs carrying unit flow from source to sink."""
    chosen = {(l.tail, l.head) for l, v in zip(g.links, x) if v > 0.5}
    path = [source]
    seen = {source}
    while path[-1] != sink:
        nexts = sorted(h for (t, h) in chosen if t == path[-1])
        if len(nexts) != 1 or nexts[0] in seen:
            raise RuntimeError(f"flow solution does not form a simple {source}->{sink} path")
        path.append(nexts[0])
        seen.add(nexts[0])
    return tuple(path)


def _gas_only_costs(g: NetworkGraph, params: VehicleEnergyParams) -> list[float]:
    return [link_mode_costs(link, params)[1] for link in g.links]


def _cs_min_cost(
    g: NetworkGraph, params: VehicleEnergyParams, source: int, sink: int
) -> tuple[float, Path] | None:
    """Cheapest gas-only path via the relaxed flow LP; None when disconnected."""
    if source not in g.nodes or sink not in g.nodes:
        return None
    res = lpmod.solve_lp(_flow_lp(g, _gas_only_costs(g, params), source, sink))
    if res.status != lpmod.OPTIMAL:
        return None
    return res.objective, _extract_path(g, res.x, source, sink)


def cdf_route_hybrid_lp(
    g: NetworkGraph,
    params: VehicleEnergyParams,
    origin: int,
    dest: int,
    max_partial_paths: int = DEFAULT_MAX_PATHS,
) -> RouteSolution:
    """Optimal charge-depleting-first route.

    Bounds the search with the min-time path's battery-first cost, enumerates
    partial simple paths up to their battery-depletion node, closes each with a
    gas-only min-cost flow LP (re-solved on a reduced graph when the suffix
    would revisit the prefix), and compares against fully electric paths.
    """
    _check_query(g, origin, dest)
    rho = shortest_time_path(g, params, origin, dest).energy_cost

    complete: list[tuple[float, Path]] = []      # paths finishing with battery left
    depleted: list[tuple[float, Path]] = []      # prefixes ending at a depletion node
    steps = 0

    def dfs(path: list[int], cost: float, battery: float) -> None:
        nonlocal steps
        steps += 1
        if steps > max_partial_paths:
            raise PathEnumerationOverflow(
                f"instance too large for enumeration: more than {max_partial_paths} "
                "partial paths explored"
            )
        if cost > rho + 1e-9:
            return
        node = path[-1]
        if battery <= 0:
            depleted.append((cost, tuple(path)))
            return
        if node == dest:
            complete.append((cost, tuple(path)))
            return
        for link in g.out_links(node):
            if link.head in path_set:
                continue
            step_cost, _, next_battery = cdf_link_step(link, battery, params)
            path.append(link.head)
            path_set.add(link.head)
            dfs(path, cost + step_cost, next_battery)
            path.pop()
            path_set.remove(link.head)

    path_set = {origin}
    dfs([origin], 0.0, params.e_init)

    suffix_cache: dict[tuple[int, frozenset[int] | None], tuple[float, Path] | None] = {}

    def suffix_from(p: int, blocked: frozenset[int]) -> tuple[float, Path] | None:
        key = (p, None)
        if key not in suffix_cache:
            suffix_cache[key] = _cs_min_cost(g, params, p, dest)
        unrestricted = suffix_cache[key]
        if unrestricted is not None and not (set(unrestricted[1][1:]) & blocked):
            return unrestricted
        key = (p, blocked)
        if key not in suffix_cache:
            sub = g.without_nodes(blocked, keep=(p, dest))
            suffix_cache[key] = _cs_min_cost(sub, params, p, dest)
        return suffix_cache[key]

    candidates: list[tuple[float, Path]] = list(complete)
    for cost, prefix in depleted:
        p = prefix[-1]
        if p == dest:
            candidates.append((cost, prefix))
            continue
        suffix = suffix_from(p, frozenset(prefix) - {p})
        if suffix is None:
            continue
        candidates.append((cost + suffix[0], prefix + suffix[1][1:]))

    if not candidates:
        raise UnreachableDestinationError(f"no path from {origin} to {dest}")
    best_cost, best_path = min(candidates, key=lambda c: (c[0], c[1]))
    return _cdf_solution(best_path, g, params, "cdf")


def cdf_oracle(
    g: NetworkGraph,
    params: VehicleEnergyParams,
    origin: int,
    dest: int,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> RouteSolution:
    """Brute force: cheapest battery-first cost over all simple paths."""
    _check_query(g, origin, dest)
    paths = g.enumerate_simple_paths(origin, dest, max_paths)
    if not paths:
        raise UnreachableDestinationError(f"no path from {origin} to {dest}")
    best_path = None
    best_cost = None
    for path in paths:
        cost, _ = cdf_path_cost(path, g, params)
        if best_cost is None or cost < best_cost:
            best_cost, best_path = cost, path
    return _cdf_solution(best_path, g, params, "cdf-oracle")


def build_crptc_milp(
    g: NetworkGraph, params: VehicleEnergyParams, origin: int, dest: int
) -> lpmod.MilpProblem:
    """Joint path/power-train MILP: per link a 0/1 selection x, an electric
    fraction y, and their linearized product z, with unit-flow conservation and
    a battery budget on the z-weighted electric energy."""
    links = g.links
    n = len(links)
    nodes = sorted(g.nodes)
    row = {node: i for i, node in enumerate(nodes)}
    n_vars = 3 * n  # [x | y | z]
    obj = np.zeros(n_vars)
    need = np.zeros(n)
    for k, link in enumerate(links):
        cd_cost, cs_cost, cd_energy = link_mode_costs(link, params)
        obj[k] = cs_cost
        obj[2 * n + k] = cd_cost - cs_cost
        need[k] = cd_energy

    rows: list[np.ndarray] = []
    senses: list[str] = []
    rhs: list[float] = []

    for node in nodes:
        r = np.zeros(n_vars)
        for k, link in enumerate(links):
            if link.tail == node:
                r[k] += 1.0
            if link.head == node:
                r[k] -= 1.0
        rows.append(r)
        senses.append(lpmod.EQ)
        rhs.append(1.0 if node == origin else (-1.0 if node == dest else 0.0))

    budget = np.zeros(n_vars)
    budget[2 * n :] = need
    rows.append(budget)
    senses.append(lpmod.LE)
    rhs.append(params.e_init)

    for k in range(n):
        r = np.zeros(n_vars)  # z <= y
        r[2 * n + k] = 1.0
        r[n + k] = -1.0
        rows.append(r)
        senses.append(lpmod.LE)
        rhs.append(0.0)
        r = np.zeros(n_vars)  # z <= x
        r[2 * n + k] = 1.0
        r[k] = -1.0
        rows.append(r)
        senses.append(lpmod.LE)
        rhs.append(0.0)
        r = np.zeros(n_vars)  # z >= y - (1 - x)
        r[k] = 1.0
        r[n + k] = 1.0
        r[2 * n + k] = -1.0
        rows.append(r)
        senses.append(lpmod.LE)
        rhs.append(1.0)

    lp = lpmod.LinearProgram(
        obj,
        np.vstack(rows),
        senses,
        np.asarray(rhs),
        np.zeros(n_vars),
        np.ones(n_vars),
    )
    return lpmod.MilpProblem(lp, tuple(range(n)))


def crptc_route_milp(
    g: NetworkGraph, params: VehicleEnergyParams, origin: int, dest: int
) -> RouteSolution:
    """Globally optimal route and electric split via the linearized MILP."""
    _check_query(g, origin, dest)
    problem = build_crptc_milp(g, params, origin, dest)
    res = lpmod.solve_milp(problem)
    if res.status == lpmod.INFEASIBLE:
        raise UnreachableDestinationError(f"no path from {origin} to {dest}")
    if res.status != lpmod.OPTIMAL:
        raise RuntimeError(f"MILP solve failed: {res.status}")
    n = len(g.links)
    path = _extract_path(g, res.x[:n], origin, dest)
    index = {(l.tail, l.head): k for k, l in enumerate(g.links)}
    z = res.x[2 * n :]
    y = [min(1.0, max(0.0, float(z[index[(i, j)]]))) for i, j in zip(path, path[1:])]
    return _split_solution(path, y, g, params, "crptc")


def crptc_oracle(
    g: NetworkGraph,
    params: VehicleEnergyParams,
    origin: int,
    dest: int,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> RouteSolution:
    """Brute force: best greedy battery split over all enumerated simple paths."""
    _check_query(g, origin, dest)
    paths = g.enumerate_simple_paths(origin, dest, max_paths)
    if not paths:
        raise UnreachableDestinationError(f"no path from {origin} to {dest}")
    best = None
    best_cost = None
    for path in paths:
        y = optimal_pt_allocation(path, g, params)
        cost, _ = split_path_cost(path, y, g, params)
        if best_cost is None or cost < best_cost:
            best_cost, best = cost, (path, y)
    return _split_solution(best[0], best[1], g, params, "crptc-oracle")


def expected_actual_cost(
    dist: OdRouteDistribution, g: NetworkGraph, params: VehicleEnergyParams
) -> tuple[float, float]:
    """Probability-weighted battery-first cost and travel time of observed routes."""
    cost = 0.0
    time = 0.0
    for path, prob in dist.routes:
        try:
            g.path_links(path)
        except (ValueError, KeyError) as exc:
            raise ValueError(f"invalid route {list(path)}: {exc}") from exc
        cost += prob * cdf_path_cost(path, g, params)[0]
        time += prob * g.path_travel_time(path)
    return cost, time
