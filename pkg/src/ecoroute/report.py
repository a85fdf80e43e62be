"""Cross-algorithm comparison reports: JSON structure and long-format plot CSV."""
from __future__ import annotations

import csv
from pathlib import Path as FilePath
from typing import Any

from .energy import VehicleEnergyParams
from .fileio import route_solution_to_dict
from .graph import NetworkGraph
from .routing import (
    OdRouteDistribution,
    cdf_route_hybrid_lp,
    crptc_route_milp,
    expected_actual_cost,
    shortest_time_path,
)


def percent_saving(baseline: float, value: float) -> float:
    """Positive when `value` is cheaper than `baseline`."""
    if baseline == 0:
        return 0.0
    return 100.0 * (baseline - value) / baseline


def compare_pair(
    g: NetworkGraph,
    params: VehicleEnergyParams,
    origin: int,
    dest: int,
    actual: OdRouteDistribution | None = None,
) -> dict[str, Any]:
    solutions = {
        "crptc": crptc_route_milp(g, params, origin, dest),
        "cdf": cdf_route_hybrid_lp(g, params, origin, dest),
        "mintime": shortest_time_path(g, params, origin, dest),
    }
    algorithms: dict[str, Any] = {
        name: route_solution_to_dict(sol) for name, sol in solutions.items()
    }
    if actual is not None:
        cost, time = expected_actual_cost(actual, g, params)
        algorithms["actual"] = {
            "energy_cost_usd": cost,
            "travel_time_h": time,
            "period": actual.period,
        }

    crptc = algorithms["crptc"]
    deltas: dict[str, float] = {}
    for other in ("cdf", "mintime", "actual"):
        if other not in algorithms:
            continue
        deltas[f"crptc_vs_{other}_energy"] = percent_saving(
            algorithms[other]["energy_cost_usd"], crptc["energy_cost_usd"]
        )
        deltas[f"crptc_vs_{other}_time"] = percent_saving(
            algorithms[other]["travel_time_h"], crptc["travel_time_h"]
        )
    return {"origin": origin, "dest": dest, "algorithms": algorithms, "deltas_pct": deltas}


def build_comparison_report(
    g: NetworkGraph,
    params: VehicleEnergyParams,
    pairs: list[tuple[int, int]],
    actual_by_pair: dict[tuple[int, int], OdRouteDistribution] | None = None,
) -> dict[str, Any]:
    actual_by_pair = actual_by_pair or {}
    return {
        "pairs": [
            compare_pair(g, params, o, d, actual_by_pair.get((o, d))) for o, d in pairs
        ]
    }


def recompute_deltas(pair_report: dict[str, Any]) -> dict[str, float]:
    """Re-derive the percentage deltas from the raw values stored in a report."""
    algorithms = pair_report["algorithms"]
    crptc = algorithms["crptc"]
    out: dict[str, float] = {}
    for other in ("cdf", "mintime", "actual"):
        if other not in algorithms:
            continue
        out[f"crptc_vs_{other}_energy"] = percent_saving(
            algorithms[other]["energy_cost_usd"], crptc["energy_cost_usd"]
        )
        out[f"crptc_vs_{other}_time"] = percent_saving(
            algorithms[other]["travel_time_h"], crptc["travel_time_h"]
        )
    return out


def write_plot_csv(report: dict[str, Any], path: str | FilePath) -> None:
    """Long-format table (od, algorithm, metric, value) ready for plotting."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["od", "algorithm", "metric", "value"])
        for pair in report["pairs"]:
            od = f"{pair['origin']}-{pair['dest']}"
            for name, algo in pair["algorithms"].items():
                writer.writerow([od, name, "energy_cost_usd", repr(algo["energy_cost_usd"])])
                writer.writerow([od, name, "travel_time_h", repr(algo["travel_time_h"])])
