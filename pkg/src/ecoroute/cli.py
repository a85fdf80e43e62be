"""Command-line front end: route, compare, preprocess.

Exit codes: 0 success, 1 malformed input / unknown node, 2 unreachable destination.
"""
from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path as FilePath

import click

from . import fileio, report as report_mod
from .graph import PathEnumerationOverflow, UnknownNodeError
from .lp import format_lp
from .preprocess import build_graph
from .routing import (
    UnreachableDestinationError,
    build_crptc_milp,
    cdf_route_hybrid_lp,
    crptc_route_milp,
    shortest_time_path,
)

_INPUT_ERRORS = (
    fileio.InputFormatError,
    UnknownNodeError,
    PathEnumerationOverflow,
    ValueError,
    OSError,
)

ALGORITHMS = {
    "crptc": crptc_route_milp,
    "cdf": cdf_route_hybrid_lp,
    "mintime": shortest_time_path,
}


def _fail(exc: Exception, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _load_inputs(links: str, config: str | None, battery: float | None):
    graph = fileio.read_links_csv(links)
    params = fileio.load_vehicle_params(config)
    if battery is not None:
        params = dataclasses.replace(params, e_init=battery)
    return graph, params


def _write_json(data, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out:
        FilePath(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


@click.group()
def main() -> None:
    """Energy-optimal routing for plug-in hybrid vehicles."""


@main.command()
@click.option("--links", required=True, help="Links CSV file.")
@click.option("--algo", required=True, type=click.Choice(sorted(ALGORITHMS)))
@click.option("--origin", required=True, type=int)
@click.option("--dest", required=True, type=int)
@click.option("--battery", type=float, default=None, help="Override initial battery kWh.")
@click.option("--config", default=None, help="Vehicle parameter config file.")
@click.option("--out", default=None, help="Write the route JSON here (default: stdout).")
@click.option("--dump-lp", default=None, help="Dump the routing MILP instance to this file.")
def route(links, algo, origin, dest, battery, config, out, dump_lp) -> None:
    """Compute one route with the chosen algorithm."""
    try:
        graph, params = _load_inputs(links, config, battery)
        if dump_lp:
            problem = build_crptc_milp(graph, params, origin, dest)
            FilePath(dump_lp).write_text(
                format_lp(problem.lp, problem.integer_vars), encoding="utf-8"
            )
        solution = ALGORITHMS[algo](graph, params, origin, dest)
    except UnreachableDestinationError as exc:
        _fail(exc, 2)
    except _INPUT_ERRORS as exc:
        _fail(exc, 1)
    payload = fileio.route_solution_to_dict(solution)
    payload["origin"] = origin
    payload["dest"] = dest
    _write_json(payload, out)


@main.command()
@click.option("--links", required=True, help="Links CSV file.")
@click.option("--origin", type=int, default=None)
@click.option("--dest", type=int, default=None)
@click.option("--battery", type=float, default=None)
@click.option("--config", default=None)
@click.option("--routes", default=None, help="Observed-route JSON for the actual baseline.")
@click.option("--period", default="AM", type=click.Choice(["AM", "MD", "PM", "NT"]))
@click.option("--out", default=None, help="Write the report JSON here (default: stdout).")
@click.option("--plot-csv", default=None, help="Write a long-format plot CSV here.")
@click.option("--figures-dir", default=None, help="Render comparison figures into this directory.")
def compare(links, origin, dest, battery, config, routes, period, out, plot_csv, figures_dir) -> None:
    """Run every algorithm and report per-pair costs, times, and percent deltas."""
    try:
        graph, params = _load_inputs(links, config, battery)
        actual_by_pair = {}
        if routes:
            for dist in fileio.read_routes_json(routes):
                if dist.period == period:
                    actual_by_pair[(dist.origin, dist.dest)] = dist
        if origin is not None and dest is not None:
            pairs = [(origin, dest)]
        elif actual_by_pair:
            pairs = sorted(actual_by_pair)
        else:
            raise ValueError("provide --origin/--dest or a --routes file")
        result = report_mod.build_comparison_report(graph, params, pairs, actual_by_pair)
        if plot_csv:
            report_mod.write_plot_csv(result, plot_csv)
        if figures_dir:
            from .plots import render_comparison_figures

            render_comparison_figures(result, figures_dir)
    except UnreachableDestinationError as exc:
        _fail(exc, 2)
    except _INPUT_ERRORS as exc:
        _fail(exc, 1)
    _write_json(result, out)


@main.command()
@click.option("--segments", required=True, help="Segments CSV file.")
@click.option("--out", required=True, help="Write the resulting links CSV here.")
@click.option("--report", "report_out", default=None, help="Write the report JSON here.")
def preprocess(segments, out, report_out) -> None:
    """Classify segment modes, split links on abrupt mode changes, write links CSV."""
    try:
        records = fileio.read_segments_csv(segments)
        graph, rep = build_graph(records)
        fileio.write_links_csv(graph, out)
    except _INPUT_ERRORS as exc:
        _fail(exc, 1)
    payload = {
        "fictitious_nodes_added": rep.fictitious_nodes_added,
        "links_out": rep.links_out,
        "link_modes": {f"{i}-{j}": mode.value for (i, j), mode in rep.link_modes.items()},
    }
    _write_json(payload, report_out)


if __name__ == "__main__":
    main()
