"""File formats: links/segments CSV, vehicle config, and observed-route JSON."""
from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path as FilePath
from typing import Any

from .energy import CycleFactors, DriveCycleTable, VehicleEnergyParams
from .graph import Link, NetworkGraph, TrafficMode
from .preprocess import SegmentRecord
from .routing import OdRouteDistribution, RouteSolution

LINKS_COLUMNS = ["from", "to", "length_mi", "avg_speed_mph", "mode"]
SEGMENTS_COLUMNS = ["link_from", "link_to", "seq", "length_mi", "avg_speed_mph"]

CONFIG_KEYS = {
    "c_gas",
    "c_ele",
    "e_init",
    "mu_cd_low",
    "mu_cd_medium",
    "mu_cd_high",
    "mu_cs_low",
    "mu_cs_medium",
    "mu_cs_high",
}


class InputFormatError(ValueError):
    """Malformed input file; the message carries file and line context."""


def _open_csv(path: str | FilePath, columns: list[str]):
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
    reader = csv.DictReader(handle)
    if reader.fieldnames != columns:
        handle.close()
        raise InputFormatError(
            f"{path}: expected header {','.join(columns)}, got "
            f"{','.join(reader.fieldnames or [])}"
        )
    return handle, reader


def read_links_csv(path: str | FilePath) -> NetworkGraph:
    handle, reader = _open_csv(path, LINKS_COLUMNS)
    links = []
    with handle:
        for row in reader:
            try:
                mode = TrafficMode(row["mode"].strip().lower())
                links.append(
                    Link(
                        int(row["from"]),
                        int(row["to"]),
                        float(row["length_mi"]),
                        float(row["avg_speed_mph"]),
                        mode,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise InputFormatError(f"{path}: line {reader.line_num}: {exc}") from exc
    try:
        return NetworkGraph(links)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def write_links_csv(g: NetworkGraph, path: str | FilePath) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(LINKS_COLUMNS)
        for link in g.links:
            writer.writerow(
                [link.tail, link.head, repr(link.length_mi), repr(link.avg_speed_mph), link.mode.value]
            )


def read_segments_csv(path: str | FilePath) -> list[SegmentRecord]:
    handle, reader = _open_csv(path, SEGMENTS_COLUMNS)
    segments = []
    with handle:
        for row in reader:
            try:
                segments.append(
                    SegmentRecord(
                        int(row["link_from"]),
                        int(row["link_to"]),
                        int(row["seq"]),
                        float(row["length_mi"]),
                        float(row["avg_speed_mph"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise InputFormatError(f"{path}: line {reader.line_num}: {exc}") from exc
    return segments


def load_vehicle_params(path: str | FilePath | None = None) -> VehicleEnergyParams:
    """Defaults, optionally overridden by a flat key=value config file."""
    values: dict[str, float] = {}
    if path is not None:
        try:
            text = FilePath(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputFormatError(f"{path}: {exc}") from exc
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputFormatError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise InputFormatError(f"{path}: line {lineno}: unknown key {key!r}")
            try:
                values[key] = float(value.strip())
            except ValueError as exc:
                raise InputFormatError(f"{path}: line {lineno}: {exc}") from exc

    defaults = VehicleEnergyParams()

    def factors(mode: str) -> CycleFactors:
        base = getattr(defaults.table, mode)
        return CycleFactors(
            values.get(f"mu_cd_{mode}", base.mu_cd),
            values.get(f"mu_cs_{mode}", base.mu_cs),
        )

    return VehicleEnergyParams(
        c_gas=values.get("c_gas", defaults.c_gas),
        c_ele=values.get("c_ele", defaults.c_ele),
        e_init=values.get("e_init", defaults.e_init),
        table=DriveCycleTable(factors("low"), factors("medium"), factors("high")),
    )


def read_routes_json(path: str | FilePath) -> list[OdRouteDistribution]:
    try:
        data = json.loads(FilePath(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
    if not isinstance(data, list):
        raise InputFormatError(f"{path}: expected a JSON array of O-D entries")
    out = []
    for i, entry in enumerate(data):
        try:
            routes = tuple(
                (tuple(int(n) for n in r["nodes"]), float(r["prob"]))
                for r in entry["routes"]
            )
            out.append(
                OdRouteDistribution(
                    int(entry["origin"]), int(entry["dest"]), str(entry["period"]), routes
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"{path}: entry {i}: {exc}") from exc
    return out


def route_solution_to_dict(sol: RouteSolution) -> dict[str, Any]:
    return {
        "algorithm": sol.algorithm,
        "path": list(sol.path),
        "y": list(sol.y),
        "energy_cost_usd": sol.energy_cost,
        "travel_time_h": sol.travel_time_h,
        "battery_trajectory_kwh": list(sol.battery_trajectory),
    }
