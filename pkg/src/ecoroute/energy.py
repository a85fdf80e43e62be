"""PHEV energy costing: per-link mode costs, charge-depleting-first path evaluation,
and the optimal battery split for a fixed path.

Costs are dollars; battery energy is kWh; the conversion factors are miles per kWh
(electric) and miles per gallon (gas), one pair per traffic mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .graph import NetworkGraph, Path, TrafficMode

DEFAULT_GAS_PRICE = 2.75      # $/gal
DEFAULT_ELEC_PRICE = 0.114    # $/kWh
DEFAULT_BATTERY_KWH = 5.57


@dataclass(frozen=True)
class CycleFactors:
    """Average distance per unit energy under one drive cycle."""

    mu_cd: float  # mi/kWh, battery-only driving
    mu_cs: float  # mi/gal, engine-primary driving

    def __post_init__(self) -> None:
        if not (self.mu_cd > 0 and self.mu_cs > 0):
            raise ValueError("conversion factors must be strictly positive")


@dataclass(frozen=True)
class DriveCycleTable:
    """Conversion factors per traffic mode. Defaults are the PHEV20 calibration."""

    low: CycleFactors = CycleFactors(5.7, 58.6)
    medium: CycleFactors = CycleFactors(6.2, 69.4)
    high: CycleFactors = CycleFactors(4.2, 45.7)

    def factors(self, mode: TrafficMode) -> CycleFactors:
        return getattr(self, mode.value)


@dataclass(frozen=True)
class VehicleEnergyParams:
    c_gas: float = DEFAULT_GAS_PRICE
    c_ele: float = DEFAULT_ELEC_PRICE
    e_init: float = DEFAULT_BATTERY_KWH
    table: DriveCycleTable = field(default_factory=DriveCycleTable)

    def __post_init__(self) -> None:
        if self.c_gas < 0 or self.c_ele < 0:
            raise ValueError("energy prices must be nonnegative")
        if self.e_init < 0:
            raise ValueError("initial battery energy must be nonnegative")


@dataclass(frozen=True)
class LinkCostBreakdown:
    """Dollar and energy accounting for one traversed link."""

    elec_cost: float
    gas_cost: float
    cd_energy_used: float  # kWh actually drawn from the battery
    battery_after: float   # kWh, clamped at 0 for reporting

    @property
    def total_cost(self) -> float:
        return self.elec_cost + self.gas_cost


def link_mode_costs(link, params: VehicleEnergyParams) -> tuple[float, float, float]:
    """(all-electric cost $, all-gas cost $, full electric energy kWh) for one link."""
    f = params.table.factors(link.mode)
    cd_energy = link.length_mi / f.mu_cd
    cd_cost = params.c_ele * cd_energy
    cs_cost = params.c_gas * link.length_mi / f.mu_cs
    return cd_cost, cs_cost, cd_energy


def savings_per_kwh(mode: TrafficMode, params: VehicleEnergyParams) -> float:
    """Marginal dollar benefit of spending one battery kWh on a link of this mode."""
    f = params.table.factors(mode)
    return params.c_gas * f.mu_cd / f.mu_cs - params.c_ele


def cdf_link_step(link, battery: float, params: VehicleEnergyParams) -> tuple[float, float, float]:
    """Traverse one link under charge-depleting-first with `battery` kWh remaining.

    Returns (dollar cost, battery energy drawn, battery after). `battery` may be
    negative: the sign alone selects the costing case, and the returned level is
    decremented by the full electric requirement unconditionally.
    """
    f = params.table.factors(link.mode)
    need = link.length_mi / f.mu_cd
    if battery <= 0:
        cost = params.c_gas * link.length_mi / f.mu_cs
        used = 0.0
    elif battery >= need:
        cost = params.c_ele * need
        used = need
    else:
        cost = params.c_ele * battery + params.c_gas * (
            link.length_mi - f.mu_cd * battery
        ) / f.mu_cs
        used = battery
    return cost, used, battery - need


def cdf_path_cost(
    path: Path, g: NetworkGraph, params: VehicleEnergyParams
) -> tuple[float, list[LinkCostBreakdown]]:
    """Total dollar cost of driving `path` battery-first, with per-link breakdowns."""
    links = g.path_links(path)
    battery = params.e_init
    total = 0.0
    out: list[LinkCostBreakdown] = []
    for link in links:
        cost, used, battery = cdf_link_step(link, battery, params)
        if used > 0:
            f = params.table.factors(link.mode)
            elec = params.c_ele * used
            gas = cost - elec
        else:
            elec, gas = 0.0, cost
        out.append(LinkCostBreakdown(elec, max(gas, 0.0), used, max(battery, 0.0)))
        total += cost
    return total, out


def split_path_cost(
    path: Path, y: Sequence[float], g: NetworkGraph, params: VehicleEnergyParams
) -> tuple[float, float]:
    """Cost and battery energy of driving `path` with electric fraction y per link."""
    links = g.path_links(path)
    if len(y) != len(links):
        raise ValueError(f"expected {len(links)} split fractions, got {len(y)}")
    cost = 0.0
    energy = 0.0
    for link, yi in zip(links, y):
        if not 0.0 <= yi <= 1.0:
            raise ValueError(f"split fraction {yi} outside [0, 1]")
        cd_cost, cs_cost, cd_energy = link_mode_costs(link, params)
        cost += cs_cost * (1.0 - yi) + cd_cost * yi
        energy += cd_energy * yi
    return cost, energy


def optimal_pt_allocation(
    path: Path, g: NetworkGraph, params: VehicleEnergyParams
) -> list[float]:
    """Cost-minimizing electric fractions for a fixed path.

    Continuous-knapsack greedy: spend the battery on links in descending order of
    dollar savings per kWh, ties broken by path position. Links whose savings rate
    is not positive get no battery at all.
    """
    links = g.path_links(path)
    rates = [savings_per_kwh(link.mode, params) for link in links]
    order = sorted(range(len(links)), key=lambda k: (-rates[k], k))
    remaining = params.e_init
    y = [0.0] * len(links)
    for k in order:
        if remaining <= 0 or rates[k] <= 0:
            break
        f = params.table.factors(links[k].mode)
        cap = links[k].length_mi / f.mu_cd
        take = min(cap, remaining)
        y[k] = take / cap
        remaining -= take
    return y
