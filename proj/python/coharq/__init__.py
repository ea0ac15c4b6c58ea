"""Cooperative multi-source HARQ simulator."""

from ._core import (
    AdaptationResult,
    Cdi,
    ConfigError,
    HarqConfig,
    MetricsEstimate,
    Scenario,
    SearchBudgetExceeded,
    Topology,
    coordinate_ascent,
    db_to_linear,
    estimate,
    exhaustive_search,
    mutual_information,
    scenario,
    scenario_names,
    simulate_frame,
    sweep_csv,
    t_used_distribution,
)

__all__ = [
    "AdaptationResult",
    "Cdi",
    "ConfigError",
    "HarqConfig",
    "MetricsEstimate",
    "Scenario",
    "SearchBudgetExceeded",
    "Topology",
    "coordinate_ascent",
    "db_to_linear",
    "estimate",
    "exhaustive_search",
    "mutual_information",
    "scenario",
    "scenario_names",
    "simulate_frame",
    "sweep_csv",
    "t_used_distribution",
]
