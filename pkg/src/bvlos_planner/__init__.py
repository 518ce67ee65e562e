"""Maximum-dependability path planning for cellular-connected BVLoS drone missions."""

from .graph import DependabilityGraph, VertexId, build_graph
from .grid import Cell, EnvironmentBox, adjacent, apply_nofly, apply_obstacles, new_box
from .oracle import OracleResult, exhaustive_best
from .radio import RadioParams, Tower
from .report import PlanReport, export_plan, plan
from .risk import RiskFactorLayers
from .scenario import Scenario, generate_scenario, load_scenario, save_scenario
from .solver import MODES, MissionPath, SolveMode, apply_mode, solve

__version__ = "0.1.0"

__all__ = [
    "Cell", "DependabilityGraph", "EnvironmentBox", "MODES", "MissionPath", "OracleResult",
    "PlanReport", "RadioParams", "RiskFactorLayers", "Scenario", "SolveMode", "Tower",
    "VertexId", "adjacent", "apply_mode", "apply_nofly", "apply_obstacles", "build_graph",
    "exhaustive_best", "export_plan", "generate_scenario", "load_scenario", "new_box", "plan",
    "save_scenario", "solve",
]
