"""Solver-versus-oracle cross checks on small random instances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import DependabilityGraph
from .grid import Cell
from .oracle import DEFAULT_VERTEX_BUDGET, exhaustive_best
from .scenario import RISK_PROFILES, Scenario, generate_scenario
from .solver import MODES, apply_mode, solve

REL_TOL = 1e-9


@dataclass(frozen=True)
class Instance:
    scenario: Scenario
    graph: DependabilityGraph
    start: Cell
    goal: Cell


@dataclass(frozen=True)
class CheckResult:
    instance: Instance
    mode: str
    solver: float | None
    oracle: float | None
    paths_explored: int

    @property
    def agree(self) -> bool:
        if self.solver is None or self.oracle is None:
            return self.solver is None and self.oracle is None
        return math.isclose(self.solver, self.oracle, rel_tol=REL_TOL, abs_tol=0.0)


def random_instances(count: int, seed: int = 0, max_vertices: int = DEFAULT_VERTEX_BUDGET,
                     sizes=((3, 3, 1), (4, 4, 1), (5, 5, 1), (3, 3, 2), (4, 4, 2)),
                     max_towers: int = 3) -> Iterator[Instance]:
    """Seeded random scenarios with a random start/goal pair each.

    Instances whose graph exceeds ``max_vertices`` are skipped and redrawn.
    """
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        n, m, h = sizes[int(rng.integers(len(sizes)))]
        sc = generate_scenario(
            n, m, h,
            tower_count=int(rng.integers(1, max_towers + 1)),
            obstacle_density=float(rng.choice([0.0, 0.1, 0.25])),
            risk_profile=RISK_PROFILES[int(rng.integers(len(RISK_PROFILES)))],
            seed=int(rng.integers(2**31)),
        )
        graph = sc.build_graph()
        cells = list(sc.box.free_cells())
        if graph.vertex_count() > max_vertices or not cells:
            continue
        i, j = rng.integers(len(cells), size=2)
        produced += 1
        yield Instance(sc, graph, cells[i], cells[j])


def cross_check(inst: Instance, mode: str = "full",
                vertex_budget: int = DEFAULT_VERTEX_BUDGET,
                max_expansions: int | None = None) -> CheckResult:
    """Solve ``inst`` both ways under ``mode``.

    Raises:
        OracleBudgetError: if the enumeration refuses the instance.
    """
    path = solve(inst.graph, inst.start, inst.goal, MODES[mode])
    ref = exhaustive_best(apply_mode(inst.graph, MODES[mode]), inst.start, inst.goal,
                          vertex_budget=vertex_budget, max_expansions=max_expansions)
    return CheckResult(
        inst, mode,
        path.dependability if path is not None else None,
        ref.best_dependability if ref is not None else None,
        ref.paths_explored if ref is not None else 0,
    )
