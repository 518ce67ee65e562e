from __future__ import annotations

import numpy as np
import pytest

from bvlos_planner.graph import DependabilityGraph
from bvlos_planner.radio import RadioParams, Tower
from bvlos_planner.risk import RiskFactorLayers
from bvlos_planner.scenario import Scenario, bundled_scenario_path, load_scenario


def make_scenario(n, m, h, towers=(), side=20.0, heights=None, no_fly=None, risk=None,
                  radio=None, request=None) -> Scenario:
    heights = np.zeros((n, m)) if heights is None else np.asarray(heights, dtype=float)
    no_fly = np.zeros((n, m), dtype=bool) if no_fly is None else np.asarray(no_fly, dtype=bool)
    layers = RiskFactorLayers(precomputed=np.zeros((n, m)) if risk is None else np.asarray(risk))
    return Scenario(n * side, m * side, h * side, side, radio or RadioParams(),
                    tuple(towers), heights, no_fly, layers, request)


def all_simple_path_products(graph: DependabilityGraph, s: int, g: int) -> list[tuple[float, tuple[int, ...]]]:
    """Every simple s->g path with its product; only for tiny graphs."""
    out = []

    def walk(u, prod, path):
        if u == g:
            out.append((prod, tuple(path)))
            return
        for e in graph.out_edges(u):
            if e.target not in path:
                path.append(e.target)
                walk(e.target, prod * e.weight, path)
                path.pop()

    walk(s, 1.0, [s])
    return sorted(out, reverse=True)


@pytest.fixture
def three_towers() -> Scenario:
    return load_scenario(bundled_scenario_path("three_towers"))


@pytest.fixture
def corridor() -> Scenario:
    """Two cells side by side at h=1 with one tower under the first."""
    risk = [[0.0], [0.3]]
    return make_scenario(2, 1, 1, towers=[Tower("t", 1, 1)], risk=risk)


# one verdict per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    ok = _CRITERIA.get(number, (title, True))[1] and rep.passed
    _CRITERIA[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
