import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvlos_planner.graph import CELL, INTER, INTRA, TOWER, DependabilityGraph
from bvlos_planner.radio import Tower
from bvlos_planner.scenario import generate_scenario
from bvlos_planner.solver import (
    MODES, SolveMode, SolverError, apply_mode, log_cost, path_dependability, solve,
    tower_switches,
)

from conftest import all_simple_path_products, make_scenario

LN2 = 0.6931471805599453094172321214581765680755
# 0.5 * P_LoS(45 deg, suburban) * (1 - 0.3), mpmath at 40 digits
CORRIDOR_DEPENDABILITY = 0.3499999450189392888366116779171120160041
CORRIDOR_LOG_COST = 1.049822281587434915806300741373488195447


def test_log_cost_values():
    assert log_cost(1.0) == 0.0
    assert log_cost(0.5) == pytest.approx(LN2, rel=1e-15)
    assert log_cost(0.25) == pytest.approx(2 * LN2, rel=1e-15)


@pytest.mark.parametrize("w", [0.0, -0.1, 1.0000001, math.nan])
def test_log_cost_rejects_out_of_range(w):
    with pytest.raises(SolverError):
        log_cost(w)


def test_path_dependability():
    assert path_dependability([0.5, 0.9, 1.0]) == pytest.approx(0.45, rel=1e-15)
    assert path_dependability([]) == 1.0


def test_start_equals_goal(three_towers):
    p = solve(three_towers.build_graph(), (2, 3, 1), (2, 3, 1))
    assert p.steps == 0
    assert p.dependability == 1.0
    assert p.handovers == 0
    assert [v.kind for v in p.vertices] == [CELL]


def test_corridor_path(corridor):
    p = solve(corridor.build_graph(), (1, 1, 1), (2, 1, 1))
    assert [(v.kind, v.cell, v.tower) for v in p.vertices] == [
        (CELL, (1, 1, 1), None), (TOWER, (1, 1, 1), "t"),
        (TOWER, (2, 1, 1), "t"), (CELL, (2, 1, 1), None)]
    assert p.edge_kinds == (INTRA, INTER, INTRA)
    assert p.edge_weights[0] == 0.5 and p.edge_weights[2] == 1.0
    assert p.dependability == pytest.approx(CORRIDOR_DEPENDABILITY, rel=1e-14)
    assert p.log_cost == pytest.approx(CORRIDOR_LOG_COST, rel=1e-14)
    assert p.handovers == 1


def test_no_path_without_towers():
    g = make_scenario(3, 1, 1).build_graph()
    assert solve(g, (1, 1, 1), (3, 1, 1)) is None


def test_no_path_to_unsafe_cell():
    g = make_scenario(2, 1, 1, towers=[Tower("t", 1, 1)], risk=[[0.0], [1.0]]).build_graph()
    assert solve(g, (1, 1, 1), (2, 1, 1)) is None
    assert solve(g, (2, 1, 1), (1, 1, 1)) is not None


@pytest.mark.parametrize("bad, msg", [((5, 1, 1), "outside"), ((1, 1, 3), "outside")])
def test_bad_endpoints(corridor, bad, msg):
    g = corridor.build_graph()
    with pytest.raises(SolverError, match=msg):
        solve(g, bad, (1, 1, 1))
    with pytest.raises(SolverError, match=msg):
        solve(g, (1, 1, 1), bad)


def test_blocked_endpoint_rejected():
    g = make_scenario(2, 1, 1, towers=[Tower("t", 1, 1)], heights=[[0.0], [50.0]]).build_graph()
    with pytest.raises(SolverError, match="not free"):
        solve(g, (1, 1, 1), (2, 1, 1))


def test_three_overrides_rejected():
    with pytest.raises(SolverError):
        SolveMode(override_gs=True, override_lr=True, override_hsr=True)


def test_modes_table():
    assert MODES["full"].is_identity
    assert MODES["min-risk"] == SolveMode(override_lr=True, override_hsr=True)
    assert MODES["max-connectivity"] == SolveMode(override_gs=True)
    assert MODES["min-handover"] == SolveMode(override_gs=True, override_lr=True)


def test_apply_mode_factors(three_towers):
    g = three_towers.build_graph()
    assert apply_mode(g, MODES["full"]) is g
    for name, mode in MODES.items():
        h = apply_mode(g, mode)
        for (u, e), (_, f) in zip(g.edges(), h.edges()):
            if e.kind == INTER:
                link = 1.0 if mode.override_lr else e.link
                safety = 1.0 if mode.override_gs else e.safety
                assert f.weight == link * safety, name
            elif mode.override_hsr:
                assert f.weight == 1.0
            else:
                assert f.weight == e.weight


def test_min_handover_counts_attachments():
    sc = generate_scenario(6, 6, 1, tower_count=4, obstacle_density=0.0, seed=21)
    g = sc.build_graph()
    for s, t in [((1, 1, 1), (6, 6, 1)), ((1, 6, 1), (6, 1, 1))]:
        p = solve(g, s, t, MODES["min-handover"])
        if p is None:
            continue
        assert p.dependability == pytest.approx(0.5 ** p.handovers, rel=1e-12)
        full = solve(g, s, t)
        assert p.handovers <= full.handovers


def test_tower_switches(three_towers):
    p = solve(three_towers.build_graph(), (2, 3, 1), (3, 2, 1))
    switches = tower_switches(p)
    assert len(switches) == p.handovers - 1
    assert all(a != b for a, b in switches)


def test_deterministic_repeat():
    sc = generate_scenario(6, 5, 2, tower_count=4, obstacle_density=0.2, seed=3)
    g = sc.build_graph()
    cells = list(sc.box.free_cells())
    for mode in MODES.values():
        a = solve(g, cells[0], cells[-1], mode)
        b = solve(sc.build_graph(), cells[0], cells[-1], mode)
        assert a == b


def _rebuilt(graph, edge_weights):
    adjacency = []
    it = iter(edge_weights)
    for out in graph.adjacency:
        adjacency.append(tuple(e._replace(weight=next(it)) for e in out))
    return DependabilityGraph(graph.vertices, adjacency, graph.shape)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_matches_enumeration_and_monotone(seed, data):
    sc = generate_scenario(3, 2, 1, tower_count=2, obstacle_density=0.0, seed=seed)
    g = sc.build_graph()
    cells = list(sc.box.free_cells())
    s = data.draw(st.sampled_from(cells))
    t = data.draw(st.sampled_from(cells))
    p = solve(g, s, t)
    paths = all_simple_path_products(g, g.cell_index(s), g.cell_index(t))
    if p is None:
        assert not paths
        return
    assert p.dependability == pytest.approx(paths[0][0], rel=1e-12)

    # lowering any weight never raises the optimum
    weights = [e.weight for _, e in g.edges()]
    k = data.draw(st.integers(0, len(weights) - 1))
    factor = data.draw(st.floats(0.01, 1.0))
    weights[k] *= factor
    q = solve(_rebuilt(g, weights), s, t)
    assert q is None or q.dependability <= p.dependability * (1 + 1e-12)


weight_lists = st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=12)


@given(weight_lists, weight_lists)
def test_product_order_matches_log_order(a, b):
    pa, pb = path_dependability(a), path_dependability(b)
    ca, cb = math.fsum(map(log_cost, a)), math.fsum(map(log_cost, b))
    if not math.isclose(pa, pb, rel_tol=1e-9):
        assert (pa > pb) == (ca < cb)
