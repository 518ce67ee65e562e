"""Brute-force reference for the maximum-dependability path.

Enumerates paths depth-first and keeps the best product of edge weights. It
shares no code with the Dijkstra solver and relaxes no distance labels.

Only simple paths are enumerated. Every weight is at most 1, so extending a
walk never raises its product and cutting a cycle out never lowers it. The
optimum is therefore attained on a simple path.

Three further reductions keep the enumeration tractable without changing the
optimum:

* A cell is visited in one contiguous block. If a path leaves cell ``c`` and
  comes back, the stretch between the first and last vertex of ``c`` can be
  swapped for the intra-cell hop ``(c, t1) -> c -> (c, t2)``. That hop costs
  at most one cell-to-tower edge, and any tower change along the stretch
  pays at least that much.
* Vertices from which the goal is unreachable are never entered.
* A partial path is dropped once even its most optimistic completion cannot
  beat the best complete path found so far. The optimistic completion from a
  vertex is the best product over all walks to the goal, simple or not,
  obtained by plain value iteration over the edge list. Walks include every
  simple path, so the bound never undercuts a real completion beyond
  rounding. On a tower vertex whose cell vertex is already on the path, the
  bound only counts edges that leave the cell. Products that agree to ``TIE_TOL`` relative count as ties and
  are dropped, since the same product is reached through many equivalent
  tower assignments. The reported optimum is thus exact to that tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import CELL, DependabilityGraph, VertexId

DEFAULT_VERTEX_BUDGET = 500
# relative margin under which a partial path counts as tying the incumbent
TIE_TOL = 1e-12


class OracleBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best_dependability: float
    best_path: tuple[int, ...]
    paths_explored: int


def _reaching(graph: DependabilityGraph, g: int) -> list[bool]:
    nv = len(graph.vertices)
    preds: list[list[int]] = [[] for _ in range(nv)]
    for u, e in graph.edges():
        preds[e.target].append(u)
    seen = [False] * nv
    seen[g] = True
    frontier = [g]
    while frontier:
        v = frontier.pop()
        for u in preds[v]:
            if not seen[u]:
                seen[u] = True
                frontier.append(u)
    return seen


def _completion_bounds(graph: DependabilityGraph, g: int) -> list[float]:
    # value iteration: best walk product from each vertex to g, no heap, no logs
    nv = len(graph.vertices)
    edges = list(graph.edges())
    bound = [0.0] * nv
    bound[g] = 1.0
    for _ in range(nv):
        changed = False
        for u, e in edges:
            cand = e.weight * bound[e.target]
            if cand > bound[u]:
                bound[u] = cand
                changed = True
        if not changed:
            break
    return bound


def exhaustive_best(graph: DependabilityGraph, start: Sequence[int], goal: Sequence[int],
                    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
                    prune: bool = True,
                    max_expansions: int | None = None) -> OracleResult | None:
    """Best ``start -> goal`` path by enumeration, or None if unreachable.

    ``prune=False`` disables the completion bound and the incumbent cut-off,
    so every cell-contiguous simple path is counted in ``paths_explored``.

    Raises:
        OracleBudgetError: if the graph has more than ``vertex_budget`` vertices,
            or the search extends more than ``max_expansions`` partial paths.
    """
    nv = len(graph.vertices)
    if nv > vertex_budget:
        raise OracleBudgetError(
            f"graph has {nv} vertices, above the enumeration budget of {vertex_budget}")
    lookup = {v: i for i, v in enumerate(graph.vertices)}
    s = lookup[VertexId(CELL, tuple(start))]
    g = lookup[VertexId(CELL, tuple(goal))]
    if s == g:
        return OracleResult(1.0, (s,), 1)

    useful = _reaching(graph, g)
    if not useful[s]:
        return None
    bound = _completion_bounds(graph, g) if prune else [1.0] * nv
    cell_of = [v.cell for v in graph.vertices]
    is_cell = [v.kind == CELL for v in graph.vertices]
    gc = cell_of[g]
    ring = [max(abs(c[0] - gc[0]), abs(c[1] - gc[1]), abs(c[2] - gc[2])) for c in cell_of]
    # most promising successors first so a strong incumbent appears early
    succ = [
        sorted(((e.target, e.weight) for e in graph.out_edges(u) if useful[e.target]),
               key=lambda tw: (-tw[1] * bound[tw[0]], ring[tw[0]], is_cell[tw[0]], tw[0]))
        for u in range(nv)
    ]
    # a tower vertex whose cell vertex is already on the path can only leave the cell
    exit_bound = [
        max((w * bound[t] for t, w in succ[u] if not is_cell[t] or t == g), default=0.0)
        for u in range(nv)
    ]
    cell_vertex = {cell_of[u]: u for u in range(nv) if is_cell[u]}

    on_path = [False] * nv
    on_path[s] = True
    cell_hits = {cell_of[s]: 1}
    path = [s]
    best = -1.0
    best_path: tuple[int, ...] = ()
    explored = 0
    expansions = 0
    # frame: [vertex, product so far, next successor position]
    stack = [[s, 1.0, 0]]
    while stack:
        frame = stack[-1]
        u, prod, pos = frame
        if pos >= len(succ[u]):
            stack.pop()
            on_path[u] = False
            cell_hits[cell_of[u]] -= 1
            path.pop()
            continue
        frame[2] = pos + 1
        v, w = succ[u][pos]
        if on_path[v]:
            continue
        if cell_of[v] != cell_of[u] and cell_hits.get(cell_of[v], 0):
            continue
        p = prod * w
        if prune:
            ahead = exit_bound[v] if not is_cell[v] and on_path[cell_vertex[cell_of[v]]] else bound[v]
            if p * ahead <= best * (1.0 + TIE_TOL):
                continue
        if v == g:
            explored += 1
            if p > best:
                best = p
                best_path = tuple(path) + (g,)
            continue
        expansions += 1
        if max_expansions is not None and expansions > max_expansions:
            raise OracleBudgetError(
                f"enumeration exceeded {max_expansions} partial paths; instance too large")
        on_path[v] = True
        cell_hits[cell_of[v]] = cell_hits.get(cell_of[v], 0) + 1
        path.append(v)
        stack.append([v, p, 0])

    if explored == 0:
        return None
    return OracleResult(best, best_path, explored)
