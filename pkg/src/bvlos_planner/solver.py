"""Maximum-dependability path search.

Maximizing a product of edge probabilities is the same as minimizing the sum
of ``|log w|`` over the path, and every such cost is non-negative because
``0 < w <= 1``. Dijkstra's algorithm therefore finds the optimum.

Equal-cost candidates are ranked by edge count, then by the vertex-index
sequence, which makes results reproducible and rules out zero-cost cycles.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .graph import CELL, INTER, INTRA, TOWER, DependabilityGraph, Edge, VertexId


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolveMode:
    override_gs: bool = False
    override_lr: bool = False
    override_hsr: bool = False

    def __post_init__(self):
        if self.override_gs and self.override_lr and self.override_hsr:
            raise SolverError("at most two weight factors may be overridden")

    @property
    def is_identity(self) -> bool:
        return not (self.override_gs or self.override_lr or self.override_hsr)


MODES = {
    "full": SolveMode(),
    "min-risk": SolveMode(override_lr=True, override_hsr=True),
    "max-connectivity": SolveMode(override_gs=True),
    "min-handover": SolveMode(override_gs=True, override_lr=True),
}


@dataclass(frozen=True)
class MissionPath:
    vertices: tuple[VertexId, ...]
    indices: tuple[int, ...]
    edge_weights: tuple[float, ...]
    edge_kinds: tuple[str, ...]

    @property
    def dependability(self) -> float:
        return path_dependability(self.edge_weights)

    @property
    def log_cost(self) -> float:
        return math.fsum(log_cost(w) for w in self.edge_weights)

    @property
    def handovers(self) -> int:
        """Number of cell-to-tower attachments, the first one included."""
        return sum(
            1 for i, kind in enumerate(self.edge_kinds)
            if kind == INTRA and self.vertices[i].kind == CELL
        )

    @property
    def steps(self) -> int:
        return len(self.edge_weights)


def log_cost(weight: float) -> float:
    if not 0.0 < weight <= 1.0:
        raise SolverError(f"edge weight {weight!r} outside (0, 1]")
    return -math.log(weight)


def path_dependability(weights: Sequence[float]) -> float:
    p = 1.0
    for w in weights:
        p *= w
    return p


def _mode_weight(e: Edge, mode: SolveMode) -> float:
    if e.kind == INTER:
        return (1.0 if mode.override_lr else e.link) * (1.0 if mode.override_gs else e.safety)
    if mode.override_hsr:
        return 1.0
    return e.weight


def apply_mode(graph: DependabilityGraph, mode: SolveMode) -> DependabilityGraph:
    """Graph with the overridden weight factors replaced by 1."""
    if mode.is_identity:
        return graph
    adjacency = [
        tuple(e._replace(weight=_mode_weight(e, mode)) for e in out)
        for out in graph.adjacency
    ]
    return DependabilityGraph(graph.vertices, adjacency, graph.shape)


def _require_cell(graph: DependabilityGraph, c: Sequence[int], role: str) -> int:
    n, m, h = graph.shape
    x, y, z = c
    if not (1 <= x <= n and 1 <= y <= m and 1 <= z <= h):
        raise SolverError(f"{role} cell {tuple(c)} is outside the box {graph.shape}")
    v = VertexId(CELL, tuple(c))
    if v not in graph:
        raise SolverError(f"{role} cell {tuple(c)} is not free")
    return graph.cell_index(c)


def _trace(pred: list[int], v: int) -> list[int]:
    seq = [v]
    while pred[v] >= 0:
        v = pred[v]
        seq.append(v)
    seq.reverse()
    return seq


def solve(graph: DependabilityGraph, start: Sequence[int], goal: Sequence[int],
          mode: SolveMode | None = None) -> MissionPath | None:
    """Maximum-dependability path from cell ``start`` to cell ``goal``.

    Returns None when ``goal`` cannot be reached. Weights reported on the
    path are the mode-adjusted ones.
    """
    s = _require_cell(graph, start, "start")
    g = _require_cell(graph, goal, "goal")
    if mode is not None:
        graph = apply_mode(graph, mode)
    if s == g:
        return MissionPath((graph.vertices[s],), (s,), (), ())

    nv = graph.vertex_count()
    inf = math.inf
    cost = [inf] * nv
    hops = [0] * nv
    pred = [-1] * nv
    done = [False] * nv
    cost[s] = 0.0
    heap = [(0.0, 0, s)]
    while heap:
        cu, ku, u = heapq.heappop(heap)
        if done[u] or cu != cost[u] or ku != hops[u]:
            continue
        done[u] = True
        if u == g:
            break
        for e in graph.adjacency[u]:
            v = e.target
            if done[v]:
                continue
            cv = cu + log_cost(e.weight)
            kv = ku + 1
            if cv < cost[v] or (cv == cost[v] and kv < hops[v]):
                better = True
            elif cv == cost[v] and kv == hops[v]:
                # same prefix length: compare predecessor chains lexicographically
                better = _trace(pred, u) < _trace(pred, pred[v])
            else:
                better = False
            if better:
                cost[v], hops[v], pred[v] = cv, kv, u
                heapq.heappush(heap, (cv, kv, v))

    if not done[g]:
        return None
    seq = _trace(pred, g)
    edges = [graph.edge(a, b) for a, b in zip(seq, seq[1:])]
    return MissionPath(
        tuple(graph.vertices[i] for i in seq),
        tuple(seq),
        tuple(e.weight for e in edges),
        tuple(e.kind for e in edges),
    )


def tower_switches(path: MissionPath) -> list[tuple[str, str]]:
    """(from, to) tower ids for every change of serving tower along ``path``."""
    out = []
    current = None
    for v in path.vertices:
        if v.kind == TOWER:
            if current is not None and v.tower != current:
                out.append((current, v.tower))
            current = v.tower
    return out
