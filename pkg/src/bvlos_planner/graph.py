"""Dependability-weighted directed graph over cells and (cell, tower) pairs.

Each free cell ``c`` gets a cell vertex. Each tower ``t`` visible from ``c``
adds a tower vertex ``(c, t)`` joined to the cell vertex by two intra-edges:
``cell -> tower`` priced at the handover success rate 1/2 and ``tower -> cell``
priced at 1. Inter-edges join ``(c, t)`` to ``(c', t)`` for adjacent cells
sharing tower ``t`` and are priced with the link reliability and ground
safeness of the destination cell. A tower change therefore always passes
through a cell vertex and pays the handover exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, TextIO

import numpy as np

from . import radio
from .grid import Cell, EnvironmentBox, adjacent
from .radio import RadioParams, Tower
from .risk import RiskFactorLayers, ground_safeness

CELL = "cell"
TOWER = "tower"
INTRA = "intra"
INTER = "inter"

HANDOVER_RATE = 0.5


class VertexId(NamedTuple):
    kind: str
    cell: Cell
    tower: str | None = None

    def __str__(self) -> str:
        if self.kind == CELL:
            return f"v{self.cell}"
        return f"v{self.cell}^{self.tower}"


class Edge(NamedTuple):
    """Directed edge; ``link`` and ``safety`` are the two inter-edge factors
    (both 1 on intra-edges) kept so the weight can be re-derived per mode."""

    target: int
    weight: float
    kind: str
    link: float = 1.0
    safety: float = 1.0


class GraphBoundError(RuntimeError):
    pass


def level_tower_capacity(i: int) -> int:
    """Most towers visible from one cell at level ``i``."""
    return (1 + 2 * i) ** 2


def vertex_bound(n: int, m: int, h: int) -> int:
    return n * m * h + sum(level_tower_capacity(i) * n * m for i in range(1, h + 1))


def edge_bound(n: int, m: int, h: int) -> int:
    intra = 2 * sum(level_tower_capacity(i) * n * m for i in range(1, h + 1))
    inter = 2 * sum(26 * level_tower_capacity(i) * n * m for i in range(1, h + 1))
    return intra + inter


@dataclass(eq=False)
class DependabilityGraph:
    vertices: list[VertexId]
    adjacency: list[tuple[Edge, ...]]
    shape: tuple[int, int, int]

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def index(self, v: VertexId) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v}") from None

    def cell_index(self, c: Sequence[int]) -> int:
        return self.index(VertexId(CELL, Cell(*c)))

    def __contains__(self, v: VertexId) -> bool:
        return v in self._index

    def vertex_count(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def out_edges(self, v: int | VertexId) -> tuple[Edge, ...]:
        """Outgoing edges of ``v`` sorted by target index."""
        i = v if isinstance(v, (int, np.integer)) else self.index(v)
        if not 0 <= i < len(self.vertices):
            raise KeyError(f"unknown vertex index {i}")
        return self.adjacency[i]

    def edge(self, u: int, v: int) -> Edge:
        for e in self.adjacency[u]:
            if e.target == v:
                return e
        raise KeyError(f"no edge {self.vertices[u]} -> {self.vertices[v]}")

    def edges(self) -> Iterator[tuple[int, Edge]]:
        for u, out in enumerate(self.adjacency):
            for e in out:
                yield u, e

    def stats(self) -> dict:
        n, m, h = self.shape
        nv, ne = self.vertex_count(), self.edge_count()
        vb, eb = vertex_bound(n, m, h), edge_bound(n, m, h)
        return {
            "vertices": nv,
            "edges": ne,
            "cell_vertices": sum(1 for v in self.vertices if v.kind == CELL),
            "intra_edges": sum(1 for _, e in self.edges() if e.kind == INTRA),
            "inter_edges": sum(1 for _, e in self.edges() if e.kind == INTER),
            "vertex_bound": vb,
            "edge_bound": eb,
            "vertex_slack": vb - nv,
            "edge_slack": eb - ne,
        }

    def check_bounds(self) -> None:
        n, m, h = self.shape
        if self.vertex_count() > vertex_bound(n, m, h):
            raise GraphBoundError(
                f"|V| = {self.vertex_count()} exceeds bound {vertex_bound(n, m, h)}")
        if self.edge_count() > edge_bound(n, m, h):
            raise GraphBoundError(
                f"|E| = {self.edge_count()} exceeds bound {edge_bound(n, m, h)}")

    def dump(self, fh: TextIO) -> None:
        """Write the line-oriented text form (one vertex or edge per line)."""
        for i, v in enumerate(self.vertices):
            x, y, z = v.cell
            tail = f" {v.tower}" if v.kind == TOWER else ""
            fh.write(f"vertex {i} {v.kind} {x} {y} {z}{tail}\n")
        for u, e in self.edges():
            fh.write(f"edge {u} {e.target} {e.weight!r} {e.kind}\n")


def parse_dump(lines: Iterable[str]) -> tuple[list[VertexId], list[tuple[int, int, float, str]]]:
    vertices: list[VertexId] = []
    edges = []
    for line in lines:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "vertex":
            cell = Cell(int(parts[3]), int(parts[4]), int(parts[5]))
            tower = parts[6] if parts[2] == TOWER else None
            vertices.append(VertexId(parts[2], cell, tower))
        elif parts[0] == "edge":
            edges.append((int(parts[1]), int(parts[2]), float(parts[3]), parts[4]))
        else:
            raise ValueError(f"unrecognized dump line: {line!r}")
    return vertices, edges


def build_graph(box: EnvironmentBox, towers: Sequence[Tower], params: RadioParams,
                layers: RiskFactorLayers) -> DependabilityGraph:
    """Build the dependability graph and check the size bounds on the result.

    Zero-weight inter-edges (destination with risk 1) are not inserted.
    """
    side = box.cell_side_m
    by_pos = {(t.x, t.y): t for t in towers}
    cells = list(box.free_cells())

    visible: dict[Cell, list[Tower]] = {}
    for c in cells:
        x, y, z = c
        seen = [by_pos[(tx, ty)]
                for tx in range(x - z, x + z + 1)
                for ty in range(y - z, y + z + 1)
                if (tx, ty) in by_pos]
        seen.sort(key=lambda t: t.id)
        visible[c] = seen

    vertices = [VertexId(CELL, c) for c in cells]
    for c in cells:
        vertices.extend(VertexId(TOWER, c, t.id) for t in visible[c])
    index = {v: i for i, v in enumerate(vertices)}

    safety = {c: ground_safeness(c, layers) for c in cells}
    link: dict[tuple[Cell, str], float] = {}
    for c in cells:
        for t in visible[c]:
            link[c, t.id] = radio.link_reliability(c, t, params, side)

    adjacency: list[list[Edge]] = [[] for _ in vertices]
    for c in cells:
        vc = index[VertexId(CELL, c)]
        neighbors = adjacent(box, c)
        for t in visible[c]:
            vct = index[VertexId(TOWER, c, t.id)]
            adjacency[vc].append(Edge(vct, HANDOVER_RATE, INTRA))
            adjacency[vct].append(Edge(vc, 1.0, INTRA))
            for nb in neighbors:
                key = (nb, t.id)
                if key not in link:
                    continue
                lr, gs = link[key], safety[nb]
                w = lr * gs
                if w > 0.0:
                    adjacency[vct].append(Edge(index[VertexId(TOWER, nb, t.id)], w, INTER, lr, gs))

    graph = DependabilityGraph(
        vertices,
        [tuple(sorted(out, key=lambda e: e.target)) for out in adjacency],
        box.shape,
    )
    graph.check_bounds()
    return graph
