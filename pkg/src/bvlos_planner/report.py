"""Mission planning driver and result export."""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import CELL, DependabilityGraph
from .grid import Cell
from .scenario import Scenario
from .solver import MODES, MissionPath, path_dependability, solve

RECORD_FIELDS = ("step", "kind", "x", "y", "z", "tower", "edge_weight")
EXPORT_FORMATS = ("records", "tables", "summary")


@dataclass
class PlanReport:
    scenario: Scenario
    start: Cell
    goal: Cell
    mode: str
    path: MissionPath | None
    base_weights: tuple[float, ...]
    graph_stats: dict
    build_seconds: float
    solve_seconds: float

    @property
    def found(self) -> bool:
        return self.path is not None

    @property
    def dependability(self) -> float | None:
        """Product of the mode-adjusted weights, i.e. the optimized objective."""
        return self.path.dependability if self.path is not None else None

    @property
    def full_dependability(self) -> float | None:
        """Product of the unmodified weights along the same path."""
        return path_dependability(self.base_weights) if self.path is not None else None

    @property
    def log_cost(self) -> float | None:
        return self.path.log_cost if self.path is not None else None

    @property
    def handovers(self) -> int:
        return self.path.handovers if self.path is not None else 0

    def records(self) -> list[dict]:
        if self.path is None:
            return []
        out = []
        for step, v in enumerate(self.path.vertices):
            x, y, z = v.cell
            out.append({
                "step": step, "kind": v.kind, "x": x, "y": y, "z": z,
                "tower": v.tower or "",
                "edge_weight": self.path.edge_weights[step - 1] if step else None,
            })
        return out

    def summary(self) -> dict:
        return {
            "status": "ok" if self.found else "no-path",
            "start": list(self.start),
            "goal": list(self.goal),
            "mode": self.mode,
            "dependability": self.dependability,
            "full_dependability": self.full_dependability,
            "log_cost": self.log_cost,
            "handovers": self.handovers,
            "steps": self.path.steps if self.path is not None else 0,
            "cells_visited": sum(1 for v in self.path.vertices if v.kind == CELL) if self.path is not None else 0,
            "build_seconds": self.build_seconds,
            "solve_seconds": self.solve_seconds,
            "graph": self.graph_stats,
            "parameters": _parameter_echo(self.scenario),
        }


def _parameter_echo(scenario: Scenario) -> dict:
    doc = scenario.to_dict()
    return {
        "name": scenario.name,
        "box": doc["box"],
        "radio": doc["radio"],
        "towers": doc["towers"],
        "meta": scenario.meta,
        "scenario_sha256": hashlib.sha256(scenario.dumps().encode()).hexdigest(),
    }


def plan(scenario: Scenario, start: Sequence[int] | None = None, goal: Sequence[int] | None = None,
         mode: str | None = None, graph: DependabilityGraph | None = None) -> PlanReport:
    """Build the graph (unless given) and solve one mission.

    Unspecified start, goal and mode fall back to the scenario's request.
    """
    req = scenario.request
    if start is None or goal is None:
        if req is None:
            raise ValueError("no start/goal given and the scenario has no request")
        start = start if start is not None else req.start
        goal = goal if goal is not None else req.goal
    mode = mode or (req.mode if req else "full")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")

    t0 = time.perf_counter()
    if graph is None:
        graph = scenario.build_graph()
    t1 = time.perf_counter()
    path = solve(graph, start, goal, MODES[mode])
    t2 = time.perf_counter()
    base = ()
    if path is not None:
        base = tuple(graph.edge(a, b).weight for a, b in zip(path.indices, path.indices[1:]))
    return PlanReport(scenario, Cell(*start), Cell(*goal), mode, path, base,
                      graph.stats(), t1 - t0, t2 - t1)


def _write_grid(path: Path, grid: np.ndarray) -> None:
    np.savetxt(path, np.asarray(grid, dtype=float), delimiter=",", fmt="%.17g")


def export_plan(report: PlanReport, out_dir, formats: Sequence[str] = EXPORT_FORMATS) -> list[Path]:
    """Write the requested outputs into ``out_dir`` and return the files written.

    ``records`` writes ``path.csv`` (one row per vertex plus a ``#summary``
    comment line); ``tables`` writes per-layer grids and path coordinates as
    CSV; ``summary`` writes ``summary.json``.
    """
    unknown = set(formats) - set(EXPORT_FORMATS)
    if unknown:
        raise ValueError(f"unknown export format(s): {', '.join(sorted(unknown))}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if "records" in formats:
        p = out / "path.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(RECORD_FIELDS)
            for r in report.records():
                w.writerow([r[k] if r[k] is not None else "" for k in RECORD_FIELDS[:-1]]
                           + ["" if r["edge_weight"] is None else repr(r["edge_weight"])])
            fh.write(f"#summary,dependability={report.dependability!r},"
                     f"log_cost={report.log_cost!r}\n")
        written.append(p)

    if "tables" in formats:
        sc = report.scenario
        box = sc.box
        tables = {
            "obstacle_heights.csv": sc.obstacle_heights,
            "no_fly.csv": sc.no_fly.astype(float),
            "risk.csv": sc.risk.risk_grid,
            "ground_safeness.csv": 1.0 - sc.risk.risk_grid,
            "free_levels.csv": box.free_mask.sum(axis=2),
        }
        for fname, grid in tables.items():
            _write_grid(out / fname, grid)
            written.append(out / fname)
        p = out / "path_cells.csv"
        side = box.cell_side_m
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("step", "x", "y", "z", "x_m", "y_m", "z_m"))
            step = 0
            for r in report.records():
                if r["kind"] != CELL:
                    continue
                w.writerow((step, r["x"], r["y"], r["z"],
                            (r["x"] - 0.5) * side, (r["y"] - 0.5) * side, (r["z"] - 0.5) * side))
                step += 1
        written.append(p)
        p = out / "towers.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("id", "x", "y", "x_m", "y_m"))
            for t in sc.towers:
                w.writerow((t.id, t.x, t.y, (t.x - 0.5) * side, (t.y - 0.5) * side))
        written.append(p)

    if "summary" in formats:
        p = out / "summary.json"
        p.write_text(json.dumps(report.summary(), indent=2) + "\n")
        written.append(p)
    return written


def read_path_records(path) -> tuple[list[dict], dict]:
    """Parse a ``path.csv`` written by :func:`export_plan`."""
    records = []
    summary: dict = {}
    with Path(path).open(newline="") as fh:
        lines = fh.read().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    for ln in lines:
        if ln.startswith("#summary,"):
            for item in ln[len("#summary,"):].split(","):
                key, _, value = item.partition("=")
                summary[key] = None if value == "None" else float(value)
    for row in csv.DictReader(body):
        records.append({
            "step": int(row["step"]), "kind": row["kind"],
            "x": int(row["x"]), "y": int(row["y"]), "z": int(row["z"]),
            "tower": row["tower"] or None,
            "edge_weight": float(row["edge_weight"]) if row["edge_weight"] else None,
        })
    return records, summary
