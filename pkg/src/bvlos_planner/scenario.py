"""Scenario documents: loading, validation, saving and seeded generation.

A scenario is a JSON document with the sections ``box``, ``radio``,
``towers``, ``layers`` and an optional ``request``. Layer grids are nested
lists indexed ``[x - 1][y - 1]``, or a string naming a comma-separated file
next to the scenario.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

from .grid import Cell, EnvironmentBox, GridError, apply_nofly, apply_obstacles, new_box
from .graph import DependabilityGraph, build_graph
from .radio import ENVIRONMENTS, RadioParams, Tower
from .risk import FACTORS, RiskError, RiskFactorLayers
from .solver import MODES

RISK_PROFILES = ("uniform", "hotspot", "corridor")


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class PlanRequest:
    start: Cell
    goal: Cell
    mode: str = "full"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ScenarioError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")


@dataclass(frozen=True, eq=False)
class Scenario:
    length_m: float
    width_m: float
    height_m: float
    cell_side_m: float
    radio: RadioParams
    towers: tuple[Tower, ...]
    obstacle_heights: np.ndarray
    no_fly: np.ndarray
    risk: RiskFactorLayers
    request: PlanRequest | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    @cached_property
    def box(self) -> EnvironmentBox:
        """Box with obstacle and no-fly cells removed."""
        box = new_box(self.length_m, self.width_m, self.height_m, self.cell_side_m)
        return apply_nofly(apply_obstacles(box, self.obstacle_heights), self.no_fly)

    def build_graph(self) -> DependabilityGraph:
        return build_graph(self.box, self.towers, self.radio, self.risk)

    def to_dict(self) -> dict:
        layers: dict[str, Any] = {
            "obstacle_heights": self.obstacle_heights.tolist(),
            "no_fly": self.no_fly.astype(int).tolist(),
        }
        if self.risk.p_event is not None:
            layers["risk_factors"] = {f: getattr(self.risk, f).tolist() for f in FACTORS}
        if self.risk.precomputed is not None:
            layers["risk"] = self.risk.precomputed.tolist()
        doc: dict[str, Any] = {}
        if self.name:
            doc["name"] = self.name
        if self.meta:
            doc["meta"] = self.meta
        doc["box"] = {
            "length_m": self.length_m, "width_m": self.width_m,
            "height_m": self.height_m, "cell_side_m": self.cell_side_m,
        }
        doc["radio"] = {
            "rx_gain": self.radio.rx_gain, "alpha": self.radio.alpha,
            "beta": self.radio.beta, "elevation_unit": self.radio.elevation_unit,
        }
        doc["towers"] = [
            {"id": t.id, "x": t.x, "y": t.y, "tx_power_w": t.tx_power_w,
             "tx_gain": t.tx_gain, "wavelength_m": t.wavelength_m}
            for t in self.towers
        ]
        doc["layers"] = layers
        if self.request is not None:
            doc["request"] = {
                "from": list(self.request.start), "to": list(self.request.goal),
                "mode": self.request.mode,
            }
        return doc

    def dumps(self) -> str:
        return _format_json(self.to_dict()) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]


def _format_json(obj: Any, indent: int = 0) -> str:
    """JSON with each innermost list kept on a single line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and any(isinstance(v, (list, dict)) for v in obj):
        items = [pad + _format_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def _parse_cell(value, what: str) -> Cell:
    if isinstance(value, str):
        value = value.split(",")
    try:
        x, y, z = (int(v) for v in value)
    except (TypeError, ValueError):
        raise ScenarioError(f"{what} must be an x,y,z triple, got {value!r}") from None
    return Cell(x, y, z)


def parse_cell(text: str) -> Cell:
    return _parse_cell(text, "cell")


def _grid(value, name: str, shape: tuple[int, int], base: Path | None, dtype=float) -> np.ndarray:
    if isinstance(value, str):
        path = Path(value)
        if not path.is_absolute() and base is not None:
            path = base / path
        try:
            arr = np.loadtxt(path, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise ScenarioError(f"{name}: cannot read grid file {path}: {exc}") from None
    else:
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError):
            raise ScenarioError(f"{name}: grid is not numeric") from None
    if arr.shape != shape:
        raise ScenarioError(f"{name} grid has shape {arr.shape}, expected {shape}")
    if not np.isfinite(arr).all():
        x, y = np.argwhere(~np.isfinite(arr))[0] + 1
        raise ScenarioError(f"{name}[{x},{y}] is not a finite number")
    return arr.astype(dtype)


def _number(section: dict, key: str, where: str, default=None) -> float:
    if key not in section:
        if default is None:
            raise ScenarioError(f"{where}: missing {key!r}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def scenario_from_dict(doc: dict, base: Path | None = None) -> Scenario:
    """Validate a parsed scenario document; grid file names resolve against ``base``."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    box_doc = doc.get("box")
    if not isinstance(box_doc, dict):
        raise ScenarioError("missing 'box' section")
    dims = [_number(box_doc, k, "box") for k in ("length_m", "width_m", "height_m", "cell_side_m")]
    try:
        box = new_box(*dims)
    except GridError as exc:
        raise ScenarioError(str(exc)) from None
    shape = (box.n, box.m)

    radio_doc = doc.get("radio", {})
    env = radio_doc.get("environment")
    if env is not None and env not in ENVIRONMENTS:
        raise ScenarioError(f"unknown radio environment {env!r}")
    alpha0, beta0 = ENVIRONMENTS[env or "suburban"]
    try:
        radio = RadioParams(
            rx_gain=_number(radio_doc, "rx_gain", "radio", 1.0),
            alpha=_number(radio_doc, "alpha", "radio", alpha0),
            beta=_number(radio_doc, "beta", "radio", beta0),
            elevation_unit=radio_doc.get("elevation_unit", "degrees"),
        )
    except ValueError as exc:
        raise ScenarioError(f"radio: {exc}") from None

    layers_doc = doc.get("layers", {})
    heights = (_grid(layers_doc["obstacle_heights"], "obstacle_heights", shape, base)
               if "obstacle_heights" in layers_doc else np.zeros(shape))
    if (heights < 0).any():
        x, y = np.argwhere(heights < 0)[0] + 1
        raise ScenarioError(f"obstacle_heights[{x},{y}] = {heights[x - 1, y - 1]:g} is negative")
    no_fly = (_grid(layers_doc["no_fly"], "no_fly", shape, base)
              if "no_fly" in layers_doc else np.zeros(shape))
    if not np.isin(no_fly, (0.0, 1.0)).all():
        x, y = np.argwhere(~np.isin(no_fly, (0.0, 1.0)))[0] + 1
        raise ScenarioError(f"no_fly[{x},{y}] must be 0 or 1")
    no_fly = no_fly.astype(bool)

    factors = layers_doc.get("risk_factors")
    grids: dict[str, np.ndarray] = {}
    if factors is not None:
        for f in FACTORS:
            if f not in factors:
                raise ScenarioError(f"risk_factors: missing {f!r}")
            grids[f] = _grid(factors[f], f, shape, base)
    if "risk" in layers_doc:
        grids["precomputed"] = _grid(layers_doc["risk"], "risk", shape, base)
    try:
        risk = RiskFactorLayers(**grids) if grids else RiskFactorLayers.zeros(*shape)
    except RiskError as exc:
        raise ScenarioError(str(exc)) from None

    scenario_box = apply_nofly(apply_obstacles(box, heights), no_fly)
    towers = []
    seen_ids: set[str] = set()
    seen_cells: dict[tuple[int, int], str] = {}
    for k, t in enumerate(doc.get("towers", [])):
        where = f"towers[{k}]"
        if not isinstance(t, dict) or "x" not in t or "y" not in t:
            raise ScenarioError(f"{where}: needs at least 'x' and 'y'")
        tid = str(t.get("id", f"t{k}"))
        try:
            tower = Tower(
                tid, int(t["x"]), int(t["y"]),
                tx_power_w=_number(t, "tx_power_w", where, 1.0),
                tx_gain=_number(t, "tx_gain", where, 1.0),
                wavelength_m=_number(t, "wavelength_m", where, 0.125),
            )
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{where}: {exc}") from None
        pos = (tower.x, tower.y)
        if tid in seen_ids:
            raise ScenarioError(f"{where}: duplicate tower id {tid!r}")
        if not (1 <= tower.x <= box.n and 1 <= tower.y <= box.m):
            raise ScenarioError(f"tower {tid} at {pos} is outside the {shape} footprint")
        if pos in seen_cells:
            raise ScenarioError(f"tower {tid} shares cell {pos} with tower {seen_cells[pos]}")
        if not scenario_box.is_free(tower.cell):
            raise ScenarioError(f"tower {tid} sits on blocked cell {tower.cell}")
        seen_ids.add(tid)
        seen_cells[pos] = tid
        towers.append(tower)

    request = None
    if doc.get("request"):
        req = doc["request"]
        request = PlanRequest(
            _parse_cell(req.get("from"), "request.from"),
            _parse_cell(req.get("to"), "request.to"),
            req.get("mode", "full"),
        )

    return Scenario(
        dims[0], dims[1], dims[2], dims[3], radio, tuple(towers),
        heights, no_fly, risk, request,
        name=str(doc.get("name", "")), meta=dict(doc.get("meta", {})),
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: parse error at line {exc.lineno}: {exc.msg}") from None
    return scenario_from_dict(doc, base=path.parent)


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(scenario.dumps())


def bundled_scenario_path(name: str) -> Path:
    return Path(__file__).parent / "data" / f"{name}.json"


def _impact_profile(rng: np.random.Generator, n: int, m: int, profile: str) -> np.ndarray:
    if profile == "uniform":
        return rng.uniform(0.0, 0.6, size=(n, m))
    if profile == "hotspot":
        xs, ys = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
        out = np.zeros((n, m))
        sigma = max(n, m) / 5.0
        for _ in range(max(1, n * m // 30)):
            cx, cy = rng.uniform(0, n), rng.uniform(0, m)
            peak = rng.uniform(0.5, 1.0)
            out += peak * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * sigma**2))
        return np.clip(out + rng.uniform(0.0, 0.05, size=(n, m)), 0.0, 1.0)
    if profile == "corridor":
        out = rng.uniform(0.4, 0.9, size=(n, m))
        width = max(1, m // 5)
        y0 = int(rng.integers(0, m - width + 1))
        out[:, y0:y0 + width] = rng.uniform(0.0, 0.05, size=(n, width))
        return out
    raise ScenarioError(f"unknown risk profile {profile!r}; choose from {', '.join(RISK_PROFILES)}")


def generate_scenario(n: int, m: int, h: int, tower_count: int, obstacle_density: float,
                      risk_profile: str = "uniform", seed: int = 0, *,
                      cell_side_m: float = 20.0, nofly_density: float = 0.0,
                      environment: str = "suburban") -> Scenario:
    """Random scenario that is a pure function of its arguments.

    ``obstacle_density`` is the fraction of ground columns carrying an
    obstacle; ``nofly_density`` likewise for no-fly columns. Towers go on
    columns free of both.
    """
    if min(n, m, h) < 1 or tower_count < 0:
        raise ScenarioError("grid sizes must be positive and tower_count non-negative")
    for name, value in (("obstacle_density", obstacle_density), ("nofly_density", nofly_density)):
        if not 0.0 <= value <= 1.0:
            raise ScenarioError(f"{name} must lie in [0, 1], got {value}")
    if risk_profile not in RISK_PROFILES:
        raise ScenarioError(f"unknown risk profile {risk_profile!r}; choose from {', '.join(RISK_PROFILES)}")
    rng = np.random.default_rng(seed)
    height_m = h * cell_side_m

    has_obstacle = rng.random((n, m)) < obstacle_density
    heights = np.where(has_obstacle, np.round(rng.uniform(0.2, 1.0, (n, m)) * height_m, 1), 0.0)
    no_fly = (rng.random((n, m)) < nofly_density) & ~has_obstacle

    ground_free = np.argwhere(~has_obstacle & ~no_fly)
    if tower_count > len(ground_free):
        raise ScenarioError(
            f"cannot place {tower_count} towers on {len(ground_free)} free ground cells")
    picks = rng.choice(len(ground_free), size=tower_count, replace=False) if tower_count else []
    width = len(str(max(tower_count - 1, 0)))
    towers = tuple(
        Tower(f"t{k:0{width}d}", int(ground_free[p][0]) + 1, int(ground_free[p][1]) + 1,
              tx_power_w=float(np.round(rng.uniform(10.0, 40.0), 2)),
              tx_gain=1.0, wavelength_m=0.15)
        for k, p in enumerate(picks)
    )

    risk = RiskFactorLayers(
        p_event=rng.uniform(0.01, 0.2, size=(n, m)),
        p_impact=_impact_profile(rng, n, m, risk_profile),
        p_fatality=rng.uniform(0.1, 0.9, size=(n, m)),
    )
    alpha, beta = ENVIRONMENTS[environment]
    return Scenario(
        n * cell_side_m, m * cell_side_m, height_m, cell_side_m,
        RadioParams(alpha=alpha, beta=beta), towers, heights, no_fly, risk,
        name=f"generated-{n}x{m}x{h}-seed{seed}",
        meta={"generator": {
            "n": n, "m": m, "h": h, "tower_count": tower_count,
            "obstacle_density": obstacle_density, "risk_profile": risk_profile,
            "seed": seed, "cell_side_m": cell_side_m, "nofly_density": nofly_density,
            "environment": environment,
        }},
    )
