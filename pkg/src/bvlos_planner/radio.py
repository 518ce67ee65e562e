"""Air-to-ground link model between a drone cell and ground cellular towers.

Received power follows the Friis free-space equation and is normalized by its
value at one cell side of slant distance. The line-of-sight probability is the
S-curve model of Al-Hourani et al., evaluated at the tower-to-drone elevation
angle. A tower is only reachable from cell ``(x, y, z)`` if it lies within the
``(1 + 2z) x (1 + 2z)`` square of ground cells centered under the drone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .grid import Cell

# S-curve (alpha, beta) pairs for the elevation angle in degrees.
ENVIRONMENTS = {
    "suburban": (4.88, 0.43),
    "urban": (9.61, 0.16),
    "dense-urban": (12.08, 0.11),
    "highrise-urban": (27.23, 0.08),
}


@dataclass(frozen=True)
class Tower:
    id: str
    x: int
    y: int
    tx_power_w: float = 1.0
    tx_gain: float = 1.0
    wavelength_m: float = 0.125

    def __post_init__(self):
        for name in ("tx_power_w", "tx_gain", "wavelength_m"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tower {self.id}: {name} must be positive")

    @property
    def cell(self) -> Cell:
        return Cell(self.x, self.y, 1)


@dataclass(frozen=True)
class RadioParams:
    rx_gain: float = 1.0
    alpha: float = ENVIRONMENTS["suburban"][0]
    beta: float = ENVIRONMENTS["suburban"][1]
    elevation_unit: Literal["degrees", "radians"] = "degrees"

    def __post_init__(self):
        for name in ("rx_gain", "alpha", "beta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.elevation_unit not in ("degrees", "radians"):
            raise ValueError(f"unknown elevation unit {self.elevation_unit!r}")


def slant_distance(c: Cell, t: Tower, cell_side: float) -> float:
    """Drone-to-tower distance in meters, never below one cell side."""
    d = cell_side * math.sqrt((c[0] - t.x) ** 2 + (c[1] - t.y) ** 2 + (c[2] - 1) ** 2)
    return max(d, cell_side)


def friis(tx_power_w: float, tx_gain: float, rx_gain: float,
          wavelength_m: float, distance_m: float) -> float:
    return tx_power_w * tx_gain * rx_gain * (wavelength_m / (4.0 * math.pi * distance_m)) ** 2


def friis_power(t: Tower, c: Cell, params: RadioParams, cell_side: float) -> float:
    """Received power in watts at cell ``c`` from tower ``t``."""
    return friis(t.tx_power_w, t.tx_gain, params.rx_gain, t.wavelength_m,
                 slant_distance(c, t, cell_side))


def normalized_power(t: Tower, c: Cell, params: RadioParams, cell_side: float) -> float:
    """Received power relative to the one-cell-side reference, in [0, 1]."""
    p = friis_power(t, c, params, cell_side)
    p_ref = friis(t.tx_power_w, t.tx_gain, params.rx_gain, t.wavelength_m, cell_side)
    return min(max(p / p_ref, 0.0), 1.0)


def elevation_angle(c: Cell, t: Tower, cell_side: float, unit: str = "degrees") -> float:
    ground = cell_side * math.hypot(c[0] - t.x, c[1] - t.y)
    theta = math.atan2(cell_side * c[2], ground)
    return math.degrees(theta) if unit == "degrees" else theta


def los_curve(theta: float, alpha: float, beta: float) -> float:
    return 1.0 / (1.0 + alpha * math.exp(-beta * (theta - alpha)))


def los_probability(c: Cell, t: Tower, params: RadioParams, cell_side: float) -> float:
    theta = elevation_angle(c, t, cell_side, params.elevation_unit)
    return los_curve(theta, params.alpha, params.beta)


def is_visible(c: Cell, t: Tower) -> bool:
    return abs(t.x - c[0]) <= c[2] and abs(t.y - c[1]) <= c[2]


def visible_towers(c: Cell, towers: Iterable[Tower]) -> list[Tower]:
    """Towers inside the visibility square of ``c``, sorted by id."""
    return sorted((t for t in towers if is_visible(c, t)), key=lambda t: t.id)


def link_reliability(c: Cell, t: Tower, params: RadioParams, cell_side: float) -> float:
    """LoS probability times normalized power; zero outside the visibility square."""
    if not is_visible(c, t):
        return 0.0
    return los_probability(c, t, params, cell_side) * normalized_power(t, c, params, cell_side)
