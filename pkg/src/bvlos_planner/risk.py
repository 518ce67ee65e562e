"""Ground-risk map: probability of a fatal outcome if the drone comes down in a column."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

FACTORS = ("p_event", "p_impact", "p_fatality")


class RiskError(ValueError):
    pass


def check_probability_grid(name: str, grid, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Return ``grid`` as a read-only float array after range and shape checks.

    Offending entries are reported with 1-based ``[x,y]`` coordinates.
    """
    arr = np.array(grid, dtype=float)
    if arr.ndim != 2:
        raise RiskError(f"{name} must be a 2D grid, got {arr.ndim} dimensions")
    if shape is not None and arr.shape != tuple(shape):
        raise RiskError(f"{name} grid has shape {arr.shape}, expected {tuple(shape)}")
    bad = np.argwhere(~((arr >= 0.0) & (arr <= 1.0)))
    if len(bad):
        i, j = bad[0]
        raise RiskError(f"{name}[{i + 1},{j + 1}] = {arr[i, j]:g} outside [0,1]")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RiskFactorLayers:
    """Per-column crash, impact and fatality probabilities.

    ``precomputed`` optionally carries a ready-made risk grid; when given it
    takes precedence over the factor product.
    """

    p_event: np.ndarray | None = None
    p_impact: np.ndarray | None = None
    p_fatality: np.ndarray | None = None
    precomputed: np.ndarray | None = None

    def __post_init__(self):
        factors = [getattr(self, f) for f in FACTORS]
        given = [f is not None for f in factors]
        if any(given) and not all(given):
            missing = [f for f, g in zip(FACTORS, given) if not g]
            raise RiskError(f"risk factors incomplete, missing {', '.join(missing)}")
        shape = None
        for name in FACTORS + ("precomputed",):
            grid = getattr(self, name)
            if grid is None:
                continue
            grid = check_probability_grid(name if name != "precomputed" else "risk", grid, shape)
            shape = grid.shape
            object.__setattr__(self, name, grid)
        if self.precomputed is not None and all(given):
            warnings.warn("both risk factors and a precomputed risk grid given; "
                          "using the precomputed grid", stacklevel=3)
        if shape is None:
            raise RiskError("no risk grids given")
        object.__setattr__(self, "_risk", self._compute())

    @classmethod
    def zeros(cls, n: int, m: int) -> RiskFactorLayers:
        return cls(precomputed=np.zeros((n, m)))

    @property
    def shape(self) -> tuple[int, int]:
        return self._risk.shape

    def _compute(self) -> np.ndarray:
        if self.precomputed is not None:
            return self.precomputed
        out = self.p_event * self.p_impact * self.p_fatality
        out.setflags(write=False)
        return out

    @property
    def risk_grid(self) -> np.ndarray:
        return self._risk

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RiskFactorLayers):
            return NotImplemented
        for name in FACTORS + ("precomputed",):
            a, b = getattr(self, name), getattr(other, name)
            if (a is None) != (b is None) or (a is not None and not np.array_equal(a, b)):
                return False
        return True

    __hash__ = None  # type: ignore[assignment]


def risk(c, layers: RiskFactorLayers) -> float:
    """Fatality probability for the ground column under cell ``c`` (altitude ignored)."""
    x, y = c[0], c[1]
    n, m = layers.shape
    if not (1 <= x <= n and 1 <= y <= m):
        raise RiskError(f"cell {tuple(c)} outside risk grid {layers.shape}")
    return float(layers.risk_grid[x - 1, y - 1])


def ground_safeness(c, layers: RiskFactorLayers) -> float:
    return 1.0 - risk(c, layers)
