"""Discretized airspace box and the obstacle / no-fly layers.

Cells use 1-based ``(x, y, z)`` coordinates. Level ``z`` spans the altitude
interval ``(cell_side * (z - 1), cell_side * z]``, so ``z = 1`` is the lowest
flyable level. Layer grids are indexed ``grid[x - 1, y - 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np


class Cell(NamedTuple):
    x: int
    y: int
    z: int

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


class GridError(ValueError):
    """Invalid box construction or layer shape."""


def _exact_count(extent: float, side: float, axis: str) -> int:
    ratio = extent / side
    count = round(ratio)
    if count < 1 or not math.isclose(ratio, count, rel_tol=1e-9, abs_tol=0.0):
        raise GridError(f"{axis} not divisible by cell side ({extent} / {side} = {ratio:g})")
    return int(count)


@dataclass(frozen=True, eq=False)
class EnvironmentBox:
    length_m: float
    width_m: float
    height_m: float
    cell_side_m: float
    n: int
    m: int
    h: int
    free_mask: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.m, self.h)

    @property
    def free_count(self) -> int:
        return int(self.free_mask.sum())

    def in_bounds(self, c: tuple[int, int, int]) -> bool:
        x, y, z = c
        return 1 <= x <= self.n and 1 <= y <= self.m and 1 <= z <= self.h

    def is_free(self, c: tuple[int, int, int]) -> bool:
        return self.in_bounds(c) and bool(self.free_mask[c[0] - 1, c[1] - 1, c[2] - 1])

    def free_cells(self) -> Iterator[Cell]:
        """Free cells in row-major ``(x, y, z)`` order."""
        for i, j, k in np.argwhere(self.free_mask):
            yield Cell(int(i) + 1, int(j) + 1, int(k) + 1)

    def with_mask(self, mask: np.ndarray) -> EnvironmentBox:
        mask = np.array(mask, dtype=bool)
        mask.setflags(write=False)
        return EnvironmentBox(
            self.length_m, self.width_m, self.height_m, self.cell_side_m,
            self.n, self.m, self.h, mask,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnvironmentBox):
            return NotImplemented
        return (
            (self.length_m, self.width_m, self.height_m, self.cell_side_m)
            == (other.length_m, other.width_m, other.height_m, other.cell_side_m)
            and np.array_equal(self.free_mask, other.free_mask)
        )

    __hash__ = None  # type: ignore[assignment]


def new_box(length_m: float, width_m: float, height_m: float, cell_side_m: float) -> EnvironmentBox:
    """Create a box with every cell free.

    Raises:
        GridError: if an argument is not positive or a dimension is not an
            exact multiple of ``cell_side_m``.
    """
    for name, value in (("length", length_m), ("width", width_m),
                        ("height", height_m), ("cell side", cell_side_m)):
        if not value > 0:
            raise GridError(f"{name} must be positive, got {value}")
    n = _exact_count(length_m, cell_side_m, "length")
    m = _exact_count(width_m, cell_side_m, "width")
    h = _exact_count(height_m, cell_side_m, "height")
    mask = np.ones((n, m, h), dtype=bool)
    mask.setflags(write=False)
    return EnvironmentBox(float(length_m), float(width_m), float(height_m),
                          float(cell_side_m), n, m, h, mask)


def _check_footprint(box: EnvironmentBox, grid: np.ndarray, name: str) -> None:
    if grid.shape != (box.n, box.m):
        raise GridError(f"{name} grid has shape {grid.shape}, expected {(box.n, box.m)}")


def obstacle_blocked(box: EnvironmentBox, heights) -> np.ndarray:
    """Boolean ``n x m x h`` array of cells an obstacle intrudes into."""
    heights = np.asarray(heights, dtype=float)
    _check_footprint(box, heights, "obstacle")
    if (heights < 0).any():
        x, y = np.argwhere(heights < 0)[0] + 1
        raise GridError(f"obstacle[{x},{y}] = {heights[x - 1, y - 1]} is negative")
    floors = box.cell_side_m * np.arange(box.h)
    return heights[:, :, None] > floors[None, None, :]


def apply_obstacles(box: EnvironmentBox, heights) -> EnvironmentBox:
    """Remove every cell whose floor lies strictly below the obstacle top."""
    return box.with_mask(box.free_mask & ~obstacle_blocked(box, heights))


def apply_nofly(box: EnvironmentBox, mask) -> EnvironmentBox:
    """Remove every cell of each masked column, at all heights."""
    mask = np.asarray(mask, dtype=bool)
    _check_footprint(box, mask, "no-fly")
    return box.with_mask(box.free_mask & ~mask[:, :, None])


_OFFSETS = tuple(
    (dx, dy, dz)
    for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
    if (dx, dy, dz) != (0, 0, 0)
)


def adjacent(box: EnvironmentBox, c: tuple[int, int, int]) -> list[Cell]:
    """Free cells of the 26-neighborhood of ``c``, in row-major order."""
    if not box.in_bounds(c):
        raise GridError(f"cell {tuple(c)} is outside the box {box.shape}")
    if not box.is_free(c):
        raise GridError(f"cell {tuple(c)} is not free")
    x, y, z = c
    out = []
    for dx, dy, dz in _OFFSETS:
        nb = Cell(x + dx, y + dy, z + dz)
        if box.is_free(nb):
            out.append(nb)
    return out
