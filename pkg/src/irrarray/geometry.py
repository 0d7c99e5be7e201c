"""Aperture geometry, analytic element patterns and steering vectors.

Positions are expressed in wavelengths with the origin at the aperture
centroid. Cell ``(n, m)`` of an ``N x M`` grid has row-major index
``n * M + m``; ``x`` runs along columns and ``y`` along rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from irrarray.errors import InvalidLayoutError

VISIBLE_TOL = 1e-12  # rounding slack on the unit circle
ELEMENT_KINDS = ("single", "thinned", "domino_h", "domino_v", "tetromino")


@dataclass(frozen=True)
class Grid:
    rows: int
    cols: int
    dx: float
    dy: float
    positions: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def cell(self, index: int) -> tuple[int, int]:
        return divmod(index, self.cols)


def build_grid(rows: int, cols: int, dx: float = 0.5, dy: float = 0.5) -> Grid:
    """Half-wavelength style rectangular grid centred on its centroid."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
    if not (dx > 0 and dy > 0):
        raise ValueError(f"element spacing must be positive, got dx={dx}, dy={dy}")
    n, m = np.divmod(np.arange(rows * cols), cols)
    pos = np.column_stack([m * dx, n * dy]).astype(float)
    pos -= np.array([(cols - 1) * dx / 2.0, (rows - 1) * dy / 2.0])
    pos.setflags(write=False)
    return Grid(rows, cols, float(dx), float(dy), pos)


@dataclass(frozen=True)
class ElementPattern:
    """Embedded element pattern ``sqrt(G0) * cos(theta)**(q/2)``.

    When ``rolloff`` is omitted it is taken from the cos^q directivity
    identity ``D = 2 (q + 1)`` so the boresight gain is radiation-consistent
    (clamped at zero for gains below 3 dBi).
    """

    boresight_gain_dBi: float
    rolloff: float | None = None
    kind: str = "single"

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.rolloff is None:
            q = max(self.gain_linear / 2.0 - 1.0, 0.0)
            object.__setattr__(self, "rolloff", q)
        elif self.rolloff < 0:
            raise ValueError("rolloff exponent must be non-negative")

    @property
    def gain_linear(self) -> float:
        return 10.0 ** (self.boresight_gain_dBi / 10.0)

    def __call__(self, u, v):
        return eval_element(self, u, v)


ISOTROPIC = ElementPattern(0.0, rolloff=0.0)


def eval_element(pattern: ElementPattern, u, v):
    """Real field amplitude of ``pattern`` at direction cosines ``(u, v)``.

    Accepts scalars or broadcastable arrays. Directions outside the visible
    disk return 0.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    r2 = u * u + v * v
    cos_t = np.sqrt(np.clip(1.0 - r2, 0.0, None))
    q = pattern.rolloff
    if q == 0.0:
        shape = np.ones_like(cos_t)
    else:
        shape = cos_t ** (q / 2.0)
    amp = np.sqrt(pattern.gain_linear) * shape
    amp = np.where(r2 > 1.0 + VISIBLE_TOL, 0.0, amp)
    return amp[()] if amp.ndim == 0 else amp


@dataclass(frozen=True)
class ClusterLayout:
    clusters: tuple[tuple[int, ...], ...]
    phase_centers: np.ndarray = field(repr=False, compare=False)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.clusters])

    def __len__(self) -> int:
        return len(self.clusters)


def _edge_connected(cells: Sequence[int], cols: int) -> bool:
    cells = set(cells)
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        r, m = divmod(c, cols)
        for nb, ok in ((c - cols, r > 0), (c + cols, True), (c - 1, m > 0), (c + 1, m < cols - 1)):
            if ok and nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def phase_centers(grid: Grid, clusters: Sequence[Sequence[int]]) -> ClusterLayout:
    """Validate ``clusters`` on ``grid`` and attach their phase centres.

    A cluster sharing one feed radiates from the arithmetic mean of its
    member element positions.
    """
    used: set[int] = set()
    canon = []
    for cl in clusters:
        cl = tuple(sorted(int(c) for c in cl))
        if len(cl) not in (1, 2, 4):
            raise InvalidLayoutError(f"cluster {cl} must hold 1, 2 or 4 cells")
        if len(set(cl)) != len(cl):
            raise InvalidLayoutError(f"cluster {cl} repeats a cell")
        if cl[0] < 0 or cl[-1] >= grid.size:
            raise InvalidLayoutError(f"cluster {cl} leaves the {grid.rows}x{grid.cols} board")
        if used.intersection(cl):
            raise InvalidLayoutError(f"cluster {cl} overlaps another cluster")
        if not _edge_connected(cl, grid.cols):
            raise InvalidLayoutError(f"cluster {cl} is not edge-connected")
        used.update(cl)
        canon.append(cl)
    centers = np.array([grid.positions[list(cl)].mean(axis=0) for cl in canon]).reshape(-1, 2)
    centers.setflags(write=False)
    return ClusterLayout(tuple(canon), centers)


def _as_pattern_list(patterns, count: int) -> list[ElementPattern]:
    if isinstance(patterns, ElementPattern):
        return [patterns] * count
    patterns = list(patterns)
    if len(patterns) != count:
        raise ValueError(f"expected {count} element patterns, got {len(patterns)}")
    return patterns


def steering_matrix(centers: np.ndarray, patterns, u, v) -> np.ndarray:
    """Steering vectors for many directions at once, shape ``(len(u), S)``.

    ``patterns`` is one ElementPattern or one per column of ``centers``.
    No visible-region check is made; entries outside the disk come out zero
    through the element amplitude.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    pats = _as_pattern_list(patterns, len(centers))
    phase = np.exp(2j * np.pi * (np.outer(u, centers[:, 0]) + np.outer(v, centers[:, 1])))
    # group identical patterns so each distinct one is evaluated once
    amp = np.empty((u.size, len(pats)))
    groups: dict[ElementPattern, list[int]] = {}
    for j, p in enumerate(pats):
        groups.setdefault(p, []).append(j)
    for p, cols in groups.items():
        amp[:, cols] = np.asarray(eval_element(p, u, v)).reshape(-1, 1)
    return amp * phase


def _check_visible(u: float, v: float) -> None:
    if u * u + v * v > 1.0 + VISIBLE_TOL:
        raise ValueError(f"direction ({u}, {v}) lies outside the visible region")


def tx_steering_vector(grid: Grid, layout: ClusterLayout, patterns, u: float, v: float) -> np.ndarray:
    """Per-cluster transmit steering vector at ``(u, v)``."""
    _check_visible(u, v)
    return steering_matrix(layout.phase_centers, patterns, u, v)[0]


def rx_steering_vector(grid: Grid, pattern: ElementPattern, u: float, v: float) -> np.ndarray:
    """Per-element receive steering vector of a fully populated grid."""
    _check_visible(u, v)
    return steering_matrix(grid.positions, pattern, u, v)[0]
