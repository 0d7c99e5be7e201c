"""Dictionary construction and Algorithm-X enumeration of tilings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from irrarray.tiling import _kernel
from irrarray.tiling.config import ArrayConfig
from irrarray.tiling.shapes import SHAPE_SETS, ShapeSet


@dataclass(frozen=True)
class Placement:
    cells: tuple[int, ...]
    shape_id: int


@dataclass(frozen=True)
class DictionaryMatrix:
    """Every placement of every fixed shape on the board (one row each)."""

    board: tuple[int, int]
    shape_set: ShapeSet
    rows: tuple[Placement, ...]

    @property
    def n_cols(self) -> int:
        return self.board[0] * self.board[1]

    def dense(self) -> np.ndarray:
        Q = np.zeros((len(self.rows), self.n_cols), dtype=np.int8)
        for i, p in enumerate(self.rows):
            Q[i, list(p.cells)] = 1
        return Q


def build_dictionary(board: tuple[int, int], shapes: ShapeSet | str) -> DictionaryMatrix:
    if isinstance(shapes, str):
        shapes = SHAPE_SETS[shapes]
    N, M = board
    if N < 1 or M < 1:
        raise ValueError(f"board must be at least 1x1, got {N}x{M}")
    if (N * M) % shapes.cell_count:
        raise ValueError(f"{N}x{M} board cannot be split into {shapes.name} tiles")
    rows: list[Placement] = []
    seen: set[tuple[int, ...]] = set()
    for sid, shape in enumerate(shapes.shapes):
        h = max(r for r, _ in shape) + 1
        w = max(c for _, c in shape) + 1
        for r0 in range(N - h + 1):
            for c0 in range(M - w + 1):
                cells = tuple(sorted((r0 + r) * M + c0 + c for r, c in shape))
                if cells not in seen:
                    seen.add(cells)
                    rows.append(Placement(cells, sid))
    return DictionaryMatrix((N, M), shapes, tuple(rows))


def _csr(q: DictionaryMatrix, order) -> tuple[list[int], list[int]]:
    offsets = [0]
    cells: list[int] = []
    for i in order:
        cells.extend(q.rows[i].cells)
        offsets.append(len(cells))
    return offsets, cells


def _row_order(q: DictionaryMatrix, rng_seed: int | None) -> list[int]:
    order = list(range(len(q.rows)))
    if rng_seed is not None:
        order = [int(i) for i in np.random.default_rng(rng_seed).permutation(len(order))]
    return order


def enumerate_exact_covers(q: DictionaryMatrix, cap: int | None = None, rng_seed: int | None = None) -> list[ArrayConfig]:
    """Depth-first Algorithm-X enumeration of tilings of the whole board.

    Items are chosen by fewest remaining placements (lowest cell index on
    ties). Placements are tried in dictionary order, or in an order permuted
    by ``rng_seed`` when given; the seed changes which covers come first,
    never which covers exist. ``config_index`` is the discovery order.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be at least 1")
    order = _row_order(q, rng_seed)
    offsets, cells = _csr(q, order)
    _, sols = _kernel.solve(q.n_cols, offsets, cells, -1 if cap is None else cap, False)
    kind = q.shape_set.name
    return [
        ArrayConfig(kind, q.board, tuple(q.rows[order[r]].cells for r in sol), idx)
        for idx, sol in enumerate(sols)
    ]


def count_exact_covers(q: DictionaryMatrix) -> int:
    offsets, cells = _csr(q, range(len(q.rows)))
    count, _ = _kernel.solve(q.n_cols, offsets, cells, -1, True)
    return count
