"""Fixed polyomino shape sets used as tiles."""
from __future__ import annotations

from dataclasses import dataclass

Cells = tuple[tuple[int, int], ...]

_FREE_TETROMINOES: dict[str, Cells] = {
    "I": ((0, 0), (0, 1), (0, 2), (0, 3)),
    "O": ((0, 0), (0, 1), (1, 0), (1, 1)),
    "T": ((0, 0), (0, 1), (0, 2), (1, 1)),
    "S": ((0, 1), (0, 2), (1, 0), (1, 1)),
    "L": ((0, 0), (1, 0), (2, 0), (2, 1)),
}


def normalize(cells) -> Cells:
    r0 = min(r for r, _ in cells)
    c0 = min(c for _, c in cells)
    return tuple(sorted((r - r0, c - c0) for r, c in cells))


def fixed_orientations(cells) -> list[Cells]:
    """All distinct rotations and reflections of a free polyomino."""
    out: list[Cells] = []
    cur = list(cells)
    for _ in range(4):
        cur = [(c, -r) for r, c in cur]
        for variant in (cur, [(r, -c) for r, c in cur]):
            norm = normalize(variant)
            if norm not in out:
                out.append(norm)
    return sorted(out)


@dataclass(frozen=True)
class ShapeSet:
    name: str
    shapes: tuple[Cells, ...]

    @property
    def cell_count(self) -> int:
        return len(self.shapes[0])


DOMINO = ShapeSet("domino", (((0, 0), (0, 1)), ((0, 0), (1, 0))))

TETROMINO = ShapeSet(
    "tetromino",
    tuple(s for free in _FREE_TETROMINOES.values() for s in fixed_orientations(free)),
)

SHAPE_SETS = {"domino": DOMINO, "tetromino": TETROMINO}
