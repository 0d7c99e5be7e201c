"""Array configurations, connection matrices and their JSON form."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from irrarray.errors import InvalidLayoutError

CONFIG_KINDS = ("fpra", "thinned", "domino", "tetromino")
_CLUSTER_SIZE = {"fpra": 1, "thinned": 1, "domino": 2, "tetromino": 4}


@dataclass(frozen=True)
class ArrayConfig:
    """A concrete irregular layout on an ``N x M`` board.

    ``clusters`` hold row-major cell indices; each cluster is driven by one
    feed. Clusters are kept sorted by their minimum cell index, which fixes
    the column order of the connection matrix.
    """

    kind: str
    board: tuple[int, int]
    clusters: tuple[tuple[int, ...], ...]
    config_index: int | None = None

    def __post_init__(self):
        if self.kind not in CONFIG_KINDS:
            raise ValueError(f"unknown configuration kind {self.kind!r}")
        canon = tuple(sorted((tuple(sorted(int(c) for c in cl)) for cl in self.clusters), key=lambda cl: cl[0]))
        object.__setattr__(self, "clusters", canon)
        object.__setattr__(self, "board", (int(self.board[0]), int(self.board[1])))
        self.validate()

    @property
    def S(self) -> int:
        return len(self.clusters)

    @property
    def n_tx(self) -> int:
        return self.board[0] * self.board[1]

    @property
    def n_active(self) -> int:
        return sum(len(c) for c in self.clusters)

    def validate(self) -> None:
        N, M = self.board
        size = _CLUSTER_SIZE[self.kind]
        cells = [c for cl in self.clusters for c in cl]
        if not self.clusters:
            raise InvalidLayoutError("configuration has no feeds")
        if any(len(cl) != size for cl in self.clusters):
            raise InvalidLayoutError(f"{self.kind} clusters must have {size} cells")
        if len(set(cells)) != len(cells):
            raise InvalidLayoutError("clusters overlap")
        if min(cells) < 0 or max(cells) >= N * M:
            raise InvalidLayoutError("cluster cell outside the board")
        if self.kind != "thinned" and len(cells) != N * M:
            raise InvalidLayoutError(f"{self.kind} configuration must cover every cell")
        if self.kind == "thinned":
            rows = {c // M for c in cells}
            cols = {c % M for c in cells}
            if not {0, N - 1} <= rows or not {0, M - 1} <= cols:
                raise InvalidLayoutError("thinned array does not span the full aperture")
        if size > 1:
            from irrarray.geometry import _edge_connected

            for cl in self.clusters:
                if not _edge_connected(cl, M):
                    raise InvalidLayoutError(f"cluster {cl} is not edge-connected")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.board[0],
            "M": self.board[1],
            "clusters": [list(cl) for cl in self.clusters],
            "config_index": self.config_index,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "ArrayConfig":
        return cls(d["kind"], (d["N"], d["M"]), tuple(tuple(c) for c in d["clusters"]), d.get("config_index"))

    @classmethod
    def from_json(cls, text: str) -> "ArrayConfig":
        return cls.from_dict(json.loads(text))


def fpra(N: int, M: int) -> ArrayConfig:
    return ArrayConfig("fpra", (N, M), tuple((i,) for i in range(N * M)), 0)


def connection_matrix(config: ArrayConfig) -> np.ndarray:
    """0/1 antenna-by-feed matrix ``P`` (``N_TX x S``)."""
    P = np.zeros((config.n_tx, config.S), dtype=np.int8)
    for j, cl in enumerate(config.clusters):
        P[list(cl), j] = 1
    return P


def fill_factor(config: ArrayConfig) -> float:
    return config.S / config.n_tx


def read_configs(path) -> list[ArrayConfig]:
    """Read newline-delimited JSON configs (a single JSON object also works)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if not stripped:
        return []
    if stripped.startswith("["):
        return [ArrayConfig.from_dict(d) for d in json.loads(stripped)]
    return [ArrayConfig.from_json(line) for line in stripped.splitlines() if line.strip()]


def write_configs(configs, path) -> None:
    """Write configs as newline-delimited JSON to a path or an open text stream."""
    if hasattr(path, "write"):
        for cfg in configs:
            path.write(cfg.to_json() + "\n")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_configs(configs, fh)
