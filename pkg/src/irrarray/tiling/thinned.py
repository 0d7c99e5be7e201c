"""Random thinned-array sampling."""
from __future__ import annotations

import numpy as np

from irrarray.tiling.config import ArrayConfig
from irrarray.tiling.counting import count_thinned


def _spans_aperture(cells: np.ndarray, N: int, M: int) -> bool:
    rows = cells // M
    cols = cells % M
    return bool(rows.min() == 0 and rows.max() == N - 1 and cols.min() == 0 and cols.max() == M - 1)


def sample_thinned(N: int, M: int, S: int, rng_seed) -> ArrayConfig:
    """Uniform ``S``-subset of cells conditioned on spanning the aperture.

    Rejection sampling over uniform subsets, so the accepted layouts are
    uniform over the feasible set. ``rng_seed`` may be an int or a numpy
    Generator.
    """
    if count_thinned(N, M, S) == 0:
        raise ValueError(f"no {S}-element thinned layout spans a {N}x{M} aperture")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    while True:
        cells = rng.choice(N * M, size=S, replace=False)
        if _spans_aperture(cells, N, M):
            return ArrayConfig("thinned", (N, M), tuple((int(c),) for c in np.sort(cells)))


class ThinnedSpace:
    """Indexable space of thinned samples: item ``i`` is drawn with seed ``(seed, i)``.

    Lets the index-chromosome GA search thinned layouts the same way it
    searches an enumerated list.
    """

    def __init__(self, N: int, M: int, S: int, size: int, seed: int = 0):
        if size < 1:
            raise ValueError("space size must be positive")
        self.N, self.M, self.S = N, M, S
        self.size = size
        self.seed = seed

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, index: int) -> ArrayConfig:
        if not 0 <= index < self.size:
            raise IndexError(index)
        cfg = sample_thinned(self.N, self.M, self.S, np.random.default_rng([self.seed, index]))
        return ArrayConfig(cfg.kind, cfg.board, cfg.clusters, index)
