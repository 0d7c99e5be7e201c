"""Transmit arrays: a configuration placed on a grid with its element patterns."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from irrarray.geometry import ClusterLayout, ElementPattern, Grid, build_grid, phase_centers, steering_matrix
from irrarray.tiling.config import ArrayConfig, connection_matrix

# boresight gains (dBi) and feeding losses (dB) of the 140 GHz element variants
DEFAULT_GAINS_DBI = {"fpra": 4.07, "thinned": 5.68, "domino": 6.5, "tetromino": 7.9}
DEFAULT_LOSSES_DB = {"fpra": 0.0, "thinned": 0.0, "domino": 0.3, "tetromino": 0.6}


def cluster_patterns(config: ArrayConfig, gain_dBi: float) -> list[ElementPattern]:
    if config.kind == "fpra":
        return [ElementPattern(gain_dBi, kind="single")] * config.S
    if config.kind == "thinned":
        return [ElementPattern(gain_dBi, kind="thinned")] * config.S
    if config.kind == "tetromino":
        return [ElementPattern(gain_dBi, kind="tetromino")] * config.S
    pats = []
    for a, b in config.clusters:
        pats.append(ElementPattern(gain_dBi, kind="domino_h" if b - a == 1 else "domino_v"))
    return pats


@dataclass(frozen=True, eq=False)
class TxArray:
    """Everything needed to radiate from one configuration.

    Feed-level responses carry a ``sqrt(cluster size)`` factor: a feed
    excitation ``f_j`` puts ``f_j`` on each of its antennas, so the cluster
    accepts ``|c_j| |f_j|^2`` of power and radiates it with the cluster
    pattern gain.
    """

    config: ArrayConfig
    grid: Grid
    layout: ClusterLayout
    patterns: tuple[ElementPattern, ...]
    loss_dB: float = 0.0
    P: np.ndarray = field(init=False, repr=False)
    feed_scale: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "P", connection_matrix(self.config))
        object.__setattr__(self, "feed_scale", np.sqrt(self.layout.sizes.astype(float)))

    @property
    def S(self) -> int:
        return self.config.S

    @property
    def n_tx(self) -> int:
        return self.grid.size

    @property
    def n_active(self) -> int:
        return self.config.n_active

    def cluster_steering(self, u, v) -> np.ndarray:
        """Per-cluster steering vectors, ``(len(u), S)``."""
        return steering_matrix(self.layout.phase_centers, self.patterns, u, v)

    def feed_steering(self, u, v) -> np.ndarray:
        """Response per feed including the cluster power factor, ``(len(u), S)``."""
        return self.cluster_steering(u, v) * self.feed_scale

    def antenna_steering(self, u, v) -> np.ndarray:
        """Equivalent per-antenna response, ``(len(u), N_TX)``; ``@ P`` gives ``feed_steering``.

        Antennas of a cluster share its phase centre and split its response
        evenly; antennas outside every cluster are absent and respond with 0.
        """
        return (self.cluster_steering(u, v) / self.feed_scale) @ self.P.T

    def excitation(self, f: np.ndarray) -> np.ndarray:
        """Cluster excitation ``a`` whose squared magnitude is the cluster input power."""
        return self.feed_scale * f


def make_tx_array(config: ArrayConfig, grid: Grid | None = None, gains_dBi=None, losses_dB=None) -> TxArray:
    gains = DEFAULT_GAINS_DBI if gains_dBi is None else gains_dBi
    losses = DEFAULT_LOSSES_DB if losses_dB is None else losses_dB
    if grid is None:
        grid = build_grid(*config.board)
    if (grid.rows, grid.cols) != config.board:
        raise ValueError(f"grid {grid.rows}x{grid.cols} does not match board {config.board}")
    layout = phase_centers(grid, config.clusters)
    pats = tuple(cluster_patterns(config, gains[config.kind]))
    return TxArray(config, grid, layout, pats, float(losses[config.kind]))
