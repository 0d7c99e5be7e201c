"""Sparse clustered multipath channel draws (narrowband, SNR-parameterised)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from irrarray.arrays import TxArray
from irrarray.geometry import ElementPattern, Grid, steering_matrix


def default_angular_grid(limit: float = 0.8, step: float = 0.1, max_r2: float = 0.9) -> np.ndarray:
    n = int(round(limit / step))
    axis = np.arange(-n, n + 1) * step
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    return pts[(pts ** 2).sum(axis=1) <= max_r2 + 1e-12]


@dataclass(frozen=True)
class ChannelParams:
    num_paths: int = 3
    subpaths: int = 4
    path_power_dB: tuple[float, ...] = (0.0, -10.0, -15.0)
    angle_spread: float = 0.05
    K: int = 2
    grid: np.ndarray = field(default_factory=default_angular_grid, repr=False, compare=False)

    def __post_init__(self):
        if self.num_paths < 1 or self.subpaths < 1:
            raise ValueError("need at least one path and one subpath")
        if self.angle_spread < 0:
            raise ValueError("angle spread must be non-negative")
        if len(self.path_power_dB) < self.num_paths:
            raise ValueError(f"{self.num_paths} paths need as many power entries, got {len(self.path_power_dB)}")
        g = np.asarray(self.grid, dtype=float).reshape(-1, 2)
        if np.any((g ** 2).sum(axis=1) > 1.0 + 1e-12):
            raise ValueError("angular grid points must lie in the unit disk")
        object.__setattr__(self, "grid", g)
        if self.K < 1:
            raise ValueError("K must be positive")
        if len(g) < self.K:
            raise ValueError(f"angular grid has {len(g)} points, fewer than K={self.K}")


@dataclass(frozen=True)
class UserPaths:
    """Subpath metadata of one receiver; row ``i`` is one subpath."""

    boresight: tuple[float, float]
    path_id: np.ndarray
    alpha: np.ndarray
    tx_uv: np.ndarray
    rx_uv: np.ndarray

    def to_dict(self) -> dict:
        return {
            "boresight": list(self.boresight),
            "path_id": self.path_id.tolist(),
            "alpha_re": self.alpha.real.tolist(),
            "alpha_im": self.alpha.imag.tolist(),
            "tx_uv": self.tx_uv.tolist(),
            "rx_uv": self.rx_uv.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserPaths":
        return cls(
            tuple(d["boresight"]),
            np.asarray(d["path_id"], dtype=int),
            np.asarray(d["alpha_re"]) + 1j * np.asarray(d["alpha_im"]),
            np.asarray(d["tx_uv"], dtype=float).reshape(-1, 2),
            np.asarray(d["rx_uv"], dtype=float).reshape(-1, 2),
        )


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    users: tuple[UserPaths, ...]
    H: tuple[np.ndarray, ...] = field(repr=False)
    G: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def K(self) -> int:
        return len(self.users)

    @property
    def boresights(self) -> list[tuple[float, float]]:
        return [u.boresight for u in self.users]

    def metadata_json(self) -> str:
        return json.dumps([u.to_dict() for u in self.users], sort_keys=True)


def _clip_to_disk(uv: np.ndarray) -> np.ndarray:
    r = np.hypot(uv[:, 0], uv[:, 1])
    scale = np.where(r > 1.0, 1.0 / np.maximum(r, 1e-300), 1.0)
    return uv * scale[:, None]


def draw_paths(params: ChannelParams, rng_seed) -> tuple[UserPaths, ...]:
    """Draw per-receiver subpath gains and angles; independent of the arrays.

    Keeping this separate from assembly is what gives common random numbers:
    the same seed yields the same propagation for every array compared.
    """
    rng = np.random.default_rng(rng_seed)
    grid = params.grid
    L, kappa = params.num_paths, params.subpaths
    picks = rng.choice(len(grid), size=params.K, replace=False)
    power = 10.0 ** (np.asarray(params.path_power_dB[:L], dtype=float) / 10.0)
    users = []
    for k in range(params.K):
        bore = grid[picks[k]]
        tx_c = np.empty((L, 2))
        rx_c = np.empty((L, 2))
        tx_c[0] = rx_c[0] = bore
        if L > 1:
            tx_c[1:] = grid[rng.integers(len(grid), size=L - 1)]
            rx_c[1:] = grid[rng.integers(len(grid), size=L - 1)]
        path_id = np.repeat(np.arange(L), kappa)
        tx_uv = _clip_to_disk(tx_c[path_id] + params.angle_spread * rng.standard_normal((L * kappa, 2)))
        rx_uv = _clip_to_disk(rx_c[path_id] + params.angle_spread * rng.standard_normal((L * kappa, 2)))
        cn = (rng.standard_normal(L * kappa) + 1j * rng.standard_normal(L * kappa)) / np.sqrt(2.0)
        alpha = np.sqrt(power[path_id] / kappa) * cn
        alpha = alpha / np.linalg.norm(alpha)
        users.append(UserPaths((float(bore[0]), float(bore[1])), path_id, alpha, tx_uv, rx_uv))
    return tuple(users)


def _assemble(paths: UserPaths, tx: TxArray, rx_grid: Grid, rx_pattern: ElementPattern, feed: bool) -> np.ndarray:
    a_rx = steering_matrix(rx_grid.positions, rx_pattern, paths.rx_uv[:, 0], paths.rx_uv[:, 1])
    u, v = paths.tx_uv[:, 0], paths.tx_uv[:, 1]
    a_tx = tx.feed_steering(u, v) if feed else tx.antenna_steering(u, v)
    return (a_rx.T * paths.alpha) @ a_tx


def reconstruct_H(paths: UserPaths, tx: TxArray, rx_grid: Grid, rx_pattern: ElementPattern) -> np.ndarray:
    """Antenna-level ``N_RX x N_TX`` channel rebuilt from subpath metadata."""
    return _assemble(paths, tx, rx_grid, rx_pattern, feed=False)


def feed_channel(paths: UserPaths, tx: TxArray, rx_grid: Grid, rx_pattern: ElementPattern) -> np.ndarray:
    """Feed-level channel ``H_k P`` (``N_RX x S``) built directly from metadata."""
    return _assemble(paths, tx, rx_grid, rx_pattern, feed=True)


def realize(users, tx: TxArray, rx_grid: Grid, rx_pattern: ElementPattern, antenna_level: bool = True) -> ChannelRealization:
    G = tuple(feed_channel(p, tx, rx_grid, rx_pattern) for p in users)
    if antenna_level:
        H = tuple(reconstruct_H(p, tx, rx_grid, rx_pattern) for p in users)
    else:
        H = ()
    return ChannelRealization(tuple(users), H, G)


def draw_channel(params: ChannelParams, tx: TxArray, rx_grid: Grid, rx_pattern: ElementPattern, rng_seed) -> ChannelRealization:
    return realize(draw_paths(params, rng_seed), tx, rx_grid, rx_pattern)
