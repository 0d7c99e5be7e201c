"""Beam patterns, EIRP, sidelobe level, SINR and spectral efficiency."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from irrarray.arrays import TxArray
from irrarray.errors import DegenerateMaskError

DB_FLOOR = 1e-30  # keeps dB exports finite at pattern nulls
MASK_TOL = 1e-9  # grid coordinates on the rectangle edge count as outside the main beam


def to_db(x):
    return 10.0 * np.log10(np.maximum(x, DB_FLOOR))


@dataclass(frozen=True, eq=False)
class AngularGrid:
    step: float
    points: np.ndarray = field(repr=False)

    @property
    def u(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.points[:, 1]

    def __len__(self) -> int:
        return len(self.points)


def angular_grid(step: float = 0.01) -> AngularGrid:
    """Lattice of (u, v) points with spacing ``step`` inside the closed unit disk."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    n = int(np.floor(1.0 / step + 1e-9))
    axis = np.arange(-n, n + 1) * step
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    pts = pts[(pts ** 2).sum(axis=1) <= 1.0 + 1e-12]
    pts.setflags(write=False)
    return AngularGrid(float(step), pts)


@dataclass(frozen=True, eq=False)
class BeamPatternGrid:
    grid: AngularGrid
    values: np.ndarray  # |B(u, v)|^2 per grid point
    excitation: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["u", "v", "value_dB"])
            for (u, v), val in zip(self.grid.points, to_db(self.values)):
                wr.writerow([repr(float(u)), repr(float(v)), repr(float(val))])


class PatternEvaluator:
    """Caches the steering matrix of one array over one angular grid."""

    def __init__(self, tx: TxArray, grid: AngularGrid):
        self.tx = tx
        self.grid = grid
        self.A = tx.cluster_steering(grid.u, grid.v)

    def pattern(self, a: np.ndarray) -> BeamPatternGrid:
        a = np.asarray(a)
        if a.shape != (self.A.shape[1],):
            raise ValueError(f"excitation has shape {a.shape}, expected ({self.A.shape[1]},)")
        return BeamPatternGrid(self.grid, np.abs(self.A @ a) ** 2, a)

    def stream_pattern(self, f: np.ndarray) -> BeamPatternGrid:
        """Pattern radiated by feed excitation ``f`` (one precoder column)."""
        return self.pattern(self.tx.excitation(f))


def beam_pattern(tx: TxArray, a: np.ndarray, grid: AngularGrid) -> BeamPatternGrid:
    """``|B(u, v)|^2`` of cluster excitation ``a`` over ``grid``."""
    return PatternEvaluator(tx, grid).pattern(a)


def eirp(S: int, K: int, P_out_dBm: float, P_L_dB: float, bp: BeamPatternGrid) -> np.ndarray:
    """Per-stream EIRP in dBm at each grid point."""
    if S < 1 or K < 1:
        raise ValueError("S and K must be positive")
    prefactor = 10.0 * np.log10(S / K) + P_out_dBm - P_L_dB
    return prefactor + to_db(bp.values)


@dataclass(frozen=True)
class SllMask:
    centers: tuple[tuple[float, float], ...]
    u_half: float = 0.21
    v_half: float = 0.28

    def __post_init__(self):
        if not (self.u_half > 0 and self.v_half > 0):
            raise ValueError("mask half-widths must be positive")
        object.__setattr__(self, "centers", tuple((float(u), float(v)) for u, v in self.centers))

    def region(self, points: np.ndarray) -> np.ndarray:
        """Boolean selector of the sidelobe region over ``points``."""
        keep = np.ones(len(points), dtype=bool)
        for uk, vk in self.centers:
            keep &= (np.abs(points[:, 0] - uk) >= self.u_half - MASK_TOL) | (np.abs(points[:, 1] - vk) >= self.v_half - MASK_TOL)
        return keep


def sidelobe_level(bp: BeamPatternGrid, mask: SllMask) -> float:
    """Peak of the pattern outside every main-beam rectangle, in dB below the global peak."""
    sel = mask.region(bp.grid.points)
    if not sel.any():
        raise DegenerateMaskError("sidelobe region is empty")
    peak = bp.values.max()
    if peak <= 0:
        raise DegenerateMaskError("pattern is identically zero")
    return float(10.0 * np.log10(max(bp.values[sel].max(), DB_FLOOR) / peak))


def eta_linear(eta_dB: float, loss_dB: float = 0.0) -> float:
    return 10.0 ** ((eta_dB - loss_dB) / 10.0)


def coupling_matrix(G, precoder) -> np.ndarray:
    """``C[k, j] = w_k^H G_k f_j`` for feed-level channels ``G_k = H_k P``."""
    return np.array([precoder.combiners[k].conj() @ G[k] @ precoder.F for k in range(len(G))])


def sinr(G, precoder, eta_dB: float, loss_dB: float = 0.0) -> np.ndarray:
    """Per-user SINR with the feeding loss taken off the SNR."""
    eta = eta_linear(eta_dB, loss_dB)
    p = np.abs(coupling_matrix(G, precoder)) ** 2
    signal = np.diag(p)
    interference = p.sum(axis=1) - signal
    return eta * signal / (eta * interference + 1.0)


def spectral_efficiency(gamma) -> tuple[np.ndarray, float]:
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("SINR must be non-negative")
    rates = np.log2(1.0 + gamma)
    return rates, float(rates.sum())


def main_beam_centers(realization) -> list[tuple[float, float]]:
    """Receiver boresight directions that anchor the sidelobe mask."""
    return list(realization.boresights)


@dataclass
class MetricReport:
    sll_dB: list[float]
    sum_se: float
    rates: list[float]
    sinr: list[float]
    eta_dB: float

    @property
    def sll_max_dB(self) -> float:
        return max(self.sll_dB)

    @property
    def sll_mean_dB(self) -> float:
        return float(np.mean(self.sll_dB))
