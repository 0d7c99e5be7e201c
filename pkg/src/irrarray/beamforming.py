"""Full-digital and two-step hybrid (fully / partially connected) precoders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from irrarray.arrays import TxArray
from irrarray.errors import DegenerateChannelError
from irrarray.geometry import Grid

ARCHITECTURES = ("FD", "HFC", "HPC")
ZF_COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class Codebook:
    entries: np.ndarray  # (n, dim), unit-norm rows
    angles: np.ndarray  # (n, 2) pointing direction of each entry
    side: str

    def __len__(self) -> int:
        return len(self.entries)


def codebook_angles(step: float) -> np.ndarray:
    if step <= 0:
        raise ValueError("codebook grid step must be positive")
    n = int(np.floor(1.0 / step + 1e-9))
    axis = np.arange(-n, n + 1) * step
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    return pts[(pts ** 2).sum(axis=1) <= 1.0 + 1e-12]


def _phase_only(centers: np.ndarray, angles: np.ndarray) -> np.ndarray:
    ph = np.exp(2j * np.pi * (np.outer(angles[:, 0], centers[:, 0]) + np.outer(angles[:, 1], centers[:, 1])))
    return ph / np.sqrt(centers.shape[0])


def build_codebooks(tx: TxArray, rx_grid: Grid, grid_step: float = 0.1, rx_step: float | None = None) -> tuple[Codebook, Codebook]:
    """Phase-only beam codebooks on a (u, v) lattice inside the unit disk.

    Receive entries equal the receive steering phases, so ``w^H`` is matched
    to the labelled angle. Transmit entries are conjugated steering phases,
    so ``a_TX^T f`` peaks at the labelled angle for any phase-centre layout.
    """
    tx_ang = codebook_angles(grid_step)
    rx_ang = tx_ang if rx_step is None else codebook_angles(rx_step)
    tx_cb = Codebook(np.conj(_phase_only(tx.layout.phase_centers, tx_ang)), tx_ang, "tx")
    rx_cb = Codebook(_phase_only(rx_grid.positions, rx_ang), rx_ang, "rx")
    return tx_cb, rx_cb


def _select(G: np.ndarray, rx_entries: np.ndarray, tx_entries: np.ndarray) -> tuple[int, int, float]:
    gain = np.abs(rx_entries.conj() @ G @ tx_entries.T) ** 2
    flat = int(np.argmax(gain))  # first maximum = lowest (rx, tx) pair
    i, j = divmod(flat, gain.shape[1])
    return i, j, float(gain[i, j])


def select_rf(H: np.ndarray, P: np.ndarray, tx_cb: Codebook, rx_cb: Codebook) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive codebook-pair search maximising ``|w^H H P f|^2``."""
    i, j, _ = _select(H @ P, rx_cb.entries, tx_cb.entries)
    return rx_cb.entries[i], tx_cb.entries[j]


def effective_channel(H: np.ndarray, P: np.ndarray, w: np.ndarray, F_RF: np.ndarray) -> np.ndarray:
    """Row ``w^H H P F_RF`` seen by the baseband for one user."""
    return w.conj() @ H @ P @ F_RF


def zf_baseband(H_bar: np.ndarray) -> np.ndarray:
    """Zero-forcing baseband ``H^H (H H^H)^-1`` (before power scaling)."""
    H_bar = np.atleast_2d(H_bar)
    gram = H_bar @ H_bar.conj().T
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) >= ZF_COND_LIMIT:
        raise DegenerateChannelError("effective channel is singular or ill-conditioned")
    return H_bar.conj().T @ np.linalg.inv(gram)


@dataclass(frozen=True, eq=False)
class Precoder:
    architecture: str
    F_RF: np.ndarray  # S x K
    F_BB: np.ndarray  # K x K, power scaling folded in
    F: np.ndarray  # S x K, equals F_RF @ F_BB
    combiners: np.ndarray  # K x N_RX, unit-norm rows
    power_scale: np.ndarray  # per-stream factor applied to F_RF F_BB

    @property
    def K(self) -> int:
        return self.F.shape[1]


def hpc_blocks(S: int, K: int) -> list[np.ndarray]:
    """Contiguous feed blocks in cluster order; the last absorbs any remainder."""
    if K > S:
        raise ValueError(f"cannot split {S} feeds across {K} RF chains")
    size = S // K
    bounds = [k * size for k in range(K)] + [S]
    return [np.arange(bounds[k], bounds[k + 1]) for k in range(K)]


def _normalize_streams(F: np.ndarray, sizes: np.ndarray, n_active: int) -> tuple[np.ndarray, np.ndarray]:
    # radiated power of stream k is ||P f_k||^2 = sum_j |c_j| |f_jk|^2
    K = F.shape[1]
    power = (sizes[:, None] * np.abs(F) ** 2).sum(axis=0)
    if np.any(power <= 0) or not np.all(np.isfinite(power)):
        raise DegenerateChannelError("precoder column carries no power")
    scale = np.sqrt(n_active / K / power)
    return F * scale, scale


def dominant_combiner(G: np.ndarray) -> np.ndarray:
    U, _, _ = np.linalg.svd(G, full_matrices=False)
    w = U[:, 0]
    # fix the arbitrary SVD phase so results are reproducible across LAPACK builds
    k = int(np.argmax(np.abs(w)))
    return w * (np.abs(w[k]) / w[k])


def build_precoder(architecture: str, G: list[np.ndarray], tx: TxArray, codebooks=None) -> Precoder:
    """Build a precoder from feed-level channels ``G[k] = H_k P``.

    FD combines with the dominant left singular vector of each ``G[k]`` and
    zero-forces the resulting ``K x S`` channel. HFC and HPC pick one RF
    beam pair per user from the codebooks, then zero-force the ``K x K``
    effective channel. Every stream is finally scaled to radiate
    ``N_active / K``.
    """
    arch = architecture.upper()
    if arch not in ARCHITECTURES:
        raise ValueError(f"unknown architecture {architecture!r}")
    K = len(G)
    if K < 1:
        raise ValueError("need at least one user")
    S = tx.S
    sizes = tx.layout.sizes.astype(float)

    if arch == "FD":
        W = np.array([dominant_combiner(Gk) for Gk in G])
        H_eff = np.array([W[k].conj() @ G[k] for k in range(K)])
        F_raw = zf_baseband(H_eff)
        F, scale = _normalize_streams(F_raw, sizes, tx.n_active)
        return Precoder("FD", F_raw, np.diag(scale).astype(complex), F, W, scale)

    if codebooks is None:
        raise ValueError("hybrid architectures need RF codebooks")
    tx_cb, rx_cb = codebooks
    F_RF = np.zeros((S, K), dtype=complex)
    W = np.zeros((K, rx_cb.entries.shape[1]), dtype=complex)
    if arch == "HFC":
        for k in range(K):
            i, j, _ = _select(G[k], rx_cb.entries, tx_cb.entries)
            W[k] = rx_cb.entries[i]
            F_RF[:, k] = tx_cb.entries[j]
    else:
        blocks = hpc_blocks(S, K)
        amp = np.sqrt(K / S)
        for k in range(K):
            sub = np.zeros_like(tx_cb.entries)
            # unit-modulus phases on block k only, modulus sqrt(K/S)
            sub[:, blocks[k]] = amp * np.exp(1j * np.angle(tx_cb.entries[:, blocks[k]]))
            i, j, _ = _select(G[k], rx_cb.entries, sub)
            W[k] = rx_cb.entries[i]
            F_RF[:, k] = sub[j]
    H_bar = np.array([W[k].conj() @ G[k] @ F_RF for k in range(K)])
    F_BB = zf_baseband(H_bar)
    F, scale = _normalize_streams(F_RF @ F_BB, sizes, tx.n_active)
    return Precoder(arch, F_RF, F_BB * scale, F, W, scale)
