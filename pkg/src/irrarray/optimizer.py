"""Scalarized SE/SLL objective, Monte-Carlo evaluation, GA search and Pareto sweeps."""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from irrarray.beamforming import ARCHITECTURES, build_codebooks, build_precoder
from irrarray.channel import draw_paths, feed_channel
from irrarray.errors import DegenerateChannelError, EvaluationError
from irrarray.metrics import PatternEvaluator, SllMask, angular_grid, sidelobe_level, sinr, spectral_efficiency
from irrarray.tiling import ArrayConfig

FITNESS_EPS = 1e-9


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("IRRARRAY_THREADS", "1")))
    except ValueError:
        return 1


# -- objective ----------------------------------------------------------
@dataclass(frozen=True)
class ObjectiveSpec:
    beta: float
    r_ref: float
    phi_ref_dB: float
    reference_architecture: str = "FD"

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if not self.r_ref > 0:
            raise ValueError("reference sum SE must be positive")
        if not self.phi_ref_dB < 0:
            raise ValueError("reference SLL must be negative in dB")


def objective(r_mean: float, phi_dB: float, spec: ObjectiveSpec) -> float:
    """beta * R/R_ref + (1 - beta) * Phi/Phi_ref; both SLLs in dB, so lower SLL scores higher."""
    return spec.beta * (r_mean / spec.r_ref) + (1.0 - spec.beta) * (phi_dB / spec.phi_ref_dB)


# -- Monte-Carlo evaluation ---------------------------------------------
@dataclass(frozen=True, eq=False)
class Evaluation:
    """Per-realization results of one (config, architecture) pair.

    ``seeds`` lists every channel seed; entries of ``skipped`` were degenerate
    and are left out of the means.
    """

    config: ArrayConfig
    architecture: str
    eta_dB: tuple[float, ...]
    seeds: tuple[int, ...]
    skipped: tuple[int, ...]
    sum_se: np.ndarray = field(repr=False)  # (n_ok, n_eta)
    rates: np.ndarray = field(repr=False)  # (n_ok, n_eta, K)
    sll_dB: np.ndarray = field(repr=False)  # (n_ok, K)

    @property
    def n_ok(self) -> int:
        return self.sum_se.shape[0]

    @property
    def skipped_fraction(self) -> float:
        return len(self.skipped) / len(self.seeds)

    def mean_se(self, i_eta: int = 0) -> float:
        return float(self.sum_se[:, i_eta].mean())

    @property
    def sll_max(self) -> np.ndarray:
        return self.sll_dB.max(axis=1)

    @property
    def phi(self) -> float:
        """Mean over realizations of the worst per-stream SLL."""
        return float(self.sll_max.mean())


class Evaluator:
    """Evaluates configurations of one scenario on a shared set of channel draws.

    Realization ``i`` uses seed ``seed + i`` for every configuration
    (common random numbers). Results are cached per (config, architecture).
    """

    def __init__(self, scenario, n_realizations: int | None = None, seed: int | None = None,
                 eta_dB=None, threads: int | None = None):
        self.scenario = scenario
        n = scenario["n_realizations"] if n_realizations is None else n_realizations
        if n < 1:
            raise ValueError("n_realizations must be at least 1")
        base = scenario["seeds"]["channel"] if seed is None else seed
        self.seeds = tuple(int(base) + i for i in range(int(n)))
        if eta_dB is None:
            eta_dB = [scenario["eta_dB"]]
        self.eta_dB = tuple(float(e) for e in np.atleast_1d(eta_dB))
        self.threads = thread_count() if threads is None else threads
        params = scenario.channel_params()
        self.paths = [draw_paths(params, s) for s in self.seeds]
        self.rx_grid = scenario.rx_grid()
        self.rx_pattern = scenario.rx_pattern()
        self.pattern_grid = angular_grid(scenario["pattern_step"])
        self.mask = scenario["mask"]
        self._cache: dict = {}

    def _one(self, i, tx, arch, codebooks, pe):
        users = self.paths[i]
        G = [feed_channel(u, tx, self.rx_grid, self.rx_pattern) for u in users]
        try:
            pc = build_precoder(arch, G, tx, codebooks)
        except DegenerateChannelError:
            return None
        se, rates = [], []
        for eta in self.eta_dB:
            r, total = spectral_efficiency(sinr(G, pc, eta, tx.loss_dB))
            se.append(total)
            rates.append(r)
        mask = SllMask([u.boresight for u in users], self.mask["u_half"], self.mask["v_half"])
        sll = [sidelobe_level(pe.stream_pattern(pc.F[:, k]), mask) for k in range(pc.K)]
        return se, rates, sll

    def evaluate(self, config: ArrayConfig, architecture: str) -> Evaluation:
        arch = architecture.upper()
        if arch not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {architecture!r}")
        key = (config.to_json(), arch)
        if key in self._cache:
            return self._cache[key]
        tx = self.scenario.tx_array(config)
        codebooks = None
        if arch != "FD":
            codebooks = build_codebooks(tx, self.rx_grid, self.scenario["codebook_step"])
        pe = PatternEvaluator(tx, self.pattern_grid)
        idx = range(len(self.seeds))
        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                out = list(pool.map(lambda i: self._one(i, tx, arch, codebooks, pe), idx))
        else:
            out = [self._one(i, tx, arch, codebooks, pe) for i in idx]
        ok = [o for o in out if o is not None]
        skipped = tuple(self.seeds[i] for i, o in enumerate(out) if o is None)
        if not ok:
            raise EvaluationError(f"all {len(out)} realizations degenerate for {config.kind} {arch}")
        K = len(ok[0][2])
        ev = Evaluation(
            config, arch, self.eta_dB, self.seeds, skipped,
            np.array([o[0] for o in ok]).reshape(len(ok), len(self.eta_dB)),
            np.array([o[1] for o in ok]).reshape(len(ok), len(self.eta_dB), K),
            np.array([o[2] for o in ok]).reshape(len(ok), K),
        )
        self._cache[key] = ev
        return ev

    def summary(self, config: ArrayConfig, architecture: str) -> tuple[float, float]:
        ev = self.evaluate(config, architecture)
        return ev.mean_se(0), ev.phi

    def reference(self, beta: float, architecture: str | None = None) -> ObjectiveSpec:
        """Objective spec normalized by the fully populated array of this scenario."""
        from irrarray.tiling import fpra

        arch = architecture or self.scenario["reference_architecture"]
        r_ref, phi_ref = self.summary(fpra(*self.scenario.board), arch)
        return ObjectiveSpec(beta, r_ref, phi_ref, arch.upper())

    def fitness(self, architecture: str, spec: ObjectiveSpec) -> Callable[[ArrayConfig], float]:
        def f(config):
            return objective(*self.summary(config, architecture), spec)
        return f


def evaluate_config(config: ArrayConfig, architecture: str, scenario, n_realizations: int, seed: int) -> tuple[float, float]:
    """Mean sum SE and mean per-stream-max SLL (dB) over seeded realizations."""
    return Evaluator(scenario, n_realizations, seed).summary(config, architecture)


# -- genetic algorithm --------------------------------------------------
@dataclass(frozen=True)
class GaConfig:
    population: int = 20
    p_c: float = 0.9
    p_m: float = 0.1
    i_max: int = 300
    chi: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if not (0.0 <= self.p_c <= 1.0 and 0.0 <= self.p_m <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.i_max < 0:
            raise ValueError("i_max must be non-negative")

    @classmethod
    def from_dict(cls, d: dict, **override) -> "GaConfig":
        kw = {k: d[k] for k in ("population", "p_c", "p_m", "i_max", "chi", "seed") if k in d}
        kw.update({k: v for k, v in override.items() if v is not None})
        return cls(**kw)


def chromosome_bits(size: int) -> int:
    return max(0, math.ceil(math.log2(size))) if size > 1 else 0


@dataclass
class GaResult:
    best_index: int
    best_config: ArrayConfig
    best_fitness: float
    trace: list[float]  # best-so-far fitness, entry 0 = initial population
    trace_index: list[int]
    generations: int
    evaluations: int
    bits: int


def ga_search(space: Sequence[ArrayConfig], gacfg: GaConfig, fitness: Callable[[ArrayConfig], float]) -> GaResult:
    """Binary index-chromosome GA with roulette selection and elitism.

    ``space`` is any indexable sequence of configurations (an enumerated list
    or a ThinnedSpace). Fitness values are cached per index.
    """
    size = len(space)
    if size < 1:
        raise ValueError("empty search space")
    rng = np.random.default_rng(gacfg.seed)
    bits = chromosome_bits(size)
    cache: dict[int, float] = {}

    def fit(i: int) -> float:
        if i not in cache:
            cache[i] = float(fitness(space[i]))
        return cache[i]

    pop_size = min(gacfg.population, size)
    pop = [int(i) for i in rng.choice(size, size=pop_size, replace=False)]
    vals = [fit(i) for i in pop]
    b = int(np.argmax(vals))
    best_i, best_f = pop[b], vals[b]
    trace, trace_idx = [best_f], [best_i]

    def done():
        return gacfg.chi is not None and best_f >= gacfg.chi

    gen = 0
    while bits > 0 and gen < gacfg.i_max and not done():
        gen += 1
        w = np.asarray(vals) - (min(vals) - FITNESS_EPS)
        prob = w / w.sum()
        children: list[int] = []
        while len(children) < pop_size:
            i, j = rng.choice(pop_size, size=2, p=prob)
            a, c = pop[i], pop[j]
            if bits > 1 and rng.random() < gacfg.p_c:
                cut = int(rng.integers(1, bits))  # genes [cut:] (low bits) are swapped
                low = (1 << (bits - cut)) - 1
                a, c = (a & ~low) | (c & low), (c & ~low) | (a & low)
            for child in (a, c):
                if rng.random() < gacfg.p_m:
                    child ^= 1 << int(rng.integers(bits))
                children.append(child % size)
        pop = children[:pop_size]
        vals = [fit(i) for i in pop]
        if best_i not in pop:
            worst = int(np.argmin(vals))
            pop[worst], vals[worst] = best_i, best_f
        b = int(np.argmax(vals))
        if vals[b] > best_f:
            best_i, best_f = pop[b], vals[b]
        trace.append(best_f)
        trace_idx.append(best_i)

    return GaResult(best_i, space[best_i], best_f, trace, trace_idx, gen, len(cache), bits)


def exhaustive_search(space: Sequence[ArrayConfig], fitness: Callable[[ArrayConfig], float]) -> tuple[int, float, list[float]]:
    vals = [float(fitness(space[i])) for i in range(len(space))]
    best = int(np.argmax(vals))  # lowest index on ties
    return best, vals[best], vals


def write_trace_csv(result: GaResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["generation", "best_fitness", "best_index"])
        for g, (f, i) in enumerate(zip(result.trace, result.trace_index)):
            wr.writerow([g, repr(float(f)), i])


# -- Pareto sweep -------------------------------------------------------
@dataclass
class ParetoPoint:
    index: int
    r_mean: float
    phi_dB: float
    objectives: dict[float, float]
    dominated: bool = False


@dataclass
class ParetoResult:
    points: list[ParetoPoint]
    winners: dict[float, int]  # beta -> sample index

    @property
    def front(self) -> list[ParetoPoint]:
        return [p for p in self.points if not p.dominated]


def dominates(a: tuple[float, float], b: tuple[float, float]) -> bool:
    """``a`` dominates ``b`` under (maximize R, minimize Phi)."""
    return a[0] >= b[0] and a[1] <= b[1] and (a[0] > b[0] or a[1] < b[1])


def pareto_sweep(samples: Sequence[tuple[float, float]], beta_grid, r_ref: float, phi_ref_dB: float) -> ParetoResult:
    """Per-beta objective winners plus the non-dominated set of ``samples``.

    Exact objective ties go to the sample that is better on the other axis,
    then to the lowest index, so every winner is non-dominated.
    """
    if len(samples) == 0:
        raise ValueError("no samples")
    arr = np.asarray(samples, dtype=float)
    points = []
    for i, (r, phi) in enumerate(arr):
        dom = any(dominates(tuple(arr[j]), (r, phi)) for j in range(len(arr)) if j != i)
        points.append(ParetoPoint(i, float(r), float(phi), {}, dom))
    winners = {}
    for beta in beta_grid:
        spec = ObjectiveSpec(float(beta), r_ref, phi_ref_dB)
        obj = [objective(p.r_mean, p.phi_dB, spec) for p in points]
        for p, o in zip(points, obj):
            p.objectives[float(beta)] = o
        best = max(range(len(points)), key=lambda i: (obj[i], points[i].r_mean, -points[i].phi_dB, -i))
        winners[float(beta)] = best
    return ParetoResult(points, winners)


def write_pareto_csv(result: ParetoResult, path) -> None:
    betas = sorted(result.winners)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["index", "sum_se", "sll_dB", "dominated"] + [f"objective_beta_{b:g}" for b in betas] + ["wins_beta"])
        for p in result.points:
            wins = ";".join(f"{b:g}" for b in betas if result.winners[b] == p.index)
            wr.writerow([p.index, repr(p.r_mean), repr(p.phi_dB), int(p.dominated)]
                        + [repr(p.objectives[b]) for b in betas] + [wins])
