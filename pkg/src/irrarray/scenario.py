"""Scenario files: YAML with the experiment protocol and its defaults."""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from irrarray.arrays import TxArray, make_tx_array
from irrarray.beamforming import ARCHITECTURES
from irrarray.channel import ChannelParams, default_angular_grid
from irrarray.geometry import ElementPattern, build_grid
from irrarray.tiling import (
    ArrayConfig,
    build_dictionary,
    enumerate_exact_covers,
    fpra,
    sample_thinned,
)
from irrarray.tiling.config import CONFIG_KINDS


def default_scenario_dict() -> dict:
    text = resources.files("irrarray").joinpath("data/default_scenario.yaml").read_text(encoding="utf-8")
    return yaml.safe_load(text)


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict) and key != "arrays":
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass(frozen=True, eq=False)
class Scenario:
    """Validated scenario; ``raw`` keeps the merged mapping it was built from."""

    raw: dict = field(repr=False)

    def __post_init__(self):
        r = self.raw
        archs = [a.upper() for a in r["architectures"]]
        bad = [a for a in archs if a not in ARCHITECTURES]
        if bad:
            raise ValueError(f"unknown architecture(s) {bad}; choose from {list(ARCHITECTURES)}")
        for name, spec in r["arrays"].items():
            kind = spec.get("kind")
            if kind not in CONFIG_KINDS:
                raise ValueError(f"array {name!r} has unknown kind {kind!r}")
            if kind not in r["element_gain_dBi"] or kind not in r["feed_loss_dB"]:
                raise ValueError(f"array kind {kind!r} needs element_gain_dBi and feed_loss_dB entries")
        if self.K > len(self.channel_params().grid):
            raise ValueError("K exceeds the number of receiver grid positions")
        if self.raw["ga"]["population"] < 2:
            raise ValueError("GA population must be at least 2")

    # -- construction -------------------------------------------------
    @classmethod
    def from_dict(cls, override: dict | None = None) -> "Scenario":
        return cls(_merge(default_scenario_dict(), override or {}))

    @classmethod
    def load(cls, path) -> "Scenario":
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: scenario must be a mapping")
        return cls.from_dict(data)

    def replace(self, **override) -> "Scenario":
        return Scenario(_merge(self.raw, override))

    # -- accessors ----------------------------------------------------
    @property
    def name(self) -> str:
        return str(self.raw.get("name", "scenario"))

    @property
    def K(self) -> int:
        return int(self.raw["K"])

    @property
    def board(self) -> tuple[int, int]:
        return int(self.raw["tx"]["rows"]), int(self.raw["tx"]["cols"])

    @property
    def architectures(self) -> list[str]:
        return [a.upper() for a in self.raw["architectures"]]

    def __getitem__(self, key):
        return self.raw[key]

    def tx_grid(self):
        t = self.raw["tx"]
        return build_grid(t["rows"], t["cols"], t.get("dx", 0.5), t.get("dy", 0.5))

    def rx_grid(self):
        r = self.raw["rx"]
        return build_grid(r["rows"], r["cols"], r.get("dx", 0.5), r.get("dy", 0.5))

    def rx_pattern(self) -> ElementPattern:
        return ElementPattern(float(self.raw["rx"]["gain_dBi"]))

    def channel_params(self) -> ChannelParams:
        c = self.raw["channel"]
        g = c.get("grid", {})
        grid = default_angular_grid(g.get("limit", 0.8), g.get("step", 0.1), g.get("max_r2", 0.9))
        return ChannelParams(
            int(c["num_paths"]),
            int(c["subpaths"]),
            tuple(float(p) for p in c["path_power_dB"]),
            float(c["angle_spread"]),
            self.K,
            grid,
        )

    def tx_array(self, config: ArrayConfig) -> TxArray:
        return make_tx_array(config, self.tx_grid(), self.raw["element_gain_dBi"], self.raw["feed_loss_dB"])

    def thinned_S(self, spec: dict) -> int:
        N, M = self.board
        if "S" in spec:
            return int(spec["S"])
        return int(round(float(spec["fill"]) * N * M))

    def array_config(self, name: str) -> ArrayConfig:
        """Build the named array of the scenario (seeded, reproducible)."""
        spec = self.raw["arrays"][name]
        seed = int(spec.get("seed", self.raw["seeds"]["arrays"]))
        N, M = self.board
        kind = spec["kind"]
        if kind == "fpra":
            return fpra(N, M)
        if kind == "thinned":
            return sample_thinned(N, M, self.thinned_S(spec), seed)
        covers = enumerate_exact_covers(build_dictionary((N, M), kind), cap=1, rng_seed=seed)
        if not covers:
            raise ValueError(f"{N}x{M} board has no {kind} tiling")
        return covers[0]

    def array_configs(self) -> dict[str, ArrayConfig]:
        return {name: self.array_config(name) for name in self.raw["arrays"]}

    def output_dir(self) -> Path:
        return Path(self.raw.get("output_dir", "results"))
