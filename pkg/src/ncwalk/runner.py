"""Run configurations and the single-run / ensemble pipeline.

A run goes graph -> basis -> Hamiltonian -> eigendecomposition -> propagation
-> observables, looping over disorder realizations when a disorder block is
present, and writes a series CSV, a JSON summary and a JSON manifest.
"""

from __future__ import annotations

import copy
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .disorder import DisorderSpec, run_ensemble
from .errors import ConfigError, NcwalkError
from .graph import Graph, GraphKind, build_graph
from .hamiltonian import assemble
from .hilbert import basis_dimension, default_sectors, enumerate_basis
from .observables import (
    classical_reference,
    compute_series,
    mixing_time,
    stationary_distribution,
    uniform_distribution,
)
from .outputs import SCHEMA_VERSION, write_json, write_series_csv
from .params import ModelParams
from .spectral import diagonalize, localized_initial_state, time_grid
from .swtransform import build_effective, compare_dynamics, effective_series

log = logging.getLogger(__name__)

MAX_DIMENSION = 15_000
OBSERVABLES = ("sigma", "mean_n", "ipr", "distribution", "classical", "l1_uniform", "l1_stationary")
DEFAULT_OBSERVABLES = ["sigma", "mean_n", "ipr", "distribution"]

_PARAM_KEYS = {"delta_eps", "t_hop", "v_int", "delta_pair", "gamma_single"}
_TOP_KEYS = {
    "name", "graph", "sectors", "max_particles", "params", "disorder", "grid", "initial_site",
    "observables", "layers", "classical_prefactor", "mixing", "stationary", "effective", "workers",
}


@dataclass
class RunConfig:
    name: str
    graph: dict
    params: dict
    grid: dict
    sectors: list[int] | None = None
    max_particles: int = 3
    disorder: dict | None = None
    initial_site: int | None = None
    observables: list[str] = field(default_factory=lambda: list(DEFAULT_OBSERVABLES))
    layers: list[int] = field(default_factory=list)
    classical_prefactor: float = 1.0
    mixing: dict | None = None
    stationary: bool = False
    effective: bool = False
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        unknown = set(data) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        for key in ("name", "graph", "params", "grid"):
            if key not in data:
                raise ConfigError(f"missing required key '{key}'")
        return cls(**copy.deepcopy(data))

    def to_dict(self) -> dict:
        return asdict(self)

    # derived objects; each raises ConfigError on invalid input

    def build_graph(self) -> Graph:
        try:
            return build_graph(GraphKind(self.graph["kind"]), int(self.graph["size"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid graph {self.graph!r}: {exc}") from exc

    def model_params(self) -> ModelParams:
        unknown = set(self.params) - _PARAM_KEYS
        if unknown:
            raise ConfigError(f"unknown parameters: {sorted(unknown)}")
        try:
            return ModelParams(**{k: float(v) for k, v in self.params.items()})
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid parameters: {exc}") from exc

    def resolved_sectors(self) -> list[int]:
        if self.sectors is not None:
            return sorted(int(s) for s in self.sectors)
        try:
            return default_sectors(self.model_params(), int(self.max_particles))
        except NcwalkError as exc:
            raise ConfigError(str(exc)) from exc

    def times(self) -> np.ndarray:
        try:
            return time_grid(float(self.grid["t_max"]), int(self.grid["n_steps"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid grid {self.grid!r}: {exc}") from exc

    def disorder_spec(self) -> DisorderSpec | None:
        if not self.disorder:
            return None
        extra = set(self.disorder) - {"strength", "realizations", "seed", "tail_window"}
        if extra:
            raise ConfigError(f"unknown disorder keys: {sorted(extra)}")
        try:
            return DisorderSpec(
                strength=float(self.disorder["strength"]),
                realizations=int(self.disorder.get("realizations", 100)),
                seed=int(self.disorder.get("seed", 0)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid disorder block: {exc}") from exc

    def tail_window(self) -> tuple[float, float]:
        times = self.times()
        window = (self.disorder or {}).get("tail_window")
        if window is None:
            return (float(times[-1]) / 2, float(times[-1]))
        lo, hi = (float(x) for x in window)
        return lo, hi

    def start_site(self, graph: Graph) -> int:
        return graph.default_start if self.initial_site is None else int(self.initial_site)

    def validate(self) -> dict:
        """Check every field; return a short description of the run."""
        if not isinstance(self.name, str) or not self.name or "/" in self.name:
            raise ConfigError(f"invalid run name {self.name!r}")
        graph = self.build_graph()
        params = self.model_params()
        sectors = self.resolved_sectors()
        if not sectors or len(set(sectors)) != len(sectors):
            raise ConfigError(f"invalid sectors {sectors}")
        if any(not 0 <= s <= graph.node_count for s in sectors):
            raise ConfigError(f"sectors {sectors} outside 0..{graph.node_count}")
        if 1 not in sectors:
            raise ConfigError("the one-particle sector is required for a localized start")
        dim = basis_dimension(graph.node_count, sectors)
        if dim > MAX_DIMENSION:
            raise ConfigError(f"basis dimension {dim} exceeds the dense limit {MAX_DIMENSION}")
        times = self.times()
        start = self.start_site(graph)
        if start not in graph.labels:
            raise ConfigError(f"initial site {start} is not a node of the graph")
        bad = set(self.observables) - set(OBSERVABLES)
        if bad:
            raise ConfigError(f"unknown observables {sorted(bad)}; choose from {OBSERVABLES}")
        for layer in self.layers:
            if layer not in graph.layer_values:
                raise ConfigError(f"layer {layer} not in {graph.layer_values}")
        if not (isinstance(self.classical_prefactor, (int, float)) and self.classical_prefactor > 0):
            raise ConfigError("classical_prefactor must be positive")
        if self.mixing is not None:
            if self.mixing.get("target") not in ("uniform", "stationary"):
                raise ConfigError("mixing.target must be 'uniform' or 'stationary'")
            if not float(self.mixing.get("eps", 0)) > 0:
                raise ConfigError("mixing.eps must be positive")
        disorder = self.disorder_spec()
        if disorder is not None:
            lo, hi = self.tail_window()
            if not (0 <= lo <= hi) or not np.any((times >= lo) & (times <= hi)):
                raise ConfigError(f"tail window {(lo, hi)} contains no grid times")
            if self.stationary or (self.mixing or {}).get("target") == "stationary" or "l1_stationary" in self.observables:
                raise ConfigError("stationary distributions are only available for single runs")
        if self.effective:
            if graph.kind is not GraphKind.CHAIN or params.gamma_single != 0 or params.delta_eps == 0:
                raise ConfigError("effective-model comparison needs a chain with gamma = 0 and delta_eps != 0")
            if disorder is not None:
                raise ConfigError("effective-model comparison is only available for ideal chains")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        return {
            "name": self.name,
            "graph": f"{graph.kind.value}({graph.size})",
            "nodes": graph.node_count,
            "sectors": sectors,
            "dimension": dim,
            "times": len(times),
            "realizations": disorder.realizations if disorder else 1,
        }


def apply_overrides(data: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.key=value`` overrides; values are parsed as YAML scalars."""
    data = copy.deepcopy(data)
    for item in overrides or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse override value {raw!r}") from exc
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            if node.get(part) is None:
                node[part] = {}
            node = node[part]
            if not isinstance(node, dict):
                raise ConfigError(f"override {key!r} descends into a non-mapping")
        node[parts[-1]] = value
    return data


def load_config(path, overrides: list[str] | None = None) -> RunConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(apply_overrides(data, overrides or []))


@dataclass
class RunManifest:
    name: str
    config: dict
    version: str
    wall_time: float
    dimension: int
    seeds: list[dict]
    files: dict[str, str]
    summary: dict

    def to_dict(self) -> dict:
        return asdict(self)


def _single_run(cfg: RunConfig, graph: Graph, params: ModelParams, sectors, times):
    space = enumerate_basis(graph, sectors)
    spec = diagonalize(assemble(graph, space, params), overwrite=True)
    psi0 = localized_initial_state(space, cfg.start_site(graph))
    series = compute_series(spec, psi0, space, times)
    stationary = None
    if cfg.stationary or "l1_stationary" in cfg.observables or (cfg.mixing or {}).get("target") == "stationary":
        stationary = stationary_distribution(spec, psi0, space, graph)
    return space.dimension, series, stationary


def run(cfg: RunConfig, out_dir) -> RunManifest:
    """Execute one configuration and write its output files into ``out_dir``."""
    info = cfg.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph = cfg.build_graph()
    params = cfg.model_params()
    sectors = cfg.resolved_sectors()
    times = cfg.times()
    disorder = cfg.disorder_spec()

    started = time.perf_counter()
    summary: dict = {"schema_version": SCHEMA_VERSION, "name": cfg.name}
    seeds: list[dict] = []
    stationary = None
    if disorder is None:
        dimension, series, stationary = _single_run(cfg, graph, params, sectors, times)
    else:
        result = run_ensemble(
            graph, params, disorder, sectors, times,
            start=cfg.start_site(graph), tail_window=cfg.tail_window(), workers=int(cfg.workers),
        )
        dimension, series, seeds = info["dimension"], result.mean_series, result.seeds
        summary.update(
            mean_long_time_ipr=result.mean_long_time_ipr,
            long_time_ipr_stderr=float(result.long_time_ipr.std(ddof=1) / math.sqrt(len(seeds)))
            if len(seeds) > 1 else 0.0,
            tail_window=list(result.tail_window),
            mean_distribution=result.mean_distribution,
            realizations=len(seeds),
        )

    columns: dict[str, np.ndarray] = {"time": times}
    for name in ("sigma", "mean_n", "ipr"):
        if name in cfg.observables:
            columns[name] = getattr(series, name)
    if "classical" in cfg.observables:
        columns["classical"] = classical_reference(times, cfg.classical_prefactor)
    uniform = uniform_distribution(graph)
    if "l1_uniform" in cfg.observables:
        columns["l1_uniform"] = series.l1_series(uniform)
    if "l1_stationary" in cfg.observables:
        columns["l1_stationary"] = series.l1_series(stationary)
    for layer in cfg.layers:
        columns[f"layer_{layer}"] = series.layer_series(graph, layer)
    if "distribution" in cfg.observables:
        for k, label in enumerate(graph.labels):
            columns[f"p_{label}"] = series.distributions[:, k]

    summary.update(
        dimension=dimension,
        sectors=sectors,
        max_mean_n=float(series.mean_n.max()),
        final_sigma=float(series.sigma[-1]),
        time_averaged_distribution=series.distributions.mean(axis=0),
        node_labels=list(graph.labels),
    )
    if stationary is not None:
        summary["stationary_distribution"] = stationary
    if cfg.mixing is not None:
        target = uniform if cfg.mixing["target"] == "uniform" else stationary
        summary["mixing"] = {
            "target": cfg.mixing["target"],
            "eps": float(cfg.mixing["eps"]),
            "time": mixing_time(series, target, float(cfg.mixing["eps"])),
            "horizon": float(times[-1]),
        }
    if cfg.effective:
        eff = build_effective(params, graph.node_count)
        report = compare_dynamics(series, effective_series(eff, times, cfg.start_site(graph)))
        summary["effective"] = {**eff.to_dict(), "max_sigma_diff": report.summary, "max_l1": float(report.l1.max())}
        columns["sigma_effective_diff"] = report.sigma_diff

    files = {
        "series": f"{cfg.name}.csv",
        "summary": f"{cfg.name}.json",
        "manifest": f"{cfg.name}.manifest.json",
    }
    summary["manifest"] = files["manifest"]
    meta = {
        "manifest": files["manifest"],
        "run": cfg.name,
        "graph": info["graph"],
        "sectors": " ".join(map(str, sectors)),
        "params": " ".join(f"{k}={v}" for k, v in sorted(params.as_dict().items())),
    }
    if disorder is not None:
        meta["disorder"] = f"strength={disorder.strength} realizations={disorder.realizations} seed={disorder.seed}"
    write_series_csv(out_dir / files["series"], columns, meta)
    write_json(out_dir / files["summary"], summary)
    manifest = RunManifest(
        name=cfg.name,
        config=cfg.to_dict(),
        version=__version__,
        wall_time=time.perf_counter() - started,
        dimension=int(dimension),
        seeds=seeds,
        files=files,
        summary={k: v for k, v in summary.items() if np.isscalar(v) or v is None},
    )
    write_json(out_dir / files["manifest"], manifest.to_dict())
    log.info("%s: dimension %d, %.1f s", cfg.name, dimension, manifest.wall_time)
    return manifest
