"""On-site disorder sampling and ensemble averaging.

Each realization draws from its own Philox stream keyed by ``(seed, index)``,
so any realization can be regenerated on its own and the ensemble result does
not depend on execution order or worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NcwalkError, NumericalFailure
from .graph import Graph
from .hamiltonian import assemble
from .hilbert import HilbertSpace, enumerate_basis
from .observables import ObservableSeries, compute_series
from .params import ModelParams
from .spectral import check_grid, diagonalize, localized_initial_state

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DisorderSpec:
    strength: float
    realizations: int = 100
    seed: int = 0

    def __post_init__(self):
        if not self.strength >= 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.strength}")
        if self.realizations < 1:
            raise ValueError(f"need at least one realization, got {self.realizations}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def realization_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_disorder(spec: DisorderSpec, realization_index: int, n: int) -> np.ndarray:
    """``n`` i.i.d. energies, uniform on ``[-w/2, w/2]``."""
    if not 0 <= realization_index < spec.realizations:
        raise IndexError(f"realization {realization_index} outside 0..{spec.realizations - 1}")
    if spec.strength == 0:
        return np.zeros(n)
    u = realization_rng(spec.seed, realization_index).random(n)
    return spec.strength * (u - 0.5)


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    mean_series: ObservableSeries
    mean_long_time_ipr: float
    mean_distribution: np.ndarray
    long_time_ipr: np.ndarray  # per realization
    tail_window: tuple[float, float]
    seeds: list[dict]

    @property
    def realizations(self) -> int:
        return len(self.seeds)


def _tail_mask(times: np.ndarray, window) -> np.ndarray:
    lo, hi = window
    mask = (times >= lo) & (times <= hi)
    if not mask.any():
        raise ValueError(f"tail window {window} contains no grid times")
    return mask


def run_realization(
    graph: Graph,
    space: HilbertSpace,
    params: ModelParams,
    eps: np.ndarray,
    times: np.ndarray,
    start: int,
) -> ObservableSeries:
    h = assemble(graph, space, params.with_disorder(eps))
    spec = diagonalize(h, overwrite=True)
    del h
    return compute_series(spec, localized_initial_state(space, start), space, times)


def run_ensemble(
    graph: Graph,
    params: ModelParams,
    spec: DisorderSpec,
    sectors,
    times,
    *,
    start: int | None = None,
    tail_window: tuple[float, float] | None = None,
    workers: int = 1,
) -> EnsembleResult:
    """Average observables over ``spec.realizations`` disorder samples.

    The long-time IPR is each realization's IPR averaged over ``tail_window``
    (default: the second half of the grid), then averaged over realizations.
    """
    times = check_grid(times)
    space = enumerate_basis(graph, sectors)
    start = graph.default_start if start is None else start
    if tail_window is None:
        tail_window = (times[-1] / 2, times[-1])
    tail = _tail_mask(times, tail_window)

    def one(index: int) -> ObservableSeries:
        eps = sample_disorder(spec, index, graph.node_count)
        try:
            return run_realization(graph, space, params, eps, times, start)
        except NcwalkError as exc:
            raise NumericalFailure(
                f"realization {index} failed: {exc}",
                {"seed": spec.seed, "realization": index},
            ) from exc

    indices = range(spec.realizations)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, indices))
    else:
        results = []
        for i in indices:
            results.append(one(i))
            log.debug("realization %d/%d done", i + 1, spec.realizations)

    # reduction in realization order keeps the sums bit-reproducible
    dist = np.mean([r.distributions for r in results], axis=0)
    lt_ipr = np.array([r.ipr[tail].mean() for r in results])
    mean_series = ObservableSeries(
        times=times,
        sigma=np.mean([r.sigma for r in results], axis=0),
        mean_n=np.mean([r.mean_n for r in results], axis=0),
        ipr=np.mean([r.ipr for r in results], axis=0),
        distributions=dist,
    )
    tail_dist = dist[tail].mean(axis=0)
    return EnsembleResult(
        mean_series=mean_series,
        mean_long_time_ipr=float(lt_ipr.mean()),
        mean_distribution=tail_dist / tail_dist.sum(),
        long_time_ipr=lt_ipr,
        tail_window=(float(tail_window[0]), float(tail_window[1])),
        seeds=[{"realization": i, "seed": spec.seed, "spawn_key": [i]} for i in indices],
    )

