"""Observables of propagated states.

The per-node distribution of a many-particle state is the normalised
occupation density ``<n_nu> / <N>``; inside the one-particle sector it is
exactly ``|<nu|psi>|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UndefinedDensityError
from .graph import Graph
from .hilbert import HilbertSpace
from .spectral import SpectralDecomposition, check_grid, iter_evolve

DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    times: np.ndarray
    sigma: np.ndarray
    mean_n: np.ndarray
    ipr: np.ndarray
    distributions: np.ndarray  # (n_times, n_nodes)

    def __post_init__(self):
        n = self.times.shape[0]
        for name in ("sigma", "mean_n", "ipr"):
            if getattr(self, name).shape != (n,):
                raise DimensionMismatchError(f"{name} does not match the time grid")
        if self.distributions.shape[0] != n:
            raise DimensionMismatchError("distributions do not match the time grid")

    def layer_series(self, graph: Graph, layer: int) -> np.ndarray:
        return layer_sum(self.distributions, graph, layer)

    def l1_series(self, target) -> np.ndarray:
        return l1_distance(self.distributions, target)


def _density(weights: np.ndarray, space: HilbertSpace) -> np.ndarray:
    """Normalised occupation density for basis-state weights of shape (..., dim)."""
    occupied = weights @ space.occupations.astype(float)
    total = weights @ space.counts.astype(float)
    if np.any(total <= 1e-300):
        raise UndefinedDensityError("state has no particles (pure vacuum); density undefined")
    return occupied / np.asarray(total)[..., None]


def site_density(state: np.ndarray, space: HilbertSpace, graph: Graph | None = None) -> np.ndarray:
    """Per-node probability of a state (or stack of states, one per row)."""
    state = np.asarray(state)
    if state.shape[-1] != space.dimension:
        raise DimensionMismatchError(f"state length {state.shape[-1]} != dimension {space.dimension}")
    if graph is not None and graph.node_count != space.node_count:
        raise DimensionMismatchError("graph and space disagree on the node count")
    return _density(np.abs(state) ** 2, space)


def sigma(dist: np.ndarray, graph: Graph) -> np.ndarray | float:
    """Standard deviation of the node coordinate under ``dist`` (broadcasts over rows)."""
    x = graph.coordinates
    dist = np.asarray(dist)
    mean = dist @ x
    var = dist @ x**2 - mean**2
    return np.sqrt(np.maximum(var, 0.0))


def mean_particle_number(state: np.ndarray, number_op: np.ndarray) -> float:
    """``<psi|N|psi>``; ``number_op`` may be the dense matrix or its diagonal."""
    state = np.asarray(state)
    number_op = np.asarray(number_op)
    if number_op.ndim == 1:
        return float(np.real(np.vdot(state, number_op * state)))
    return float(np.real(np.vdot(state, number_op @ state)))


def ipr(dist: np.ndarray) -> np.ndarray | float:
    dist = np.asarray(dist)
    return np.sum(dist**2, axis=-1)


def l1_distance(dist: np.ndarray, target: np.ndarray) -> np.ndarray | float:
    dist = np.asarray(dist)
    target = np.asarray(target)
    if dist.shape[-1] != target.shape[-1]:
        raise DimensionMismatchError(f"lengths differ: {dist.shape[-1]} vs {target.shape[-1]}")
    return np.sum(np.abs(dist - target), axis=-1)


def uniform_distribution(graph: Graph) -> np.ndarray:
    return np.full(graph.node_count, 1.0 / graph.node_count)


def mixing_time(series: ObservableSeries, target: np.ndarray, eps: float) -> float | None:
    """Earliest grid time after which the L1 distance to ``target`` stays <= ``eps``.

    Only the simulated horizon is checked.  Returns ``None`` if the distance
    is still above ``eps`` at the final grid time.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    above = np.flatnonzero(series.l1_series(target) > eps)
    if above.size == 0:
        return float(series.times[0])
    last = above[-1]
    if last == series.times.size - 1:
        return None
    return float(series.times[last + 1])


def _degenerate_groups(eigenvalues: np.ndarray, rtol: float) -> list[np.ndarray]:
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    breaks = np.flatnonzero(np.diff(eigenvalues) > rtol * scale) + 1
    return np.split(np.arange(eigenvalues.size), breaks)


def stationary_distribution(
    spec: SpectralDecomposition,
    psi0: np.ndarray,
    space: HilbertSpace,
    graph: Graph | None = None,
    rtol: float = DEGENERACY_RTOL,
) -> np.ndarray:
    """Infinite-time average of the node distribution.

    Eigenvalues closer than ``rtol * ||H||`` are treated as one level and
    interference within a level is kept, so the result is the true long-time
    average even for degenerate spectra.
    """
    c = spec.coefficients(psi0)
    v = spec.eigenvectors
    weights = (v**2) @ (np.abs(c) ** 2)
    for group in _degenerate_groups(spec.eigenvalues, rtol):
        if group.size < 2:
            continue
        block = v[:, group]
        projected = block.astype(complex) @ c[group]
        weights += np.abs(projected) ** 2 - (block**2) @ (np.abs(c[group]) ** 2)
    weights = np.maximum(weights, 0.0)
    dist = _density(weights, space)
    return dist / dist.sum()


def time_averaged_distribution(series: ObservableSeries) -> np.ndarray:
    return series.distributions.mean(axis=0)


def layer_sum(dist: np.ndarray, graph: Graph, layer: int) -> np.ndarray | float:
    mask = graph.layer_array == layer
    if not mask.any():
        raise ValueError(f"layer {layer} does not exist (layers {graph.layer_values})")
    return np.asarray(dist)[..., mask].sum(axis=-1)


def layer_probability(state: np.ndarray, space: HilbertSpace, graph: Graph, layer: int) -> float:
    """Probability summed over all nodes of one layer."""
    return float(layer_sum(site_density(state, space, graph), graph, layer))


def classical_reference(times, prefactor: float = 1.0) -> np.ndarray:
    """Diffusive ``prefactor * sqrt(tau)`` curve, for plotting next to sigma."""
    if prefactor <= 0:
        raise ValueError("prefactor must be positive")
    return prefactor * np.sqrt(np.asarray(times, dtype=float))


def compute_series(
    spec: SpectralDecomposition,
    psi0: np.ndarray,
    space: HilbertSpace,
    times,
    chunk: int = 128,
) -> ObservableSeries:
    """Propagate ``psi0`` over ``times`` and reduce every state to observables."""
    times = check_grid(times)
    graph = space.graph
    counts = space.counts.astype(float)
    dists, mean_n = [], []
    for _, states in iter_evolve(spec, psi0, times, chunk=chunk):
        weights = states.real**2 + states.imag**2
        dists.append(_density(weights, space))
        mean_n.append(weights @ counts)
    dist = np.concatenate(dists)
    return ObservableSeries(
        times=times,
        sigma=sigma(dist, graph),
        mean_n=np.concatenate(mean_n),
        ipr=ipr(dist),
        distributions=dist,
    )
