"""Effective one-particle Hamiltonian from eliminating virtual three-particle states.

Two builders are provided.  :func:`build_effective` uses the closed-form
coefficients for an ideal open chain with pair coupling only.
:func:`build_effective_second_order` evaluates the second-order sum over
three-particle states explicitly, with per-state energy denominators, and so
also covers disordered chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, SingularDenominatorError, UnsupportedRegimeError
from .graph import Graph, GraphKind, build_chain
from .hamiltonian import assemble, diagonal_energies
from .hilbert import enumerate_basis
from .observables import ObservableSeries, compute_series
from .params import ModelParams
from .spectral import diagonalize, localized_initial_state


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    onsite: np.ndarray
    nn_hop: float
    nnn_hop: float
    matrix: np.ndarray

    def to_dict(self) -> dict:
        return {
            "onsite": self.onsite.tolist(),
            "nn_hop": self.nn_hop,
            "nnn_hop": self.nnn_hop,
        }


def _check_regime(params: ModelParams):
    if params.delta_eps == 0:
        raise SingularDenominatorError("delta_eps = 0 makes the energy denominators vanish")
    if params.gamma_single != 0:
        raise UnsupportedRegimeError("effective model is derived for gamma = 0 only")


def m_star(m: int, n: int) -> int:
    """Number of nearest-neighbour pairs of an ``n``-site chain that avoid site ``m``."""
    if not 0 <= m < n:
        raise ValueError(f"site {m} outside 0..{n - 1}")
    left = sum(1 for i in range(m) for j in range(i + 1, m) if abs(i - j) == 1)
    right = sum(1 for i in range(m + 1, n) for j in range(i + 1, n) if abs(i - j) == 1)
    return left + right


def nnn_coupling(delta: float, delta_eps: float) -> float:
    return -3.0 * delta**2 / (2.0 * delta_eps)


def build_effective(params: ModelParams, n: int) -> EffectiveHamiltonian:
    """Closed-form effective chain: shifted site energies, ``t`` and ``t'`` hops."""
    _check_regime(params)
    if n < 2:
        raise ValueError("need at least two sites")
    d, de = params.delta_pair, params.delta_eps
    shift = np.array([m_star(m, n) for m in range(n)], dtype=float) * (d**2 / de)
    onsite = params.site_energies(n) - shift
    t2 = nnn_coupling(d, de)
    h = np.diag(onsite)
    h += params.t_hop * (np.eye(n, k=1) + np.eye(n, k=-1))
    h += t2 * (np.eye(n, k=2) + np.eye(n, k=-2))
    return EffectiveHamiltonian(onsite=onsite, nn_hop=params.t_hop, nnn_hop=t2, matrix=h)


def build_effective_second_order(graph: Graph, params: ModelParams) -> EffectiveHamiltonian:
    """Second-order effective Hamiltonian with explicit three-particle denominators.

    ``H_eff = H0 + 1/2 sum_l [1/(E_m - E_l) + 1/(E_m' - E_l)] V_ml V_lm'``
    where ``E`` are the number-conserving diagonal energies.
    """
    _check_regime(params)
    if graph.kind is not GraphKind.CHAIN:
        raise UnsupportedRegimeError("effective model is built for chains only")
    space = enumerate_basis(graph, [1, 3])
    full = assemble(graph, space, params)
    energies = diagonal_energies(graph, space, params)
    one = space.sector_indices(1)
    three = space.sector_indices(3)
    coupling = full[np.ix_(one, three)]
    gaps = energies[one][:, None] - energies[three][None, :]
    if np.any(np.abs(gaps[coupling != 0]) < 1e-12):
        raise SingularDenominatorError("resonant one- and three-particle states")
    with np.errstate(divide="ignore"):
        inv = np.where(coupling != 0, 1.0 / gaps, 0.0)
    weighted = coupling * inv
    h2 = 0.5 * (weighted @ coupling.T + coupling @ weighted.T)
    h = full[np.ix_(one, one)] + h2
    n = graph.node_count
    bulk = n // 2
    nnn = float(h2[bulk, bulk + 2]) if n > bulk + 2 else 0.0
    return EffectiveHamiltonian(onsite=np.diag(h).copy(), nn_hop=params.t_hop, nnn_hop=nnn, matrix=h)


def effective_series(eff: EffectiveHamiltonian, times, start: int | None = None) -> ObservableSeries:
    """Propagate a single particle under an effective chain Hamiltonian."""
    n = eff.matrix.shape[0]
    graph = build_chain(n)
    space = enumerate_basis(graph, [1])
    start = graph.default_start if start is None else start
    spec = diagonalize(eff.matrix)
    return compute_series(spec, localized_initial_state(space, start), space, times)


@dataclass(frozen=True, eq=False)
class DynamicsComparison:
    times: np.ndarray
    max_abs: np.ndarray  # per time, max over nodes of |p_full - p_eff|
    l1: np.ndarray  # per time, sum over nodes of |p_full - p_eff|
    sigma_diff: np.ndarray  # per time, |sigma_full - sigma_eff|

    @property
    def summary(self) -> float:
        return float(self.sigma_diff.max())


def compare_dynamics(full: ObservableSeries, effective: ObservableSeries) -> DynamicsComparison:
    if full.times.shape != effective.times.shape or not np.array_equal(full.times, effective.times):
        raise DimensionMismatchError("series are on different time grids")
    if full.distributions.shape != effective.distributions.shape:
        raise DimensionMismatchError("series cover different numbers of nodes")
    diff = np.abs(full.distributions - effective.distributions)
    return DynamicsComparison(
        times=full.times,
        max_abs=diff.max(axis=1),
        l1=diff.sum(axis=1),
        sigma_diff=np.abs(full.sigma - effective.sigma),
    )
