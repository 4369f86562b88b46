"""Dense real-symmetric Hamiltonian in the truncated occupation basis.

Hard-core operators act as on-site raising/lowering operators that commute
between sites, so every matrix element carries amplitude one times its
coupling constant.  Each unordered edge contributes once to the hopping,
density-density and pair-creation sums.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError
from .graph import Graph
from .hilbert import HilbertSpace
from .params import ModelParams

__all__ = ["ModelParams", "assemble", "parity_operator", "number_operator", "diagonal_energies"]


def diagonal_energies(graph: Graph, space: HilbertSpace, params: ModelParams) -> np.ndarray:
    """Number-conserving diagonal: site energies plus nearest-neighbour ``v``."""
    occ = space.occupations.astype(float)
    diag = occ @ params.site_energies(graph.node_count)
    if params.v_int != 0 and len(graph.pairs):
        i, j = graph.pairs.T
        diag = diag + params.v_int * (occ[:, i] * occ[:, j]).sum(axis=1)
    return diag


def assemble(graph: Graph, space: HilbertSpace, params: ModelParams) -> np.ndarray:
    """Build the full Hamiltonian matrix for ``params`` on ``graph`` within ``space``."""
    if space.graph is not graph and space.graph != graph:
        raise DimensionMismatchError("Hilbert space was enumerated over a different graph")
    if params.onsite_disorder is not None and params.onsite_disorder.shape[0] != graph.node_count:
        raise DimensionMismatchError(
            f"{params.onsite_disorder.shape[0]} site energies for {graph.node_count} nodes"
        )

    dim = space.dimension
    masks = space.masks
    occ = space.occupations.astype(bool)
    h = np.zeros((dim, dim))
    h[np.diag_indices(dim)] = diagonal_energies(graph, space, params)

    rows = np.arange(dim)
    for i, j in graph.pairs:
        both = (np.int64(1) << i) | (np.int64(1) << j)
        if params.t_hop != 0:
            # one of the two ends occupied: the partner is in the same sector
            src = rows[occ[:, i] != occ[:, j]]
            h[src, space.lookup(masks[src] ^ both)] = params.t_hop
        if params.delta_pair != 0:
            src = rows[~occ[:, i] & ~occ[:, j]]
            dst = space.lookup(masks[src] | both)
            keep = dst >= 0
            h[src[keep], dst[keep]] = params.delta_pair
            h[dst[keep], src[keep]] = params.delta_pair

    if params.gamma_single != 0:
        for k in range(graph.node_count):
            src = rows[~occ[:, k]]
            dst = space.lookup(masks[src] | (np.int64(1) << k))
            keep = dst >= 0
            h[src[keep], dst[keep]] = params.gamma_single
            h[dst[keep], src[keep]] = params.gamma_single
    return h


def number_operator(space: HilbertSpace) -> np.ndarray:
    """Total particle number as a dense diagonal matrix.

    For large spaces prefer ``space.counts``, which holds the same diagonal.
    """
    return np.diag(space.counts.astype(float))


def parity_operator(space: HilbertSpace) -> np.ndarray:
    return np.diag(np.where(space.counts % 2 == 0, 1.0, -1.0))
