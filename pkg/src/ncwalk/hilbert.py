"""Hard-core occupation basis truncated to a set of particle-number sectors."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidSectorError
from .graph import Graph
from .params import ModelParams

MAX_SITES = 62


@dataclass(frozen=True)
class BasisState:
    occupation: tuple[int, ...]

    @property
    def particle_count(self) -> int:
        return sum(self.occupation)

    @property
    def mask(self) -> int:
        return sum(1 << k for k, bit in enumerate(self.occupation) if bit)


@dataclass(frozen=True, eq=False)
class HilbertSpace:
    """Enumerated basis.

    States are ordered by particle count, then lexicographically by the tuple
    of occupied node positions.  Occupations are stored as integer bit masks
    (bit ``k`` = node position ``k``).
    """

    graph: Graph
    sectors: tuple[int, ...]
    masks: np.ndarray

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def dimension(self) -> int:
        return int(self.masks.shape[0])

    @cached_property
    def occupations(self) -> np.ndarray:
        """``(dim, N)`` 0/1 matrix of site occupations."""
        bits = np.arange(self.node_count, dtype=np.int64)
        return ((self.masks[:, None] >> bits[None, :]) & 1).astype(np.int8)

    @cached_property
    def counts(self) -> np.ndarray:
        return self.occupations.sum(axis=1).astype(np.int64)

    @cached_property
    def _sorted(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.masks, kind="stable")
        return self.masks[order], order

    @cached_property
    def _index(self) -> dict[int, int]:
        return {int(m): i for i, m in enumerate(self.masks)}

    def index_of(self, occupation) -> int:
        """Dense index of a state given as a bit mask, bit sequence or :class:`BasisState`."""
        if isinstance(occupation, BasisState):
            mask = occupation.mask
        elif isinstance(occupation, (int, np.integer)):
            mask = int(occupation)
        else:
            mask = BasisState(tuple(int(b) for b in occupation)).mask
        try:
            return self._index[mask]
        except KeyError:
            raise KeyError(f"occupation {mask:#b} not in this space") from None

    def lookup(self, masks: np.ndarray) -> np.ndarray:
        """Vectorised ``index_of``; returns -1 where a mask is absent."""
        sorted_masks, order = self._sorted
        pos = np.searchsorted(sorted_masks, masks)
        pos = np.clip(pos, 0, len(sorted_masks) - 1)
        hit = sorted_masks[pos] == masks
        return np.where(hit, order[pos], -1)

    def state(self, index: int) -> BasisState:
        return BasisState(tuple(int(b) for b in self.occupations[index]))

    @property
    def states(self) -> list[BasisState]:
        return [self.state(i) for i in range(self.dimension)]

    def sector_indices(self, n: int) -> np.ndarray:
        return np.flatnonzero(self.counts == n)


def enumerate_basis(graph: Graph, sectors) -> HilbertSpace:
    sectors = list(sectors)
    if not sectors:
        raise InvalidSectorError("at least one particle-number sector is required")
    if len(set(sectors)) != len(sectors):
        raise InvalidSectorError(f"duplicate sectors in {sectors}")
    n = graph.node_count
    if n > MAX_SITES:
        raise InvalidSectorError(f"at most {MAX_SITES} sites are supported, got {n}")
    for s in sectors:
        if not 0 <= s <= n:
            raise InvalidSectorError(f"sector {s} outside 0..{n}")
    sectors = tuple(sorted(sectors))
    masks = []
    for s in sectors:
        masks.extend(sum(1 << k for k in occ) for occ in combinations(range(n), s))
    masks = np.array(masks, dtype=np.int64)
    masks.setflags(write=False)
    return HilbertSpace(graph=graph, sectors=sectors, masks=masks)


def basis_dimension(n: int, sectors) -> int:
    return sum(comb(n, s) for s in sectors)


def default_sectors(params: ModelParams, max_particles: int = 3) -> list[int]:
    """Sectors needed for a walk that starts with one particle.

    Pair creation alone links sectors of equal parity, so only odd counts are
    kept; single-particle creation links every count down to the vacuum.
    """
    if max_particles < 1:
        raise InvalidSectorError("max_particles must be at least 1")
    if params.gamma_single != 0:
        return list(range(0, max_particles + 1))
    if params.delta_pair != 0:
        return list(range(1, max_particles + 1, 2))
    return [1]
