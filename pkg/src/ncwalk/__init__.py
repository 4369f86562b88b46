"""Continuous-time quantum walks with particle-number-changing couplings."""

from .graph import Graph, GraphKind, build_binary_tree, build_chain, build_glued_tree, build_graph
from .hamiltonian import assemble, number_operator, parity_operator
from .hilbert import HilbertSpace, default_sectors, enumerate_basis
from .params import ModelParams
from .spectral import (
    SpectralDecomposition,
    diagonalize,
    evolve,
    localized_initial_state,
    oracle_propagate,
    time_grid,
)

__version__ = "0.1.0"
