import itertools

import numpy as np
import pytest

from ncwalk import (
    ModelParams,
    assemble,
    build_binary_tree,
    build_chain,
    build_glued_tree,
    enumerate_basis,
    number_operator,
    parity_operator,
)
from ncwalk.errors import DimensionMismatchError

from conftest import kron_hamiltonian, project, random_params


def test_two_site_hand_enumeration():
    g = build_chain(2)
    space = enumerate_basis(g, [0, 1, 2])
    h = assemble(g, space, ModelParams(delta_eps=20, t_hop=1, delta_pair=1))
    # basis: vacuum, site 0, site 1, both
    expected = np.array(
        [
            [0, 0, 0, 1],
            [0, 20, 1, 0],
            [0, 1, 20, 0],
            [1, 0, 0, 40],
        ],
        dtype=float,
    )
    np.testing.assert_array_equal(h, expected)


def test_reduces_to_tight_binding():
    g = build_chain(6)
    eps = np.linspace(-1, 1, 6)
    space = enumerate_basis(g, [1])
    h = assemble(g, space, ModelParams(delta_eps=3.0, t_hop=0.7, onsite_disorder=eps))
    np.testing.assert_allclose(h, np.diag(3.0 + eps) + 0.7 * g.adjacency())


def test_one_particle_chain_nonzeros():
    n = 9
    g = build_chain(n)
    h = assemble(g, enumerate_basis(g, [1]), ModelParams(delta_eps=0))
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 2 * (n - 1)


GRAPHS = [build_chain(4), build_chain(5), build_binary_tree(3), build_glued_tree(2)]


@pytest.mark.parametrize("graph", GRAPHS, ids=lambda g: f"{g.kind.value}{g.size}")
def test_matches_tensor_product_oracle(graph, rng):
    n = graph.node_count
    params = random_params(rng, n)
    full = kron_hamiltonian(graph, params)
    for r in range(1, n + 2):
        for sectors in itertools.combinations(range(n + 1), r):
            space = enumerate_basis(graph, sectors)
            h = assemble(graph, space, params)
            np.testing.assert_allclose(h, project(full, space), atol=1e-12)
            np.testing.assert_array_equal(h, h.T)


def test_parity_and_number_commutation(rng):
    g = build_chain(5)
    space = enumerate_basis(g, [0, 1, 2, 3, 4, 5])
    p_op, n_op = parity_operator(space), number_operator(space)
    no_gamma = assemble(g, space, random_params(rng, 5, gamma=False))
    assert np.abs(no_gamma @ p_op - p_op @ no_gamma).max() == 0
    assert np.abs(no_gamma @ n_op - n_op @ no_gamma).max() > 0
    conserving = assemble(g, space, ModelParams(delta_eps=2, v_int=0.3))
    assert np.abs(conserving @ n_op - n_op @ conserving).max() == 0
    with_gamma = assemble(g, space, random_params(rng, 5))
    assert np.abs(with_gamma @ p_op - p_op @ with_gamma).max() > 0


def test_number_changing_elements_vanish_within_sector(rng):
    g = build_chain(5)
    space = enumerate_basis(g, [1, 2, 3])
    with pytest.warns(UserWarning):
        params = ModelParams(delta_eps=0, t_hop=0, delta_pair=0.4, gamma_single=0.3)
    h_nc = assemble(g, space, params)
    same = space.counts[:, None] == space.counts[None, :]
    assert np.all(h_nc[same] == 0)


def test_linear_in_delta():
    g = build_chain(5)
    space = enumerate_basis(g, [1, 3])
    base = assemble(g, space, ModelParams(delta_eps=10, delta_pair=0.0))
    one = assemble(g, space, ModelParams(delta_eps=10, delta_pair=1.0)) - base
    scaled = assemble(g, space, ModelParams(delta_eps=10, delta_pair=2.5)) - base
    np.testing.assert_allclose(scaled, 2.5 * one)


def test_operator_diagonals():
    space = enumerate_basis(build_chain(3), [0, 1, 2, 3])
    n_diag = np.diag(number_operator(space))
    p_diag = np.diag(parity_operator(space))
    assert n_diag[space.index_of((1, 0, 1))] == 2
    assert n_diag[space.index_of(0)] == 0
    assert p_diag[space.index_of(0)] == 1
    assert p_diag[space.index_of((0, 1, 0))] == -1
    assert p_diag[space.index_of((1, 1, 1))] == -1


def test_wrong_disorder_length():
    g = build_chain(4)
    with pytest.raises(DimensionMismatchError):
        assemble(g, enumerate_basis(g, [1]), ModelParams(onsite_disorder=np.zeros(3)))


def test_space_from_other_graph():
    with pytest.raises(DimensionMismatchError):
        assemble(build_chain(4), enumerate_basis(build_chain(5), [1]), ModelParams())
