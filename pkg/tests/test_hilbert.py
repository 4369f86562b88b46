from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncwalk import ModelParams, build_chain, default_sectors, enumerate_basis
from ncwalk.errors import InvalidSectorError


@pytest.mark.parametrize(
    "n,sectors,dim",
    [(3, [1, 3], 4), (19, [1, 3], 988), (3, [0, 1, 2, 3], 8), (41, [1, 3], 10701)],
)
def test_dimension(n, sectors, dim):
    assert enumerate_basis(build_chain(n), sectors).dimension == dim


def test_nineteen_sites_three_particles():
    # C(19, 3) by direct formula, independent of combinations()
    assert 19 * 18 * 17 // 6 == 969
    space = enumerate_basis(build_chain(19), [3])
    assert space.dimension == 969


def test_ordering_by_count_then_sites():
    space = enumerate_basis(build_chain(3), [3, 1, 0])
    assert space.sectors == (0, 1, 3)
    occ = [s.occupation for s in space.states]
    assert occ == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]


def test_one_particle_index_is_site():
    space = enumerate_basis(build_chain(6), [1, 3])
    for k in range(6):
        assert space.index_of(1 << k) == k


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 8), data=st.data())
def test_round_trip_and_dimension(n, data):
    sectors = data.draw(st.sets(st.integers(0, n), min_size=1))
    space = enumerate_basis(build_chain(n), sorted(sectors))
    assert space.dimension == sum(comb(n, s) for s in sectors)
    for i, state in enumerate(space.states):
        assert space.index_of(state) == i
        assert space.index_of(state.occupation) == i
        assert state.particle_count == sum(state.occupation)
    assert sorted(space.lookup(space.masks)) == list(range(space.dimension))
    again = enumerate_basis(build_chain(n), sorted(sectors))
    assert (again.masks == space.masks).all()


def test_lookup_missing():
    space = enumerate_basis(build_chain(4), [1])
    assert space.lookup(space.masks[:1] | 0b10)[0] == -1


@pytest.mark.parametrize("sectors", [[], [4], [-1], [1, 1]])
def test_invalid_sectors(sectors):
    with pytest.raises(InvalidSectorError):
        enumerate_basis(build_chain(3), sectors)


@pytest.mark.parametrize(
    "delta,gamma,max_n,expected",
    [(1, 0, 3, [1, 3]), (0, 1, 3, [0, 1, 2, 3]), (0, 0, 3, [1]), (1, 0, 5, [1, 3, 5]), (1, 1, 2, [0, 1, 2])],
)
def test_default_sectors(delta, gamma, max_n, expected):
    p = ModelParams(delta_eps=20, delta_pair=delta, gamma_single=gamma)
    assert default_sectors(p, max_n) == expected


def test_default_sectors_invalid():
    with pytest.raises(InvalidSectorError):
        default_sectors(ModelParams(), 0)
