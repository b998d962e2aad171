from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinverlinde.alcove import (
    AlcoveContext,
    Partition,
    cell_stats,
    enumerate_alcove,
    orbit_info,
    orbit_sizes,
    orbits,
    rho_step,
    transpose_in_alcove,
)


def test_partition_validation():
    assert Partition([3, 1, 0]).trimmed() == Partition([3, 1])
    assert Partition([2, 1]).padded(4) == (2, 1, 0, 0)
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])
    with pytest.raises(ValueError):
        Partition([1, 1, 1]).padded(2)


def test_transpose_and_cells():
    lam = Partition([3, 1])
    assert lam.transpose() == (2, 1, 1)
    assert lam.transpose().transpose() == (3, 1)
    assert list(lam.cells()) == [(1, 1), (1, 2), (1, 3), (2, 1)]
    assert Partition().transpose() == ()


def test_context_validation():
    for bad in [(1, 3), (3, 1), (0, 0)]:
        with pytest.raises(ValueError):
            AlcoveContext(*bad)
    ctx = AlcoveContext(6, 4)
    assert (ctx.d, ctx.N_red, ctx.K_red, ctx.level_shift) == (2, 3, 2, 10)


def test_small_alcoves():
    assert enumerate_alcove(AlcoveContext(2, 2)) == [(0, 0), (1, 0), (2, 0)]
    assert enumerate_alcove(AlcoveContext(3, 2)) == [
        (0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 0, 0), (2, 1, 0), (2, 2, 0),
    ]


@pytest.mark.parametrize("N", range(2, 7))
@pytest.mark.parametrize("K", range(2, 7))
def test_alcove_size_and_order(N, K):
    ctx = AlcoveContext(N, K)
    w = enumerate_alcove(ctx)
    assert len(w) == comb(N + K - 1, N - 1) == ctx.size
    assert w == sorted(set(w))
    assert all(ctx.contains(lam) for lam in w)


def test_weight_coercion():
    ctx = AlcoveContext(4, 3)
    assert ctx.weight((2, 1)) == (2, 1, 0, 0)
    with pytest.raises(ValueError):
        ctx.weight((4,))
    with pytest.raises(ValueError):
        ctx.weight((1, 1, 1, 1))


def test_rho_examples():
    ctx = AlcoveContext(2, 2)
    assert rho_step((0, 0), ctx) == (2, 0)
    assert rho_step((2, 0), ctx) == (0, 0)
    assert rho_step((1, 0), ctx) == (1, 0)
    ctx = AlcoveContext(3, 2)
    assert rho_step((1, 1, 0), ctx) == (1, 0, 0)


@st.composite
def alcove_weights(draw):
    N = draw(st.integers(2, 7))
    K = draw(st.integers(2, 7))
    ctx = AlcoveContext(N, K)
    return ctx, draw(st.sampled_from(ctx.weights))


@given(alcove_weights())
@settings(max_examples=300, deadline=None)
def test_rho_is_n_periodic(case):
    ctx, lam = case
    x = lam
    for _ in range(ctx.N):
        x = rho_step(x, ctx)
        assert ctx.contains(x)
    assert x == lam
    info = orbit_info(lam, ctx)
    assert ctx.N % info.orbit_size == 0
    assert info.orbit_size * info.stab_order == ctx.N


@pytest.mark.parametrize("N,K", [(2, 2), (3, 4), (4, 4), (6, 3), (6, 6)])
def test_rho_is_bijection(N, K):
    ctx = AlcoveContext(N, K)
    image = {rho_step(lam, ctx) for lam in ctx.weights}
    assert image == set(ctx.weights)


def test_orbit_examples():
    ctx = AlcoveContext(2, 2)
    assert orbit_info((1, 0), ctx).stab_order == 2
    assert orbit_info((0, 0), ctx).orbit_size == 2
    ctx = AlcoveContext(4, 4)
    assert orbit_info((2, 2), ctx).orbit_size == 2
    assert orbit_info((3, 2, 1), ctx).orbit_size == 1
    assert orbit_info((3, 2, 1), ctx, step_power=2).group_order == 2
    with pytest.raises(ValueError):
        orbit_info((0,), ctx, step_power=3)


@pytest.mark.parametrize("N,K,step", [(4, 4, 1), (4, 4, 2), (6, 6, 1), (6, 6, 3), (6, 4, 2)])
def test_orbits_partition_alcove(N, K, step):
    ctx = AlcoveContext(N, K)
    found = [lam for info in orbits(ctx, step) for lam in info.orbit]
    assert sorted(found) == list(ctx.weights)
    sizes = orbit_sizes(ctx, step)
    assert all((N // step) % o == 0 for o in sizes.values())


def test_cell_stats():
    assert cell_stats((2, 1)) == [(0, 3), (1, 1), (-1, 1)]
    with pytest.raises(ValueError):
        cell_stats((1, 1, 1), N=2)


@pytest.mark.parametrize("N,K", [(2, 3), (3, 3), (4, 2), (3, 5)])
def test_transpose_duality(N, K):
    ctx, dual = AlcoveContext(N, K), AlcoveContext(K, N)
    for lam in ctx.weights:
        if lam[0] < K:
            t = transpose_in_alcove(lam, ctx)
            assert dual.contains(t)
            assert t.transpose() == lam.trimmed()


def test_transpose_leaves_alcove_on_full_rows():
    ctx = AlcoveContext(2, 3)
    with pytest.raises(ValueError):
        transpose_in_alcove((3, 0), ctx)
