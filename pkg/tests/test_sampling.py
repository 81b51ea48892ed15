import numpy as np
import pytest
from scipy import integrate

from hyjump.sampling import (
    IntervalStats,
    SamplingPlan,
    TimeGrid,
    generate,
    grid_functionals,
    interval_stats_array,
    jump_interval_stats,
    mesh,
    refresh_grid,
    tau_bounds,
    univariate_G,
)

from conftest import grid, random_grid


def test_regular_grid():
    np.testing.assert_array_equal(generate(SamplingPlan.regular(4)).times, [0, 0.25, 0.5, 0.75, 1])


def test_alternating_grid():
    # odd points shifted by alpha/n
    np.testing.assert_allclose(generate(SamplingPlan.alternating(4, 0.5)).times, [0, 0.375, 0.5, 0.875, 1])


def test_alternating_odd_n_truncates_and_closes():
    g = generate(SamplingPlan.alternating(5, 0.5))
    np.testing.assert_allclose(g.times, [0, 0.3, 0.4, 0.7, 0.8, 1.0])


def test_transformed_grid():
    g = generate(SamplingPlan.transformed(4, "square"))
    np.testing.assert_allclose(g.times, [0, 1 / 16, 1 / 4, 9 / 16, 1])
    g2 = generate(SamplingPlan.transformed(4, lambda x: x**3))
    np.testing.assert_allclose(g2.times, (np.arange(5) / 4) ** 3)


def test_poisson_grid_count_and_shape():
    g = generate(SamplingPlan.poisson(1.0, 30000, seed=3))
    assert g.times[0] == 0.0 and g.end < 1.0
    # Poisson(30000) count: sd ~ 173
    assert abs(len(g) - 1 - 30000) < 5 * np.sqrt(30000)
    assert g.n_nominal == 30000


def test_poisson_grid_deterministic_by_seed():
    a = generate(SamplingPlan.poisson(2.0, 1000, seed=11))
    b = generate(SamplingPlan.poisson(2.0, 1000, seed=11))
    np.testing.assert_array_equal(a.times, b.times)


@pytest.mark.parametrize(
    "plan",
    [
        dict(kind="regular", n=1),
        dict(kind="alternating", n=10, alpha=1.0),
        dict(kind="poisson", n=10, lam=0.0),
        dict(kind="transformed", n=10, transform="nope"),
        dict(kind="hexagonal", n=10),
    ],
)
def test_invalid_plans(plan):
    with pytest.raises(ValueError):
        SamplingPlan(**plan)


def test_timegrid_invariants():
    with pytest.raises(ValueError):
        TimeGrid(np.array([0.1, 0.5]), 2)
    with pytest.raises(ValueError):
        TimeGrid(np.array([0.0, 0.5, 0.5]), 2)
    with pytest.raises(ValueError):
        TimeGrid(np.array([0.0, 1.5]), 2)


def test_text_round_trip():
    g = generate(SamplingPlan.poisson(1.0, 200, seed=1))
    back = TimeGrid.from_text(g.to_text())
    np.testing.assert_array_equal(back.times, g.times)
    assert back.n_nominal == 200


@pytest.mark.parametrize(
    "times, s, expected",
    [
        ((0, 0.2, 0.5, 1), 0.4, (0.2, 0.5, 1, 2)),
        ((0, 0.2, 0.5, 1), 0.5, (0.5, 0.5, 2, 2)),
        ((0, 0.25, 0.5, 0.75, 1), 0.6, (0.5, 0.75, 2, 3)),
        ((0, 0.25, 0.5, 0.75, 1), 0.0, (0.0, 0.0, 0, 0)),
    ],
)
def test_tau_bounds(times, s, expected):
    assert tau_bounds(grid(*times), s) == expected


def test_tau_bounds_outside_span():
    with pytest.raises(ValueError):
        tau_bounds(grid(0, 0.5), 0.7)


def test_tau_bounds_bracket_property(rng):
    g = random_grid(rng, 60)
    for s in rng.random(500):
        lo, hi, mlo, mhi = tau_bounds(g, s)
        assert lo <= s <= hi
        assert g.times[mlo] == lo and g.times[mhi] == hi
        assert mhi - mlo in (0, 1)
    for s in g.times:
        lo, hi, _, _ = tau_bounds(g, s)
        assert lo == hi == s


@pytest.mark.parametrize(
    "g, expected",
    [
        (grid(0, 0.25, 0.5, 0.75, 1), 0.25),
        (generate(SamplingPlan.alternating(4, 0.5)), 0.375),  # (1 + alpha) / n
        (grid(0, 1), 1.0),
    ],
)
def test_mesh(g, expected):
    assert mesh(g) == pytest.approx(expected)


def test_mesh_degenerate():
    with pytest.raises(ValueError):
        mesh(grid(0))


@pytest.mark.parametrize(
    "g1, g2, expected",
    [
        ((0, 0.2, 0.5, 1), (0, 0.3, 0.6, 1), (0, 0.3, 0.6, 1)),
        ((0, 0.25, 0.5, 0.75, 1), (0, 0.25, 0.5, 0.75, 1), (0, 0.25, 0.5, 0.75, 1)),
        ((0, 1), (0, 0.5, 1), (0, 1)),
    ],
)
def test_refresh_grid_examples(g1, g2, expected):
    np.testing.assert_allclose(refresh_grid(grid(*g1), grid(*g2)).T, expected)


def test_refresh_grid_structure(rng):
    for _ in range(200):
        g1 = generate(SamplingPlan.poisson(1.0, int(rng.integers(5, 80)), seed=rng.integers(2**32)))
        g2 = generate(SamplingPlan.poisson(rng.uniform(0.3, 3), int(rng.integers(5, 80)), seed=rng.integers(2**32)))
        rg = refresh_grid(g1, g2)
        T = rg.T
        assert T[0] == 0.0 and np.all(np.diff(T) > 0)
        assert rg.count <= min(len(g1), len(g2)) - 1
        for a, b in zip(T[:-1], T[1:]):
            assert np.any((g1.times > a) & (g1.times <= b))
            assert np.any((g2.times > a) & (g2.times <= b))
        Q = np.vstack([rg.minus_gap(1), rg.minus_gap(2)])
        assert np.all(np.min(Q, axis=0) == 0.0)
        P = np.vstack([rg.plus_gap(1), rg.plus_gap(2)])[:, :-1]
        assert np.all(np.min(P, axis=0) == 0.0)


def test_functionals_synchronous_regular():
    g = generate(SamplingPlan.regular(500))
    G, F, H = grid_functionals(g, g, 1.0, 500)
    assert G == pytest.approx(1.0)
    assert F == 0.0 and H == 0.0


def test_functionals_hand_example():
    # T = {0, .3, .6, 1}; gaps: plus gaps at T1 (comp 1) = .5-.3, at T2 (comp 1) = 1-.6
    # minus gaps at T1 (comp 1) = .3-.2, at T2 (comp 1) = .6-.5
    g1, g2 = grid(0, 0.2, 0.5, 1), grid(0, 0.3, 0.6, 1)
    G, F, H = grid_functionals(g1, g2, 1.0, 1.0)
    assert G == pytest.approx(0.3**2 + 0.3**2 + 0.4**2)
    f_expected = (0.3 + 0.0) * 0.2 + 0.0 * (0.3 + 0.0) + 0.3 * (0.1 + 0.0)
    f_expected += (0.3 + 0.0) * 0.4 + 0.0 * (0.3 + 0.1) + 0.4 * (0.1 + 0.0)
    assert F == pytest.approx(f_expected)
    assert H == pytest.approx(0.1 * 0.2 + 0.1 * 0.4)


def test_functionals_identical_poisson_grids_reduce_to_univariate():
    g = generate(SamplingPlan.poisson(1.0, 100_000, seed=5))
    G, F, H = grid_functionals(g, g, 1.0, 100_000)
    assert G == pytest.approx(univariate_G(g, 1.0))
    assert G == pytest.approx(2.0, rel=0.03)
    assert F == 0.0 and H == 0.0


def test_univariate_G_regular_and_transformed():
    assert univariate_G(generate(SamplingPlan.regular(1000))) == pytest.approx(1.0)
    target, _ = integrate.quad(lambda x: (2 * x) ** 2, 0, 1)  # integral of f'(x)^2 for f = x^2
    assert univariate_G(generate(SamplingPlan.transformed(1000, "square"))) == pytest.approx(target, rel=1e-5)
    smooth, _ = integrate.quad(lambda x: (6 * x - 6 * x**2) ** 2, 0, 1)
    assert univariate_G(generate(SamplingPlan.transformed(2000, "smoothstep"))) == pytest.approx(smooth, rel=1e-5)


def test_univariate_G_partial_time():
    g = generate(SamplingPlan.regular(100))
    assert univariate_G(g, 0.5) == pytest.approx(0.5)


def test_interval_stats_hand_example():
    iv = jump_interval_stats(0.4, grid(0, 0.2, 0.5, 1), grid(0, 0.3, 0.6, 1))
    assert iv.as_array() == pytest.approx([0.4, 0.4, 0.0, 0.0, 0.2])
    assert not iv.shifted


def test_interval_stats_synchronous_grids():
    g = grid(0, 0.25, 0.5, 0.75, 1)
    iv = jump_interval_stats(0.6, g, g)
    assert iv.as_array() == pytest.approx([0.25, 0, 0, 0, 0])


def test_interval_stats_collision_is_shifted():
    g1, g2 = grid(0, 0.2, 0.5, 1), grid(0, 0.3, 0.6, 1)
    iv = jump_interval_stats(0.5, g1, g2)
    assert iv.shifted
    np.testing.assert_allclose(iv.as_array(), interval_stats_array([0.5 + 1e-12], g1.times, g2.times)[0])


@pytest.mark.parametrize("s", [0.0, 1.0])
def test_interval_stats_rejects_boundary(s):
    g = grid(0, 0.5, 1)
    with pytest.raises(ValueError):
        jump_interval_stats(s, g, g)


def test_interval_stats_zero_products(rng):
    # 10^4 random (s, grids) draws
    for _ in range(100):
        g1 = random_grid(rng, int(rng.integers(3, 40)))
        g2 = random_grid(rng, int(rng.integers(3, 40)))
        s = rng.uniform(0, 1, size=100)
        s = s[~np.isin(s, g1.times) & ~np.isin(s, g2.times)]
        a = interval_stats_array(s, g1.times, g2.times)
        assert np.all(a >= 0)
        assert np.all(a[:, 1] * a[:, 3] == 0)  # r2 * r3
        assert np.all(a[:, 2] * a[:, 4] == 0)  # l2 * l3


def test_interval_stats_scaled():
    iv = IntervalStats(0.1, 0.2, 0.0, 0.0, 0.3).scaled(10)
    assert iv.as_array() == pytest.approx([1, 2, 0, 0, 3])
