import math

import numpy as np
import pytest

from aqwalk import (
    conditional_distribution,
    delta_state,
    eigenvalue_power_approx,
    entropy_series,
    estimate_rho,
    evolve,
    find_entropy_minima,
    hadamard,
    lambda_of_theta,
    matrix_power_heatmap,
    peak_count,
    refine_entropy_minimum,
    revival_ray_angles,
    revival_times,
    shannon_entropy,
    solve_theta,
    stabilization_time,
    tau,
)
from aqwalk.errors import NoMinimum, NotADistribution, ResourceLimit

COIN = hadamard()


def test_tau_hadamard():
    assert tau(COIN) == pytest.approx(4.0 / math.pi, rel=1e-12)


def test_revival_times_frozen():
    schedule = revival_times(400, COIN, [(1, 1), (2, 1), (3, 1), (4, 1)])
    assert [e[2] for e in schedule.entries] == [25465, 50930, 76394, 101859]
    schedule = revival_times(400, COIN, [(1, 2), (1, 3), (2, 3)])
    assert [e[2] for e in schedule.entries] == [12732, 8488, 16977]


def test_revival_times_validation():
    with pytest.raises(ValueError):
        revival_times(400, COIN, [(2, 4)])  # not coprime
    with pytest.raises(ValueError):
        revival_times(400, COIN, [(0, 1)])


def test_eigenvalue_power_approx_matches_exact():
    n = 400
    for p, q in [(1, 1), (1, 2)]:
        t = revival_times(n, COIN, [(p, q)]).entries[0][2]
        tau_mult = tau(COIN) * p / (8.0 * q)
        rho_eff = (t - tau_mult * n * n) / n
        num, den = p, 8 * q
        g = math.gcd(num, den)
        num, den = num // g, den // g
        for k in (1, 2, 3):
            lam = lambda_of_theta(solve_theta(k, n, 1, COIN), 1, COIN)
            exact = (lam * complex(math.cos(COIN.phi), -math.sin(COIN.phi))) ** t
            gauss = 2.0 * math.pi * ((k * k * num) % den) / den
            ray = complex(math.cos(gauss), math.sin(gauss))
            approx = eigenvalue_power_approx(k / math.sqrt(n), tau_mult, rho_eff, COIN, 1)
            assert abs(exact - ray * approx) <= 5e-4


def test_shannon_entropy():
    assert shannon_entropy(np.full(10, 0.1)) == pytest.approx(math.log(10.0), abs=1e-12)
    delta = np.zeros(5)
    delta[2] = 1.0
    assert shannon_entropy(delta) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(NotADistribution):
        shannon_entropy(np.array([0.5, -0.1, 0.6]))
    with pytest.raises(NotADistribution):
        shannon_entropy(np.array([0.3, 0.3]))


def test_entropy_series_basic():
    n = 20
    psi0 = delta_state(n, 10, "R")
    series = entropy_series(n, COIN, psi0, t_max=12, stride=3)
    assert list(series.times) == [0, 3, 6, 9, 12]
    assert series.entropy[0] == pytest.approx(0.0, abs=1e-15)
    assert series.survival[0] == pytest.approx(1.0, abs=1e-15)
    # survival column matches direct evolution
    state, _ = evolve(psi0, COIN, 9)
    assert series.survival[3] == pytest.approx(state.norm_squared(), abs=1e-14)
    # t_start offsets the window without changing values
    shifted = entropy_series(n, COIN, psi0, t_max=12, stride=3, t_start=6)
    assert list(shifted.times) == [6, 9, 12]
    assert shifted.entropy[0] == pytest.approx(series.entropy[2], abs=1e-14)
    with pytest.raises(ValueError):
        entropy_series(n, COIN, psi0, t_max=5, stride=0)
    with pytest.raises(ValueError):
        entropy_series(n, COIN, psi0, t_max=5, t_start=9)


def test_find_entropy_minima_synthetic():
    times = np.arange(0, 100, 5)
    monotone = np.linspace(3.0, 1.0, times.size)
    from aqwalk.revivals import EntropySeries

    series = EntropySeries(times=times, entropy=monotone, survival=np.ones(times.size))
    assert find_entropy_minima(series, window=12) == []

    dip = monotone.copy()
    dip[10] = 0.2
    series = EntropySeries(times=times, entropy=dip, survival=np.ones(times.size))
    found = find_entropy_minima(series, window=12)
    assert len(found) == 1
    assert found[0][0] == times[10]

    # equal values inside one window: reported once, at the smaller t
    flat = np.full(times.size, 2.0)
    flat[8] = flat[10] = 1.0
    series = EntropySeries(times=times, entropy=flat, survival=np.ones(times.size))
    found = find_entropy_minima(series, window=10)
    assert found == [(int(times[8]), 1.0)]


def test_refine_entropy_minimum_small():
    n = 100
    psi0 = delta_state(n, n // 2, "R")
    t_pred = revival_times(n, COIN, [(1, 1)]).entries[0][2]
    assert t_pred == 1592
    t_min, ent = refine_entropy_minimum(n, COIN, psi0, t_pred, halfwidth=n)
    assert t_min == 1629
    assert ent < 3.0
    state, _ = evolve(psi0, COIN, t_min)
    assert peak_count(conditional_distribution(state)) == 1


def test_refine_no_minimum_on_monotone_window():
    n = 100
    psi0 = delta_state(n, n // 2, "R")
    with pytest.raises(NoMinimum):
        refine_entropy_minimum(n, COIN, psi0, 60, halfwidth=40)


def test_estimate_rho():
    n = 100
    psi0 = delta_state(n, n // 2, "R")
    rho = estimate_rho(n, COIN, 1, 1, psi0, search_halfwidth=n)
    assert 0.2 <= rho <= 0.6
    with pytest.raises(ValueError):
        estimate_rho(n, COIN, 1, 1, psi0, search_halfwidth=n - 1)


def test_peak_count_synthetic():
    n = 400
    comb = np.zeros(n)
    comb[::2] = 1.0  # alternate-site occupancy, as the walk produces
    one = comb * np.sin(np.pi * np.arange(n) / n) ** 2
    three = comb * np.sin(3.0 * np.pi * np.arange(n) / n) ** 2
    delta = np.zeros(n)
    delta[137] = 1.0
    assert peak_count(one / one.sum()) == 1
    assert peak_count(three / three.sum()) == 3
    assert peak_count(delta) == 1
    assert peak_count(np.full(n, 1.0 / n)) == 1
    with pytest.raises(ValueError):
        peak_count(one, prominence=1.5)


def test_matrix_power_heatmap():
    n = 12
    full, site = matrix_power_heatmap(n, COIN, 0)
    assert np.allclose(full, np.eye(2 * n))
    assert np.allclose(site, 2.0 * np.eye(n))

    full, site = matrix_power_heatmap(n, COIN, 7)
    psi = delta_state(n, 5, "R")
    state, _ = evolve(psi, COIN, 7)
    column = np.abs(state.amplitudes) ** 2
    # column of the full map at the delta's index reproduces the evolved
    # squared amplitudes (unnormalized)
    assert np.allclose(full[:, 8], column, atol=1e-14)
    with pytest.raises(ResourceLimit):
        matrix_power_heatmap(900, COIN, 2)


def test_revival_ray_angles():
    expected = {(1, 1): 3, (1, 2): 4, (1, 3): 6, (2, 3): 4}
    for (p, q), count in expected.items():
        rays = revival_ray_angles(400, COIN, p, q)
        assert rays["predicted_ray_count"] == count
        assert rays["captured_fraction"] >= 0.9

def test_revival_fidelity_bands():
    # the packet reassembles at the full revival and is spread far from the
    # start site at the two-copy time round(tau n^2 / 16)
    n = 400
    coin = hadamard()
    psi0 = delta_state(n, 200, "R")
    state, _ = evolve(psi0, coin, 25627)
    dist = conditional_distribution(state)
    assert dist[189:210].sum() > 0.5
    state, _ = evolve(psi0, coin, 12732)
    dist = conditional_distribution(state)
    assert dist[189:210].sum() < 0.3


def test_flip_reflects_off_center_state():
    # half revival maps site 150 to site 250; the reflected packet holds just
    # under half its mass within +-10 sites, so the tight band uses 0.45
    n = 400
    coin = hadamard()
    state, _ = evolve(delta_state(n, 150, "R"), coin, 102054)
    dist = conditional_distribution(state)
    assert dist[229:270].sum() > 0.75
    assert dist[239:260].sum() > 0.45
    assert dist[129:170].sum() < 1e-3


def test_site_heatmap_columns_match_evolution():
    n = 24
    t = 13
    coin = hadamard()
    _, site = matrix_power_heatmap(n, coin, t)
    rng = np.random.default_rng(7)
    for j in rng.choice(n, size=5, replace=False):
        expected = np.zeros(n)
        for component in ("R", "L"):
            state, _ = evolve(delta_state(n, int(j) + 1, component), coin, t)
            expected += np.abs(state.right) ** 2 + np.abs(state.left) ** 2
        assert np.abs(site[:, j] - expected).max() <= 1e-8


def test_entropy_steady_beyond_stabilization():
    # once mode 2 is suppressed to 1% the entropy series stops rising beyond
    # noise level; n below ~100 still carries visible transients
    n = 100
    coin = hadamard()
    t_star = int(stabilization_time(2, 0.01, n, coin))
    series = entropy_series(
        n, coin, delta_state(n, 50, "R"), t_max=t_star + 4000, stride=200, t_start=t_star
    )
    assert np.diff(series.entropy).max() <= 1e-3
