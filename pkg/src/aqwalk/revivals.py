"""Fractional revival detection: schedules, entropy scans, heat maps, peaks.

Approximate revivals of the absorbing walk occur near times
t = tau n^2 p / (8 q) with tau = 4/(pi y) and small coprime p, q, up to a
linear-in-n shift rho n found empirically by entropy minimization.  At such a
time the conditional position distribution splits into q shifted copies of
the initial packet, and the matrix power Q^t is close to a signed permutation
of diagonal (full revival) or anti-diagonal (flip) shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coin import CoinParameters
from .errors import NoMinimum, NotADistribution, ResourceLimit
from .walk1d import WalkState1D, apply_step, conditional_distribution, dense_operator

_DIST_TOL = 1e-9
_DEFAULT_DENSE_CAP = 1600


def tau(coin: CoinParameters) -> float:
    """Revival timescale constant 4 / (pi y)."""
    return 4.0 / (math.pi * coin.y)


@dataclass
class RevivalSchedule:
    """Predicted revival times on the tau n^2 p/(8q) grid."""

    n: int
    coin: CoinParameters
    tau: float
    entries: list[tuple[int, int, int]] = field(default_factory=list)
    rho_correction: float | None = None


def revival_times(
    n: int,
    coin: CoinParameters,
    fractions: list[tuple[int, int]],
    rho: float | None = None,
) -> RevivalSchedule:
    """Predicted times t = round(tau n^2 p/(8q) + rho n) for coprime (p, q)."""
    t_const = tau(coin)
    rho_val = 0.0 if rho is None else rho
    entries = []
    for p, q in fractions:
        if p < 1 or q < 1 or math.gcd(p, q) != 1:
            raise ValueError(f"(p, q) = ({p}, {q}) must be positive and coprime")
        t_pred = round(t_const * n * n * p / (8.0 * q) + rho_val * n)
        entries.append((p, q, int(t_pred)))
    return RevivalSchedule(n=n, coin=coin, tau=t_const, entries=entries, rho_correction=rho)


def eigenvalue_power_approx(
    beta: float, tau_mult: float, rho: float, coin: CoinParameters, s: int
) -> complex:
    """Asymptotic value of (lambda e^{-s i phi})^t at t = tau_mult n^2 + rho n.

    With x = pi beta the modulus factor is exp(-x^2 y^2 tau_mult) and the
    phase winds as (x^2 y / 2)(rho - x^2 tau_mult (3y^2 + 1)/12).
    """
    x = math.pi * beta
    y = coin.y
    modulus = math.exp(-(x**2) * y**2 * tau_mult)
    phase = (x**2 * y / 2.0) * (rho - x**2 * tau_mult * (3.0 * y**2 + 1.0) / 12.0)
    return modulus * complex(math.cos(phase), s * math.sin(phase))


def shannon_entropy(dist: np.ndarray) -> float:
    """Natural-log Shannon entropy of a probability vector."""
    dist = np.asarray(dist, dtype=float)
    if dist.min(initial=0.0) < -_DIST_TOL:
        raise NotADistribution("negative entries")
    total = float(dist.sum())
    if abs(total - 1.0) > _DIST_TOL:
        raise NotADistribution(f"entries sum to {total!r}, expected 1")
    positive = dist[dist > 0.0]
    return float(-(positive * np.log(positive)).sum())


@dataclass
class EntropySeries:
    """Sampled entropy of the conditional site distribution over time."""

    times: np.ndarray
    entropy: np.ndarray
    survival: np.ndarray


def entropy_series(
    n: int,
    coin: CoinParameters,
    psi0: WalkState1D,
    t_max: int,
    stride: int = 1,
    t_start: int = 0,
) -> EntropySeries:
    """Evolve psi0 and record entropy and survival every ``stride`` steps.

    Sampling starts at ``t_start`` (the state is evolved there without
    recording first), which keeps long-time window scans cheap.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if t_max < t_start:
        raise ValueError("t_max must be >= t_start")
    state = psi0.copy()
    for _ in range(t_start):
        state, _, _ = apply_step(state, coin)
    times = []
    entropies = []
    survivals = []
    t = t_start
    while True:
        times.append(t)
        entropies.append(shannon_entropy(conditional_distribution(state)))
        survivals.append(state.norm_squared())
        if t + stride > t_max:
            break
        for _ in range(stride):
            state, _, _ = apply_step(state, coin)
        t += stride
    return EntropySeries(
        times=np.array(times, dtype=int),
        entropy=np.array(entropies, dtype=float),
        survival=np.array(survivals, dtype=float),
    )


def find_entropy_minima(
    series: EntropySeries, window: int
) -> list[tuple[int, float]]:
    """Times where entropy is the strict minimum of [t - window, t + window].

    Ties break toward smaller t.  Window endpoints are in step units and are
    mapped onto the sampled grid.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    times = series.times
    ent = series.entropy
    out = []
    for i in range(len(times)):
        lo = np.searchsorted(times, times[i] - window, side="left")
        hi = np.searchsorted(times, times[i] + window, side="right")
        if hi - lo < 2:
            continue
        seg = ent[lo:hi]
        best = seg.min()
        if ent[i] == best and lo + int(np.argmin(seg)) == i:
            # interior minimum only: skip window edges of the whole series
            if i != 0 and i != len(times) - 1:
                out.append((int(times[i]), float(ent[i])))
    return out


def refine_entropy_minimum(
    n: int,
    coin: CoinParameters,
    psi0: WalkState1D,
    t_center: int,
    halfwidth: int,
    coarse_stride: int = 16,
) -> tuple[int, float]:
    """Locate the entropy-minimizing time within t_center +- halfwidth.

    Coarse scan with the given stride, then a stride-1 scan in a +-2*stride
    neighborhood of the coarse best.

    Raises
    ------
    NoMinimum
        If the best time sits on the window boundary (no interior minimum).
    """
    lo = max(0, t_center - halfwidth)
    hi = t_center + halfwidth
    coarse = entropy_series(n, coin, psi0, t_max=hi, stride=coarse_stride, t_start=lo)
    i = int(np.argmin(coarse.entropy))
    t_best = int(coarse.times[i])
    fine_lo = max(lo, t_best - 2 * coarse_stride)
    fine_hi = min(hi, t_best + 2 * coarse_stride)
    fine = entropy_series(n, coin, psi0, t_max=fine_hi, stride=1, t_start=fine_lo)
    j = int(np.argmin(fine.entropy))
    t_min = int(fine.times[j])
    if t_min <= lo or t_min >= hi:
        raise NoMinimum(f"entropy decreases toward the window edge at t={t_min}")
    return t_min, float(fine.entropy[j])


def estimate_rho(
    n: int,
    coin: CoinParameters,
    p: int,
    q: int,
    psi0: WalkState1D,
    search_halfwidth: int,
) -> float:
    """Empirical linear correction rho = (t_min - round(tau n^2 p/(8q))) / n."""
    if search_halfwidth < n:
        raise ValueError("search_halfwidth must be >= n")
    t_pred = revival_times(n, coin, [(p, q)]).entries[0][2]
    t_min, _ = refine_entropy_minimum(n, coin, psi0, t_pred, search_halfwidth)
    return (t_min - t_pred) / n


def matrix_power_heatmap(
    n: int,
    coin: CoinParameters,
    t: int,
    dense_cap: int = _DEFAULT_DENSE_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise squared magnitudes of Q_n^t, full and site-aggregated.

    The power is computed by repeated squaring on the dense operator.

    Raises
    ------
    ResourceLimit
        If 2n exceeds ``dense_cap``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if 2 * n > dense_cap:
        raise ResourceLimit(f"2n = {2 * n} exceeds dense cap {dense_cap}")
    q_power = np.linalg.matrix_power(dense_operator(n, coin), t)
    full = np.abs(q_power) ** 2
    site = full.reshape(n, 2, n, 2).sum(axis=(1, 3))
    return full, site


def peak_count(
    dist: np.ndarray,
    prominence: float = 0.25,
    width: int = 5,
    min_separation: int | None = None,
) -> int:
    """Number of distinct peaks above prominence * max after smoothing.

    The distribution is smoothed by a centered moving average of ``width``
    sites; sites above the prominence threshold are grouped into peaks, with
    groups closer than ``min_separation`` (default: one twentieth of the
    lattice) merged.  Grouping rather than literal local-maximum counting is
    required because the walk populates alternate sites only, which makes
    every occupied site a local maximum at any smoothing width.
    """
    if not 0.0 < prominence < 1.0:
        raise ValueError("prominence must be in (0, 1)")
    dist = np.asarray(dist, dtype=float)
    if min_separation is None:
        min_separation = max(1, dist.size // 20)
    kernel = np.ones(width) / width
    smooth = np.convolve(dist, kernel, mode="same")
    peak_level = smooth.max()
    if peak_level <= 0.0:
        return 0
    above = np.flatnonzero(smooth > prominence * peak_level)
    if above.size == 0:
        return 0
    return int(1 + np.sum(np.diff(above) > min_separation))


def revival_ray_angles(
    n: int,
    coin: CoinParameters,
    p: int,
    q: int,
    k_max: int | None = None,
    bin_degrees: float = 2.0,
) -> dict:
    """Phase-alignment data for the revival at t = round(tau n^2 p/(8q)).

    For each mode k the exact power (lambda_k e^{-i phi})^t is computed from
    the solved eigenvalue; after removing the modulus the phases should
    cluster on a bounded set of rays whose count equals the number of
    distinct residues k^2 p' mod q' for the reduced fraction
    p'/q' = p/(8q).  Returns the angles, the per-mode weights, the predicted
    ray count, and the fraction of weight captured by the predicted rays
    within ``bin_degrees``.

    The default mode cutoff keeps the quartic phase error below one bin:
    t (pi k)^4 y (3y^2+1) / (24 n^4) <= bin half-width.
    """
    from .spectrum import lambda_of_theta, solve_theta

    t = revival_times(n, coin, [(p, q)]).entries[0][2]
    if k_max is None:
        half_bin = math.radians(bin_degrees) / 2.0
        limit = 24.0 * n**4 * half_bin / (t * math.pi**4 * coin.y * (3.0 * coin.y**2 + 1.0))
        k_max = max(1, int(limit**0.25))
    num = p
    den = 8 * q
    g = math.gcd(num, den)
    num //= g
    den //= g
    predicted_rays = len({(k * k * num) % den for k in range(den)})
    expected = np.array(
        [2.0 * math.pi * ((k * k * num) % den) / den for k in range(1, k_max + 1)]
    )
    angles = []
    weights = []
    for k in range(1, k_max + 1):
        theta = solve_theta(k, n, 1, coin)
        lam = lambda_of_theta(theta, 1, coin)
        power = (lam * complex(math.cos(coin.phi), -math.sin(coin.phi))) ** t
        angles.append(math.atan2(power.imag, power.real) % (2.0 * math.pi))
        weights.append(abs(power))
    angles = np.array(angles)
    weights = np.array(weights)
    ray_angles = np.array(sorted({(a % (2.0 * math.pi)) for a in expected}))
    half_bin = math.radians(bin_degrees) / 2.0
    captured = 0.0
    for ang, w in zip(angles, weights):
        delta = np.abs((ang - ray_angles + math.pi) % (2.0 * math.pi) - math.pi)
        if delta.min() <= half_bin:
            captured += w
    total = float(weights.sum())
    return {
        "t": t,
        "k_max": k_max,
        "angles": angles,
        "weights": weights,
        "predicted_ray_count": predicted_rays,
        "captured_fraction": captured / total if total > 0 else 0.0,
    }
