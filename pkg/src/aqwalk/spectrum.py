"""Exact and asymptotic eigensystem of the 1D absorbing walk operator.

Nonzero eigenvalues come in two families clustering near e^{+i phi} and
e^{-i phi}; each family is parametrized by a complex angle theta with
lambda = |a| cos(theta) +- i sqrt(1 - |a|^2 cos^2(theta)) where theta solves
sin^2(n theta) = -y^2 sin^2(theta).  The split form of that equation reads
sin(n theta) = sigma i y sin(theta); the family label s used throughout this
module is the sign of Im(theta) (equivalently of Im(lambda)), and the root
for index k belongs to the split equation with sigma = (-1)^k s.  Roots are
found by Newton iteration from regime-selected series seeds.

The remaining half of the spectrum is generated by the evenness of the
characteristic polynomial: the index-(n-k) eigenvalue of family s equals
-conj(lambda_{k,s}), and theta_{n-k,s} = pi - conj(theta_{k,s}).  The
eigenvalue 0 has multiplicity 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .coin import CoinParameters
from .errors import BranchAmbiguity, NewtonDivergence, NumericalBlowup
from .walk1d import WalkState1D, apply_step

_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 50
_CIRCLE_TOL = 1e-12
_REAL_THETA_TOL = 1e-15
_SEPARATION_TOL = 1e-9
_RESCALE_LIMIT = 1e150


# ---------------------------------------------------------------------------
# seeds and asymptotic expansions


def select_regime(k: int, n: int) -> str:
    """Expansion regime for index k: fixed-k, beta, or alpha."""
    if k**3 <= n:
        return "fixed-k"
    if k**3 <= n * n:
        return "beta"
    return "alpha"


def theta_seed(
    k: int, n: int, s: int, coin: CoinParameters, regime: str | None = None
) -> complex:
    """Truncated series for the family-s root with index k.

    ``regime`` is one of "fixed-k", "beta", "alpha", or None for automatic
    selection by the size of k relative to n.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}")
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    if regime is None:
        regime = select_regime(k, n)
    y = coin.y
    if regime == "fixed-k":
        x = math.pi * k
        return (
            x / n
            + s * 1j * x * y / n**2
            - x * y**2 / n**3
            - s * 1j * x * y * (y**2 + x**2 * (1 + y**2) / 6.0) / n**4
        )
    if regime == "beta":
        x = math.pi * k / math.sqrt(n)
        rn = math.sqrt(n)
        return (
            x / rn
            + s * 1j * x * y / rn**3
            + s * 1j * x * y * (s * 1j * y - x**2 * (1 + y**2) / 6.0) / rn**5
        )
    if regime == "alpha":
        alpha = k / n
        return math.pi * alpha + s * 1j * math.asinh(y * math.sin(math.pi * alpha)) / n
    raise ValueError(f"unknown regime {regime!r}")


def lambda_asymptotic(
    k_or_fraction: float,
    n: int,
    s: int,
    coin: CoinParameters,
    regime: str | None = None,
) -> complex:
    """Truncated eigenvalue expansion for the requested regime.

    ``k_or_fraction`` is the integer index k for "fixed-k" and "beta", or the
    fraction alpha = k/n for "alpha" (an integer is divided by n there).
    """
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    y = coin.y
    if regime is None:
        k = int(round(k_or_fraction))
        regime = select_regime(k, n)
    if regime == "fixed-k":
        x = math.pi * k_or_fraction
        unit = cmath.exp(s * 1j * coin.phi)
        return unit * (
            1.0
            + s * 1j * x**2 * y / (2.0 * n**2)
            - x**2 * y**2 / n**3
            - (x**2 * y / n**4)
            * (s * 1.5j * y**2 + x**2 * (3.0 * y + s * 1j * (3.0 * y**2 + 1.0)) / 24.0)
        )
    if regime == "beta":
        x = math.pi * k_or_fraction / math.sqrt(n)
        unit = cmath.exp(s * 1j * coin.phi)
        return unit * (
            1.0
            + s * 1j * x**2 * y / (2.0 * n)
            - (x**2 * y / n**2)
            * (y + x**2 * (3.0 * y + s * 1j * (3.0 * y**2 + 1.0)) / 24.0)
        )
    if regime == "alpha":
        alpha = k_or_fraction / n if k_or_fraction >= 1 else float(k_or_fraction)
        sin_pa = math.sin(math.pi * alpha)
        root = math.sqrt(1.0 - coin.abs_a**2 * math.cos(math.pi * alpha) ** 2)
        unit = coin.abs_a * math.cos(math.pi * alpha) + s * 1j * root
        return unit * (1.0 - (coin.abs_a * sin_pa / root) * math.asinh(y * sin_pa) / n)
    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# root solving


def _split_equation(theta: complex, n: int, y: float, sigma: int) -> tuple[complex, complex]:
    g = cmath.sin(n * theta) - sigma * 1j * y * cmath.sin(theta)
    gp = n * cmath.cos(n * theta) - sigma * 1j * y * cmath.cos(theta)
    return g, gp


def solve_theta(
    k: int, n: int, s: int, coin: CoinParameters, seed: complex | None = None
) -> complex:
    """Newton root of the split eigencondition for family s, index k.

    Damped Newton iteration on g(theta) = sin(n theta) - sigma i y sin(theta)
    with sigma = (-1)^k s, started from ``theta_seed``.  Converged when
    |g| <= 1e-12.

    Raises
    ------
    NewtonDivergence
        After 50 iterations, or when the iterate leaves 0 < Re theta < pi.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in 1..{n - 1}")
    y = coin.y
    # family s (the Im sign of theta) obeys the split equation with this sign
    sigma = (-1) ** k * s
    theta = theta_seed(k, n, s, coin) if seed is None else complex(seed)
    try:
        g, gp = _split_equation(theta, n, y, sigma)
    except OverflowError as exc:
        raise NewtonDivergence(f"seed {theta!r} overflows sin(n theta)") from exc
    for _ in range(_NEWTON_MAX_ITER):
        if abs(g) <= _NEWTON_TOL:
            return theta
        step = g / gp
        try:
            candidate = theta - step
            g_new, gp_new = _split_equation(candidate, n, y, sigma)
            damping = 0
            while abs(g_new) > abs(g) and damping < 20:
                step /= 2.0
                candidate = theta - step
                g_new, gp_new = _split_equation(candidate, n, y, sigma)
                damping += 1
        except OverflowError as exc:
            raise NewtonDivergence(
                f"overflow during iteration for k={k}, n={n}, s={s:+d}"
            ) from exc
        theta, g, gp = candidate, g_new, gp_new
        if not 0.0 < theta.real < math.pi:
            raise NewtonDivergence(
                f"iterate left the strip for k={k}, n={n}, s={s:+d}: {theta!r}"
            )
    if abs(g) <= _NEWTON_TOL:
        return theta
    raise NewtonDivergence(f"no convergence for k={k}, n={n}, s={s:+d}; |g|={abs(g):.3e}")


def lambda_of_theta(theta: complex, s: int, coin: CoinParameters) -> complex:
    """Eigenvalue from theta: the root of l^2 - 2|a| cos(theta) l + 1 = 0 inside
    the unit disk; for real theta (both roots on the circle) the arc is picked
    by the family sign s.

    Raises
    ------
    BranchAmbiguity
        If theta is not real yet both roots sit on the unit circle within
        1e-12 (no inside-disk selection possible).
    """
    theta = complex(theta)
    c = coin.abs_a * cmath.cos(theta)
    w = cmath.sqrt(1.0 - c * c)
    root_up = c + 1j * w
    root_dn = c - 1j * w
    if abs(theta.imag) <= _REAL_THETA_TOL * (1.0 + abs(theta.real)):
        return c + s * 1j * w.real
    if abs(abs(root_up) - 1.0) < _CIRCLE_TOL and abs(abs(root_dn) - 1.0) < _CIRCLE_TOL:
        raise BranchAmbiguity(f"both roots unimodular at theta={theta!r}")
    return root_up if abs(root_up) < abs(root_dn) else root_dn


# ---------------------------------------------------------------------------
# eigenvectors


@dataclass
class SpectralPoint:
    """One nonzero eigenpair: index k, family sign s, angle, eigenvalue, and
    (once an eigenvector has been constructed) its relative residual."""

    k: int
    s: int
    theta: complex
    lam: complex
    residual: float = math.nan


def eigenvector_exact(point: SpectralPoint, n: int, coin: CoinParameters) -> np.ndarray:
    """Unit eigenvector for a nonzero eigenvalue, interleaved (R, L) layout.

    Built from the scaled auxiliary sequence G_j = (conj(a) lambda)^{-j} F_j,
    which obeys a stable three-term recurrence for eigenvalue arguments; the
    site components are r_j = conj(a) b G_{j-1} / (conj(a) lambda) and
    l_j = G_j - |a|^2 G_{j-1} / (conj(a) lambda).
    """
    lam = point.lam
    if lam == 0:
        raise ValueError("eigenvector_exact requires a nonzero eigenvalue")
    a, b = coin.a, coin.b
    denom = np.conj(a) * lam
    coeff = (lam * lam + 1.0) / denom
    ratio = a / np.conj(a)
    g = np.zeros(n + 1, dtype=complex)
    g[0] = 0.0
    if n >= 1:
        g[1] = 1.0
    scale_log = 0.0
    for j in range(1, n):
        g[j + 1] = coeff * g[j] - ratio * g[j - 1]
        mag = abs(g[j + 1])
        if mag > _RESCALE_LIMIT:
            g[: j + 2] /= mag
            scale_log += math.log(mag)
    if not np.all(np.isfinite(g.view(float))):
        raise NumericalBlowup(f"eigenvector recurrence overflowed at lambda={lam!r}")
    vec = np.zeros(2 * n, dtype=complex)
    g_prev = g[:-1]
    g_cur = g[1:]
    vec[0::2] = np.conj(a) * b * g_prev / denom
    vec[1::2] = g_cur - coin.abs_a**2 * g_prev / denom
    nrm = np.linalg.norm(vec)
    if nrm == 0.0 or not np.isfinite(nrm):
        raise NumericalBlowup(f"degenerate eigenvector at lambda={lam!r}")
    return vec / nrm


def eigenvector_asymptotic(
    k: int, n: int, s: int, coin: CoinParameters, beta_grid: np.ndarray
) -> np.ndarray:
    """Two-term eigenvector expansion sampled at fractions beta = j/n.

    Returns an array of shape (len(beta_grid), 2) holding the (R, L)
    components at each beta, including the (a/|a|)^{n beta} phase factor.
    """
    beta = np.asarray(beta_grid, dtype=float)
    a, b = coin.a, coin.b
    y = coin.y
    x = math.pi * k
    phase = (a / coin.abs_a) ** (n * beta)
    lead = np.array([np.conj(a) * b, s * 1j * coin.abs_a * coin.abs_b])
    sin_term = np.sin(x * beta)
    cos_term = np.cos(x * beta)
    corr_r = np.conj(a) * b * (s * 1j * beta * y - 1.0)
    corr_l = coin.abs_a**2 * (beta - 1.0)
    out = np.empty((beta.size, 2), dtype=complex)
    out[:, 0] = phase * (lead[0] * sin_term + (x / n) * corr_r * cos_term)
    out[:, 1] = phase * (lead[1] * sin_term + (x / n) * corr_l * cos_term)
    return out


def kernel_basis(n: int, coin: CoinParameters) -> list[np.ndarray]:
    """Two independent unit vectors spanning the lambda = 0 eigenspace."""
    a, b = coin.a, coin.b
    v1 = np.zeros(2 * n, dtype=complex)
    v1[0] = b
    v1[1] = -a
    v2 = np.zeros(2 * n, dtype=complex)
    v2[-2] = np.conj(a)
    v2[-1] = np.conj(b)
    return [v1, v2]


# ---------------------------------------------------------------------------
# sector bound and stabilization


def sector_bound(n: int, coin: CoinParameters) -> tuple[float, float]:
    """Exact inner radius r(n) and half-angle phi of the containment sector.

    Every nonzero eigenvalue lies in r(n) < |lambda| < 1 with
    phi < |arg lambda| < pi - phi.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    aa = coin.abs_a
    c = ((1.0 + aa) / (1.0 - aa)) ** (1.0 / (n - 1))
    term1 = (4.0 * aa**2 - 3.0) - (4.0 * aa**2 - 1.0) * c
    inner = ((2.0 * aa + 1.0) ** 2 * c - (4.0 * aa**2 + 4.0 * aa - 1.0)) * (
        (2.0 * aa - 1.0) ** 2 * c - (4.0 * aa**2 - 4.0 * aa - 1.0)
    )
    r_sq = (term1 + math.sqrt(inner)) / (2.0 * (c - 1.0))
    return math.sqrt(r_sq), coin.phi


def sector_bound_first_order(n: int, coin: CoinParameters) -> float:
    """First-order approximation r ~ 1 - (|a|^2/n) log((1+|a|)/(1-|a|))."""
    aa = coin.abs_a
    return 1.0 - (aa**2 / n) * math.log((1.0 + aa) / (1.0 - aa))


def sector_contains(lam: complex, r: float, phi: float) -> bool:
    """Membership test for the eigenvalue sector."""
    mag = abs(lam)
    ang = abs(cmath.phase(lam))
    return r < mag < 1.0 and phi < ang < math.pi - phi


def stabilization_time(k: int, epsilon: float, n: int, coin: CoinParameters) -> float:
    """Steps after which mode k is suppressed by factor epsilon against mode 1."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must be in (0, 1]")
    return math.log(1.0 / epsilon) * n**3 / (math.pi**2 * coin.y**2 * (k * k - 1))


# ---------------------------------------------------------------------------
# full spectrum assembly


@dataclass
class SpectrumSet:
    """All 2(n-1) nonzero eigenpairs plus the zero eigenvalue (multiplicity 2)."""

    n: int
    coin: CoinParameters
    points: list[SpectralPoint] = field(default_factory=list)
    zero_multiplicity: int = 2

    def cardinality(self) -> int:
        return len(self.points) + self.zero_multiplicity

    def family(self, s: int) -> list[SpectralPoint]:
        return [p for p in self.points if p.s == s]


def _residuals(points: list[SpectralPoint], n: int, coin: CoinParameters) -> None:
    for point in points:
        vec = eigenvector_exact(point, n, coin)
        stepped, _, _ = apply_step(WalkState1D(n, vec), coin)
        point.residual = float(np.linalg.norm(stepped.amplitudes - point.lam * vec))


def full_spectrum(
    n: int, coin: CoinParameters, compute_residuals: bool = True
) -> SpectrumSet:
    """Solve the primary half of the spectrum and complete it by symmetry.

    Indices k = 1..floor(n/2) are solved by Newton for both families; the
    k' = n - k points follow from evenness of the characteristic polynomial
    as lambda' = -conj(lambda), theta' = pi - conj(theta).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    points: list[SpectralPoint] = []
    for s in (1, -1):
        solved: dict[int, complex] = {}
        for k in range(1, n // 2 + 1):
            try:
                theta = solve_theta(k, n, s, coin)
            except NewtonDivergence:
                # continuation retry from the previous index's root
                neighbor = solved.get(k - 1)
                if neighbor is None:
                    raise
                shift = math.pi / n
                theta = solve_theta(k, n, s, coin, seed=neighbor + shift)
            solved[k] = theta
            lam = lambda_of_theta(theta, s, coin)
            points.append(SpectralPoint(k=k, s=s, theta=theta, lam=lam))
            mirror_k = n - k
            if mirror_k != k:
                theta_m = math.pi - np.conj(theta)
                points.append(
                    SpectralPoint(k=mirror_k, s=s, theta=theta_m, lam=-np.conj(lam))
                )
    _check_separation(points)
    if compute_residuals:
        _residuals(points, n, coin)
    points.sort(key=lambda p: (-p.s, p.k))
    return SpectrumSet(n=n, coin=coin, points=points)


def _check_separation(points: list[SpectralPoint]) -> None:
    lams = np.array([p.lam for p in points])
    order = np.argsort(lams.real + 1e-3 * lams.imag)
    sorted_lams = lams[order]
    gaps = np.abs(np.diff(sorted_lams))
    if gaps.size and gaps.min() < _SEPARATION_TOL:
        worst = int(np.argmin(gaps))
        raise NewtonDivergence(
            "two converged eigenvalues collide: "
            f"{sorted_lams[worst]!r} and {sorted_lams[worst + 1]!r}"
        )
