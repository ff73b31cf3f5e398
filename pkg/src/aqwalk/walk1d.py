"""The 1D absorbing walk: state representation, stepping, absorption accounting.

Sites are numbered 1..n.  Each site carries a two-component amplitude
(psi_R, psi_L), stored interleaved: entry 2j-2 is psi_R(j), entry 2j-1 is
psi_L(j).  One step sends site j the combination U+ psi_{j-1} + U- psi_{j+1}
with U+ = [[a, b], [0, 0]], U- = [[0, 0], [-conj(b), conj(a)]] and virtual
zero sites at 0 and n+1.  Amplitude that would shift past either edge is
removed and accounted as absorbed probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coin import CoinParameters
from .errors import NoConvergence, VanishedState

_UNDERFLOW = 1e-300


@dataclass
class WalkState1D:
    """Length-2n amplitude vector over n sites, interleaved (R, L) per site."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2 * self.n,):
            raise ValueError(f"expected shape ({2 * self.n},), got {self.amplitudes.shape}")

    @property
    def right(self) -> np.ndarray:
        """View of the psi_R components, index j-1 for site j."""
        return self.amplitudes[0::2]

    @property
    def left(self) -> np.ndarray:
        """View of the psi_L components, index j-1 for site j."""
        return self.amplitudes[1::2]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "WalkState1D":
        return WalkState1D(self.n, self.amplitudes.copy())


def delta_state(n: int, site: int, component: str = "R") -> WalkState1D:
    """Unit state concentrated at one site (1-based) in one coin component."""
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")
    if component not in ("R", "L"):
        raise ValueError("component must be 'R' or 'L'")
    amp = np.zeros(2 * n, dtype=complex)
    amp[2 * (site - 1) + (0 if component == "R" else 1)] = 1.0
    return WalkState1D(n, amp)


@dataclass
class AbsorptionRecord:
    """Cumulative absorbed probability at each edge, optionally per step."""

    left_total: float = 0.0
    right_total: float = 0.0
    per_step: list[tuple[int, float, float]] | None = None


def apply_step(
    state: WalkState1D, coin: CoinParameters
) -> tuple[WalkState1D, float, float]:
    """One application of the walk operator.

    Returns the new state plus the squared amplitude removed at the left and
    right edges this step.
    """
    if state.n < 2:
        raise ValueError("apply_step requires n >= 2")
    a, b = coin.a, coin.b
    r = state.right
    l = state.left
    # coined components before the shift: cr moves right, cl moves left
    cr = a * r + b * l
    cl = -np.conj(b) * r + np.conj(a) * l
    new = np.zeros_like(state.amplitudes)
    new[0::2][1:] = cr[:-1]
    new[1::2][:-1] = cl[1:]
    left_increment = float(abs(cl[0]) ** 2)
    right_increment = float(abs(cr[-1]) ** 2)
    return WalkState1D(state.n, new), left_increment, right_increment


def evolve(
    state: WalkState1D,
    coin: CoinParameters,
    t: int,
    record: bool = False,
) -> tuple[WalkState1D, AbsorptionRecord]:
    """Apply t steps, accumulating absorbed probability."""
    if t < 0:
        raise ValueError("t must be >= 0")
    rec = AbsorptionRecord(per_step=[] if record else None)
    current = state.copy()
    for step_index in range(1, t + 1):
        current, left_inc, right_inc = apply_step(current, coin)
        rec.left_total += left_inc
        rec.right_total += right_inc
        if record:
            rec.per_step.append((step_index, left_inc, right_inc))
    return current, rec


def conditional_distribution(state: WalkState1D) -> np.ndarray:
    """Site probabilities conditioned on survival: |psi(j)|^2 / ||psi||^2."""
    weights = np.abs(state.right) ** 2 + np.abs(state.left) ** 2
    total = float(weights.sum())
    if total <= _UNDERFLOW:
        raise VanishedState(f"squared norm {total!r} underflowed")
    return weights / total


def absorption_probability(
    interior_size: int,
    coin: CoinParameters,
    tol: float = 1e-10,
    step_cap: int = 10_000_000,
) -> float:
    """Left-edge absorption probability for a walker released at site 1.

    The walker starts in the R component at the leftmost interior site of a
    lattice with ``interior_size`` live sites and is evolved until the
    surviving squared norm drops below ``tol``.
    """
    if interior_size < 1:
        raise ValueError("interior_size must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if interior_size == 1:
        # single live site: both coined components exit on the first step
        return abs(coin.b) ** 2
    state = delta_state(interior_size, 1, "R")
    left_total = 0.0
    for _ in range(step_cap):
        state, left_inc, _right_inc = apply_step(state, coin)
        left_total += left_inc
        if state.norm_squared() < tol:
            return left_total
    raise NoConvergence(
        f"residual norm above {tol} after {step_cap} steps (interior_size={interior_size})"
    )


def dense_operator(n: int, coin: CoinParameters) -> np.ndarray:
    """Explicit 2n x 2n matrix of the absorbing walk operator."""
    a, b = coin.a, coin.b
    u_plus = np.array([[a, b], [0.0, 0.0]], dtype=complex)
    u_minus = np.array([[0.0, 0.0], [-np.conj(b), np.conj(a)]], dtype=complex)
    q = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        if j + 1 < n:
            q[2 * (j + 1) : 2 * (j + 1) + 2, 2 * j : 2 * j + 2] = u_plus
        if j - 1 >= 0:
            q[2 * (j - 1) : 2 * (j - 1) + 2, 2 * j : 2 * j + 2] = u_minus
    return q
