"""Characteristic polynomial of the 1D walk operator.

Both evaluation routes go through the auxiliary sequence
F_m = omega_+^m - omega_-^m where omega_+- are the roots of
w^2 - (lambda^2 + 1) w + |a|^2 lambda^2 = 0.  The polynomial itself obeys the
three-term recursion p_{m+1} = (lambda^2 + 1) p_m - |a|^2 lambda^2 p_{m-1}
with p_0 = 1, p_1 = lambda^2, and has the closed form
p_n = lambda^2 [F_n - |a|^2 F_{n-1}] / F_1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coin import CoinParameters
from .errors import BranchDegenerate

# rounding at an exactly degenerate point leaves |F_1| ~ sqrt(eps) ~ 1e-8,
# and dividing by anything that small voids the 1e-9 agreement with the
# recursion, so the guard trips well above machine precision
_F1_TOL = 1e-6
_RESCALE_LIMIT = 1e150


def omega_pair(lam: complex, coin: CoinParameters) -> tuple[complex, complex]:
    """Roots omega_+- of the transfer quadratic, principal branch."""
    lam = complex(lam)
    trace = lam * lam + 1.0
    disc = np.sqrt(complex(trace * trace - 4.0 * coin.abs_a**2 * lam * lam))
    return (trace + disc) / 2.0, (trace - disc) / 2.0


def f_sequence(lam: complex, n: int, coin: CoinParameters) -> np.ndarray:
    """F_0..F_n by the three-term recurrence.

    Safe without rescaling for |lambda| <= 1 and n <= 500; the closed-form
    polynomial evaluation below carries its own overflow guard.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    lam = complex(lam)
    omega_plus, omega_minus = omega_pair(lam, coin)
    out = np.zeros(n + 1, dtype=complex)
    if n >= 1:
        out[1] = omega_plus - omega_minus
    trace = lam * lam + 1.0
    det = coin.abs_a**2 * lam * lam
    for m in range(1, n):
        out[m + 1] = trace * out[m] - det * out[m - 1]
    return out


def charpoly_eval(lam: complex, n: int, coin: CoinParameters) -> complex:
    """p_n(lambda) by the recursion p_{m+1} = (l^2+1) p_m - |a|^2 l^2 p_{m-1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    lam = complex(lam)
    p_prev = complex(1.0)
    if n == 0:
        return p_prev
    p_cur = lam * lam
    trace = lam * lam + 1.0
    det = coin.abs_a**2 * lam * lam
    for _ in range(1, n):
        p_prev, p_cur = p_cur, trace * p_cur - det * p_prev
    return p_cur


def charpoly_closed(lam: complex, n: int, coin: CoinParameters) -> complex:
    """p_n(lambda) via the closed form lambda^2 [F_n - |a|^2 F_{n-1}] / F_1.

    Raises
    ------
    BranchDegenerate
        If |F_1| is too small to divide by safely (coalescing omega
        branches); use charpoly_eval there.
    """
    if n < 1:
        raise ValueError("closed form requires n >= 1")
    lam = complex(lam)
    omega_plus, omega_minus = omega_pair(lam, coin)
    f1 = omega_plus - omega_minus
    if abs(f1) < _F1_TOL:
        raise BranchDegenerate(f"|F_1| = {abs(f1)!r} below {_F1_TOL}")
    # recurrence with periodic rescaling; the tracked exponent cancels the
    # growth of F_n against the final division
    trace = lam * lam + 1.0
    det = coin.abs_a**2 * lam * lam
    f_prev = complex(0.0)
    f_cur = f1
    scale_log = 0.0
    for _ in range(1, n):
        f_prev, f_cur = f_cur, trace * f_cur - det * f_prev
        mag = max(abs(f_prev), abs(f_cur))
        if mag > _RESCALE_LIMIT:
            f_prev /= mag
            f_cur /= mag
            scale_log += np.log(mag)
    value = lam * lam * (f_cur - coin.abs_a**2 * f_prev) / f1
    if scale_log != 0.0:
        value *= np.exp(scale_log)
    return value


@dataclass
class CharPolyEvaluation:
    """Both evaluation routes at one point, with the omega roots."""

    lam: complex
    n: int
    value_recursive: complex
    value_closed: complex
    omega_plus: complex
    omega_minus: complex


def charpoly_evaluation(lam: complex, n: int, coin: CoinParameters) -> CharPolyEvaluation:
    """Evaluate p_n(lambda) by recursion and closed form side by side."""
    omega_plus, omega_minus = omega_pair(lam, coin)
    return CharPolyEvaluation(
        lam=complex(lam),
        n=n,
        value_recursive=charpoly_eval(lam, n, coin),
        value_closed=charpoly_closed(lam, n, coin),
        omega_plus=omega_plus,
        omega_minus=omega_minus,
    )
