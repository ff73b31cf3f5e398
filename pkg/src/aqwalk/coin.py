"""Coin parameters for the 1D walk.

The walk is driven by a 2x2 unitary with entries a, b satisfying
|a|^2 + |b|^2 = 1.  Two derived constants appear throughout the spectral
formulas: the ratio y = |a|/|b| and the angle phi with
e^{i phi} = |a| + i|b|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateCoin, NormViolation

_NORM_TOL = 1e-9
_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class CoinParameters:
    """Validated coin amplitudes with derived constants.

    Attributes
    ----------
    a, b : complex
        Coin amplitudes, renormalized so |a|^2 + |b|^2 = 1 at working
        precision.
    y : float
        |a| / |b|.
    phi : float
        Angle in (0, pi/2) with cos(phi) = |a| and sin(phi) = |b|.
    """

    a: complex
    b: complex
    y: float
    phi: float

    @property
    def abs_a(self) -> float:
        return abs(self.a)

    @property
    def abs_b(self) -> float:
        return abs(self.b)


def build_coin(a: complex, b: complex) -> CoinParameters:
    """Validate (a, b) and derive y, phi.

    Raises
    ------
    NormViolation
        If |a|^2 + |b|^2 deviates from 1 by more than 1e-9.
    DegenerateCoin
        If |a| or |b| is below 1e-9 (the walk would decouple).
    """
    a = complex(a)
    b = complex(b)
    norm_sq = abs(a) ** 2 + abs(b) ** 2
    if abs(norm_sq - 1.0) > _NORM_TOL:
        raise NormViolation(f"|a|^2 + |b|^2 = {norm_sq!r}, expected 1")
    if abs(a) < _DEGENERATE_TOL or abs(b) < _DEGENERATE_TOL:
        raise DegenerateCoin("coin requires both |a| > 0 and |b| > 0")
    scale = 1.0 / math.sqrt(norm_sq)
    a *= scale
    b *= scale
    return CoinParameters(a=a, b=b, y=abs(a) / abs(b), phi=math.atan2(abs(b), abs(a)))


def hadamard() -> CoinParameters:
    """The balanced coin a = b = 1/sqrt(2) (y = 1, phi = pi/4)."""
    r = 1.0 / math.sqrt(2.0)
    return build_coin(r, r)
