"""The 2D absorbing Grover walk on a rectangular box.

Cells are numbered (i, j) with i in 1..x, j in 1..y; each carries four
direction components ordered E, W, N, S for displacements (1,0), (-1,0),
(0,1), (0,-1).  One step applies the Grover coin G_4 = (1/2)J - I at every
cell, shifts each component by its displacement, then zeroes the boundary
ring (i in {1, x} or j in {1, y}); the zeroed mass is the absorbed
probability.  The live interior is therefore (x-2) by (y-2).

The operator keeps exactly 2(x-3)(y-3) unit-modulus eigenvectors: one
eigenvalue-(+1) vector per interior 2x2 plaquette, plus a checkerboard-signed
companion with eigenvalue -1 for each (every unit shift flips the checkerboard
parity, so the operator anticommutes with the parity sign and its spectrum is
symmetric under negation).  States orthogonal to both families decay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    FullyLocalized,
    NoConvergence,
    NullSpaceEmpty,
    VanishedState,
)
from .revivals import EntropySeries, shannon_entropy

_UNDERFLOW = 1e-300
_RESIDUAL_TOL = 1e-12
_ORTHO_TOL = 1e-10
_GRAM_TOL = 1e-12


def grover_coin() -> np.ndarray:
    """The 4x4 Grover coin: off-diagonal 1/2, diagonal -1/2."""
    return 0.5 * np.ones((4, 4)) - np.eye(4)


@dataclass
class GroverState2D:
    """Amplitude field of shape (4, x, y): direction, column, row."""

    x: int
    y: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (4, self.x, self.y):
            raise ValueError(
                f"expected shape (4, {self.x}, {self.y}), got {self.amplitudes.shape}"
            )

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "GroverState2D":
        return GroverState2D(self.x, self.y, self.amplitudes.copy())


_DIRECTIONS = {"E": 0, "W": 1, "N": 2, "S": 3}


def delta_state_2d(x: int, y: int, cell: tuple[int, int], direction: str = "E") -> GroverState2D:
    """Unit state at one cell (1-based) in one direction component."""
    i, j = cell
    if not (1 <= i <= x and 1 <= j <= y):
        raise ValueError(f"cell {cell} outside the {x} x {y} box")
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of E/W/N/S, got {direction!r}")
    amp = np.zeros((4, x, y), dtype=complex)
    amp[_DIRECTIONS[direction], i - 1, j - 1] = 1.0
    return GroverState2D(x, y, amp)


def centered_state_2d(x: int, y: int, direction: str = "E") -> GroverState2D:
    """Delta at the central cell ((x+1)//2, (y+1)//2), East by default."""
    return delta_state_2d(x, y, ((x + 1) // 2, (y + 1) // 2), direction)


_COIN = grover_coin()


def _step_array(amp: np.ndarray, project: bool = True) -> np.ndarray:
    """Coin, shift, and optional ring projection; trailing axes pass through."""
    coined = np.tensordot(_COIN, amp, axes=(1, 0))
    out = np.zeros_like(amp)
    out[0, 1:, :] = coined[0, :-1, :]
    out[1, :-1, :] = coined[1, 1:, :]
    out[2, :, 1:] = coined[2, :, :-1]
    out[3, :, :-1] = coined[3, :, 1:]
    if project:
        out[:, 0, :] = 0.0
        out[:, -1, :] = 0.0
        out[:, :, 0] = 0.0
        out[:, :, -1] = 0.0
    return out


def apply_step_2d(
    state: GroverState2D, project: bool = True
) -> tuple[GroverState2D, float]:
    """One walk step; returns the new state and the absorbed squared norm."""
    if state.x < 4 or state.y < 4:
        raise ValueError("box must be at least 4 x 4")
    before = state.norm_squared()
    new = _step_array(state.amplitudes, project=project)
    result = GroverState2D(state.x, state.y, new)
    return result, before - result.norm_squared()


def cell_distribution(state: GroverState2D) -> np.ndarray:
    """Conditional cell probabilities: coin components summed, renormalized."""
    weights = (np.abs(state.amplitudes) ** 2).sum(axis=0)
    total = float(weights.sum())
    if total <= _UNDERFLOW:
        raise VanishedState(f"squared norm {total!r} underflowed")
    return weights / total


# ---------------------------------------------------------------------------
# localized eigenvectors


@dataclass
class PlaquetteVector:
    """Unit eigenvector supported on one interior 2x2 cell block.

    ``anchor`` is the block's lower-left cell (1-based).  ``eigenvalue`` is +1
    for the plaquette family and -1 for its checkerboard-signed companion.
    """

    anchor: tuple[int, int]
    coords: np.ndarray
    values: np.ndarray
    eigenvalue: int = 1

    def dense(self, x: int, y: int) -> np.ndarray:
        amp = np.zeros(4 * x * y, dtype=complex)
        amp[self.coords] = self.values
        return amp.reshape(4, x, y)


def _local_stencil() -> list[tuple[int, int, int, float]]:
    """Null vector of (Q - I) restricted to one plaquette's 16 coordinates.

    Solved on a small probe box; the pattern is translation invariant, and
    every placed copy is verified globally by the caller.
    """
    size = 9
    ai = aj = 4
    coords = [(d, i, j) for d in range(4) for i in (ai, ai + 1) for j in (aj, aj + 1)]
    columns = np.zeros((4 * size * size, 16))
    basis = np.zeros((4, size, size))
    for m, (d, i, j) in enumerate(coords):
        basis[d, i, j] = 1.0
        columns[:, m] = (_step_array(basis) - basis).ravel().real
        basis[d, i, j] = 0.0
    _, singular, vh = np.linalg.svd(columns, full_matrices=False)
    if singular[-1] > 1e-10 or singular[-2] < 1e-8:
        raise NullSpaceEmpty(
            f"restricted null space not one-dimensional: tail singular values "
            f"{singular[-2:]!r}"
        )
    vec = vh[-1]
    first = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
    if first < 0:
        vec = -vec
    return [
        (d, i - ai, j - aj, float(vec[m]))
        for m, (d, i, j) in enumerate(coords)
        if abs(vec[m]) > 1e-12
    ]


def _flat_index(x: int, y: int, d: int, i: int, j: int) -> int:
    return (d * x + i) * y + j


def localized_eigenvectors(x: int, y: int) -> list[PlaquetteVector]:
    """All eigenvalue-1 plaquette vectors, one per interior 2x2 anchor.

    Anchors run over cells (2..x-2, 2..y-2) (1-based), giving
    (x-3)(y-3) vectors.  Every vector is verified globally to residual
    1e-12.

    Raises
    ------
    NullSpaceEmpty
        If construction or verification fails for an anchor.
    """
    if x < 6 or y < 6:
        raise ValueError("box must be at least 6 x 6 for interior plaquettes")
    stencil = _local_stencil()
    vectors = []
    for ai in range(1, x - 2):
        for aj in range(1, y - 2):
            coords = np.array(
                [_flat_index(x, y, d, ai + di, aj + dj) for d, di, dj, _ in stencil]
            )
            values = np.array([v for _, _, _, v in stencil], dtype=complex)
            vectors.append(
                PlaquetteVector(anchor=(ai + 1, aj + 1), coords=coords, values=values)
            )
    _verify_eigenvectors(vectors, x, y)
    return vectors


def alternating_eigenvectors(x: int, y: int) -> list[PlaquetteVector]:
    """The eigenvalue-(-1) companions: plaquette vectors with checkerboard signs."""
    parity = np.fromfunction(lambda i, j: (-1.0) ** (i + j), (x, y))
    parity_flat = np.broadcast_to(parity, (4, x, y)).ravel()
    out = []
    for vec in localized_eigenvectors(x, y):
        out.append(
            PlaquetteVector(
                anchor=vec.anchor,
                coords=vec.coords,
                values=vec.values * parity_flat[vec.coords],
                eigenvalue=-1,
            )
        )
    return out


def _verify_eigenvectors(
    vectors: list[PlaquetteVector], x: int, y: int, batch: int = 256
) -> None:
    for start in range(0, len(vectors), batch):
        chunk = vectors[start : start + batch]
        stack = np.zeros((4, x, y, len(chunk)), dtype=complex)
        flat = stack.reshape(4 * x * y, len(chunk))
        for m, vec in enumerate(chunk):
            flat[vec.coords, m] = vec.values
        stepped = _step_array(stack)
        signs = np.array([vec.eigenvalue for vec in chunk])
        residual = np.linalg.norm(
            (stepped - signs * stack).reshape(-1, len(chunk)), axis=0
        )
        if residual.max() > _RESIDUAL_TOL:
            worst = chunk[int(np.argmax(residual))]
            raise NullSpaceEmpty(
                f"eigenvector at anchor {worst.anchor} has residual {residual.max():.2e}"
            )


def _sparse_matrix(vectors: list[PlaquetteVector], x: int, y: int) -> sp.csc_matrix:
    rows = np.concatenate([vec.coords for vec in vectors])
    cols = np.concatenate(
        [np.full(vec.coords.size, m) for m, vec in enumerate(vectors)]
    )
    vals = np.concatenate([vec.values.real for vec in vectors])
    return sp.csc_matrix((vals, (rows, cols)), shape=(4 * x * y, len(vectors)))


def orthogonalize_initial(
    psi0: GroverState2D, vectors: list[PlaquetteVector]
) -> GroverState2D:
    """Remove the least-squares projection onto span(vectors), renormalized.

    The Gram matrix is sparse (only overlapping plaquettes couple) and is
    solved by conjugate gradients to tolerance 1e-12.

    Raises
    ------
    FullyLocalized
        If the residual after projection has norm below 1e-12.
    """
    if not vectors:
        raise ValueError("need at least one vector to orthogonalize against")
    x, y = psi0.x, psi0.y
    matrix = _sparse_matrix(vectors, x, y)
    gram = (matrix.T @ matrix).tocsc()
    target = psi0.amplitudes.ravel()
    rhs = matrix.T @ target

    def _cg(b: np.ndarray) -> np.ndarray:
        solution, info = spla.cg(gram, b, rtol=_GRAM_TOL, atol=0.0)
        if info != 0:
            raise NoConvergence(f"Gram conjugate-gradient solve failed (info={info})")
        return solution

    coeffs = _cg(rhs.real) + 1j * _cg(rhs.imag)
    residual = target - matrix @ coeffs
    norm = float(np.linalg.norm(residual))
    if norm < 1e-12:
        raise FullyLocalized("initial state lies in the localized span")
    residual /= norm
    overlap = np.abs(matrix.T @ residual).max()
    if overlap > _ORTHO_TOL:
        raise NoConvergence(f"projection left overlap {overlap:.2e}")
    return GroverState2D(x, y, residual.reshape(4, x, y))


# ---------------------------------------------------------------------------
# observables


def entropy_series_2d(
    x: int,
    y: int,
    phi0: GroverState2D,
    t_max: int,
    stride: int = 1,
) -> EntropySeries:
    """Entropy of the conditional cell distribution every ``stride`` steps."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    state = phi0.copy()
    times = []
    entropies = []
    survivals = []
    t = 0
    while True:
        times.append(t)
        entropies.append(shannon_entropy(cell_distribution(state).ravel()))
        survivals.append(state.norm_squared())
        if t + stride > t_max:
            break
        for _ in range(stride):
            state, _ = apply_step_2d(state)
        t += stride
    return EntropySeries(
        times=np.array(times, dtype=int),
        entropy=np.array(entropies, dtype=float),
        survival=np.array(survivals, dtype=float),
    )


def stable_distribution_2d(
    x: int,
    y: int,
    phi0: GroverState2D,
    tol: float = 1e-10,
    required_streak: int = 100,
    step_cap: int = 10_000_000,
) -> np.ndarray:
    """Limiting conditional cell distribution under renormalized stepping.

    The walk alternates between the two checkerboard parities, so consecutive
    cell distributions of a parity-pure state have disjoint supports and never
    converge; iteration therefore proceeds in two-step pairs, and convergence
    means L1 distance below ``tol`` between consecutive pair iterates for
    ``required_streak`` iterations.

    Raises
    ------
    NoConvergence
        If the streak is not reached within ``step_cap`` steps.
    """
    state = phi0.copy()
    amp = state.amplitudes.astype(complex)
    previous = _normalized_cells(amp)
    streak = 0
    steps = 0
    while steps < step_cap:
        amp = _step_array(_step_array(amp))
        steps += 2
        norm = np.linalg.norm(amp)
        if norm <= _UNDERFLOW:
            raise VanishedState("state vanished before the distribution settled")
        amp /= norm
        current = _normalized_cells(amp)
        if np.abs(current - previous).sum() < tol:
            streak += 1
            if streak >= required_streak:
                return current
        else:
            streak = 0
        previous = current
    raise NoConvergence(f"no stable distribution within {step_cap} steps")


def _normalized_cells(amp: np.ndarray) -> np.ndarray:
    weights = (np.abs(amp) ** 2).sum(axis=0)
    return weights / weights.sum()
