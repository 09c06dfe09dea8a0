"""Dense statevector representation and the three unitary kernels.

A register of n qubits is stored as 2**n complex128 amplitudes. Basis index
x runs 0..N-1 with N = 2**n; bit i of x is qubit i, qubit 0 being the least
significant bit. That convention is fixed here and used everywhere else in
the package, including the wire format.

The transform kernel never materialises an N x N matrix: it runs log N
in-place butterfly passes, so registers up to the n = 26 cap (1 GiB of
amplitudes) stay reachable. All kernels mutate their input state and return
it; callers that need the original must copy() first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 26

# Norm drift allowance is scaled by sqrt(N); single amplitudes compare at
# 1e-9 absolute.
NORM_TOL = 1e-10
AMP_TOL = 1e-9


def _check_qubits(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


@dataclass(eq=False)
class StateVector:
    """2**n complex amplitudes of an n-qubit register."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n)
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.n,):
            raise ValueError(
                f"amplitude array must have length {1 << self.n}, got shape {self.amps.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(eq=False)
class PhaseMask:
    """Selection of basis indices whose amplitude sign gets flipped.

    Stored as a dense boolean array of length 2**n (a bitset over the basis).
    """

    n: int
    inverted: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, PhaseMask):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.inverted, other.inverted))

    def __post_init__(self):
        _check_qubits(self.n)
        self.inverted = np.asarray(self.inverted, dtype=bool)
        if self.inverted.shape != (1 << self.n,):
            raise ValueError(
                f"mask must have length {1 << self.n}, got shape {self.inverted.shape}"
            )

    @classmethod
    def from_indices(cls, n: int, indices) -> "PhaseMask":
        _check_qubits(n)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= (1 << n)):
            raise ValueError(f"mask index out of range for n={n}")
        flags = np.zeros(1 << n, dtype=bool)
        flags[idx] = True
        return cls(n, flags)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.inverted)

    @property
    def count(self) -> int:
        return int(self.inverted.sum())


def basis_state(n: int, x: int) -> StateVector:
    """Prepare the computational basis state with amplitude 1 at index x."""
    _check_qubits(n)
    if not 0 <= x < (1 << n):
        raise ValueError(f"basis index {x} out of range for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(n, amps)


def uniform_state(n: int) -> StateVector:
    """Equal superposition of all basis states (all amplitudes 1/sqrt(N))."""
    _check_qubits(n)
    dim = 1 << n
    return StateVector(n, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def walsh_hadamard(state: StateVector) -> StateVector:
    """Apply the n-fold tensor-power Hadamard in place.

    On a basis input |m> the result has amplitude
    (1/sqrt(N)) * (-1)**popcount(m & x) at index x. The transform is unitary
    and its own inverse. Cost is O(N log N) via butterfly passes; no dense
    matrix is built.
    """
    a = state.amps
    dim = a.shape[0]
    h = 1
    while h < dim:
        pairs = a.reshape(-1, 2 * h)
        top = pairs[:, :h]
        bot = pairs[:, h:]
        diff = top - bot
        top += bot
        bot[:] = diff
        h *= 2
    a *= 1.0 / math.sqrt(dim)
    return state


def phase_flip(state: StateVector, mask: PhaseMask) -> StateVector:
    """Negate the amplitudes selected by the mask, in place.

    A diagonal +-1 unitary: applying the same mask twice is the identity,
    and any two masks commute.
    """
    if mask.n != state.n:
        raise ValueError(f"mask has n={mask.n} but state has n={state.n}")
    state.amps[mask.inverted] *= -1.0
    return state


def mean_inversion(state: StateVector, reference: StateVector) -> StateVector:
    """Reflect the state about a unit reference: 2<ref|state>ref - state.

    This is the inversion-about-mean operator (the diffuser of amplitude
    amplification when the reference is uniform). Norm-preserving; applying
    it twice restores the input.
    """
    if reference.n != state.n:
        raise ValueError(f"reference has n={reference.n} but state has n={state.n}")
    if abs(reference.norm() - 1.0) > AMP_TOL:
        raise ValueError("reference must be a unit vector")
    overlap = np.vdot(reference.amps, state.amps)
    state.amps *= -1.0
    state.amps += (2.0 * overlap) * reference.amps
    return state


def probabilities(state: StateVector) -> np.ndarray:
    """Per-basis-state measurement probabilities |amplitude|**2."""
    a = state.amps
    return (a.real * a.real + a.imag * a.imag)
