"""Phase-encoding cipher: key schedule, encoder/decoder, session operations.

Encryption pipeline: spread the message basis state into an equal
superposition, flip the sign of the key index, then flip the signs of
alternating blocks of d consecutive indices starting at the key. Exactly
half of all basis states end up inverted, so every ciphertext has a uniform
probability vector; the message lives entirely in the relative phases.
Decryption applies the same three involutions in reverse order.

Block-rule convention: index x is inverted iff floor(((x - k) mod N) / d)
is even, i.e. starting at offset k the pattern is invert d, skip d, invert
d, ... wrapping mod N. The block count r = N / d must be even and < N/2,
which is what guarantees the exact-half property (an odd r would make the
pattern wrap onto itself with first and last block adjacent and equal).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .statevector import (
    PhaseMask,
    StateVector,
    basis_state,
    phase_flip,
    probabilities,
    walsh_hadamard,
    _check_qubits,
)

# Decodes whose largest probability falls below this are rejected as
# corrupted / wrong-key rather than silently returning the argmax.
DECODE_THRESHOLD = 1.0 - 1e-6


class IntegrityError(Exception):
    """Decoded state is not a basis state (wrong key or tampered ciphertext).

    Carries the full decoded probability vector for diagnosis.
    """

    def __init__(self, message: str, probs: np.ndarray):
        super().__init__(message)
        self.probs = probs
        self.max_probability = float(probs.max())


@dataclass(frozen=True)
class Message:
    """An n-bit plaintext value."""

    n: int
    m: int

    def __post_init__(self):
        _check_qubits(self.n)
        if not 0 <= self.m < (1 << self.n):
            raise ValueError(f"message {self.m} out of range for n={self.n}")


@dataclass(frozen=True)
class KeySchedule:
    """Shared secret (k, r, d) plus the derived block inversion mask.

    r is the block count, d = N/r the block length; the mask inverts
    exactly N/2 indices and always contains k (the first inverted block
    starts there).
    """

    n: int
    k: int
    r: int
    d: int
    mask: PhaseMask = field(repr=False)


@dataclass(frozen=True)
class CipherText:
    """Encrypted statevector; phase-only, so its probabilities are uniform."""

    state: StateVector

    @property
    def n(self) -> int:
        return self.state.n


def _validate_r(n: int, r: int) -> None:
    dim = 1 << n
    if r < 2 or r % 2 != 0 or dim % r != 0 or r >= dim // 2:
        raise ValueError(
            f"block count r={r} invalid for n={n}: need r even, r | {dim}, 2 <= r < {dim // 2}"
        )


def block_mask(n: int, k: int, d: int) -> PhaseMask:
    """Alternating-block inversion mask: invert d, skip d, ... from k, mod N.

    Needs an even block count N/d so the wrap-around keeps the alternation
    consistent; cardinality is then exactly N/2 for every (k, d). The mask
    itself accepts any even block count >= 2; schedules are stricter (see
    derive_schedule).
    """
    _check_qubits(n)
    dim = 1 << n
    if d <= 0 or dim % d != 0:
        raise ValueError(f"block length d={d} must divide {dim}")
    r = dim // d
    if r < 2 or r % 2 != 0:
        raise ValueError(f"block count {r} (from d={d}) must be even and >= 2")
    if not 0 <= k < dim:
        raise ValueError(f"key index {k} out of range for n={n}")
    x = np.arange(dim, dtype=np.int64)
    inverted = (((x - k) % dim) // d) % 2 == 0
    return PhaseMask(n, inverted)


def derive_schedule(n: int, k: int, r_hint: int | None = None) -> KeySchedule:
    """Build the full key schedule both peers derive from the shared secret.

    Without a hint, r = 2**(1 + (popcount(k) mod (n - 2))); both sides must
    reproduce this bit-for-bit, so the rule is part of the wire contract.
    An explicit r_hint overrides the derivation but is validated against the
    same constraints. Below n = 4 the constraint set is degenerate, so a
    valid r_hint is required there (only r = 2 at n = 3 qualifies).
    """
    _check_qubits(n)
    if not 0 <= k < (1 << n):
        raise ValueError(f"key index {k} out of range for n={n}")
    if r_hint is not None:
        _validate_r(n, r_hint)
        r = r_hint
    else:
        if n < 4:
            raise ValueError(f"n={n} needs an explicit block count (no derivation rule below n=4)")
        r = 1 << (1 + (int(k).bit_count() % (n - 2)))
    d = (1 << n) // r
    return KeySchedule(n=n, k=k, r=r, d=d, mask=block_mask(n, k, d))


def key_phase_inversion(state: StateVector, schedule: KeySchedule) -> StateVector:
    """Flip the sign of the single key-index amplitude, in place."""
    if schedule.n != state.n:
        raise ValueError(f"schedule has n={schedule.n} but state has n={state.n}")
    state.amps[schedule.k] *= -1.0
    return state


def multi_phase_inversion(state: StateVector, schedule: KeySchedule) -> StateVector:
    """Apply the schedule's block mask, in place.

    Identical to composing single-index sign flips over every masked index;
    self-inverse like any diagonal +-1 unitary.
    """
    if schedule.n != state.n:
        raise ValueError(f"schedule has n={schedule.n} but state has n={state.n}")
    return phase_flip(state, schedule.mask)


def encrypt(message: Message, schedule: KeySchedule) -> CipherText:
    """Encode a message into relative phases under the schedule."""
    if message.n != schedule.n:
        raise ValueError(f"message has n={message.n} but schedule has n={schedule.n}")
    state = walsh_hadamard(basis_state(message.n, message.m))
    key_phase_inversion(state, schedule)
    multi_phase_inversion(state, schedule)
    return CipherText(state)


def decrypt(ciphertext: CipherText, schedule: KeySchedule) -> Message:
    """Invert the pipeline and read the message index back out.

    Works on a copy; the ciphertext is left intact. Raises IntegrityError
    when the decoded state is not a basis state, i.e. its largest
    probability is below 1 - 1e-6 (wrong key, corrupted amplitudes).
    """
    if ciphertext.n != schedule.n:
        raise ValueError(f"ciphertext has n={ciphertext.n} but schedule has n={schedule.n}")
    state = ciphertext.state.copy()
    multi_phase_inversion(state, schedule)
    key_phase_inversion(state, schedule)
    walsh_hadamard(state)
    probs = probabilities(state)
    winner = int(probs.argmax())
    if probs[winner] < DECODE_THRESHOLD:
        raise IntegrityError(
            f"decoded state is not a basis state (max probability {probs[winner]:.6g})",
            probs,
        )
    return Message(schedule.n, winner)


def authenticate(identity: Message, received: CipherText, schedule: KeySchedule) -> bool:
    """True iff the received ciphertext decodes cleanly to the claimed identity.

    Any tamper above the decode tolerance, or a mismatched key, yields False.
    """
    try:
        return decrypt(received, schedule) == identity
    except IntegrityError:
        return False


def rekey(new_key: Message, schedule: KeySchedule) -> tuple[CipherText, KeySchedule]:
    """Encrypt a fresh key under the current schedule and derive its successor.

    The receiving side decrypts the ciphertext and derives the identical
    successor schedule from the recovered value alone.
    """
    if new_key.n != schedule.n:
        raise ValueError(f"new key has n={new_key.n} but schedule has n={schedule.n}")
    ct = encrypt(new_key, schedule)
    return ct, derive_schedule(schedule.n, new_key.m)
