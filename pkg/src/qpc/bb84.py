"""Desk-scale BB84 prepare-and-measure simulation.

Supplies the pre-established shared secret the cipher needs. Alice encodes
random bits in random rectilinear/diagonal bases; Bob measures in his own
random bases; positions where the bases agree form the sifted key. An
optional intercept-resend eavesdropper measures every qubit in a random
basis and forwards the outcome, which induces ~25% errors on the sifted
key. A fraction of sifted bits is sacrificed to estimate that error rate;
at or above the 0.11 threshold the exchange aborts.

The channel itself is noiseless: with no eavesdropper the sifted keys agree
exactly. No error correction or privacy amplification is modelled. Runs are
pure functions of (length, eve, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import _check_qubits

ABORT_QBER = 0.11
MIN_LENGTH = 64
DEFAULT_SAMPLE_FRACTION = 0.2


class QkdAbortError(Exception):
    """Estimated error rate at or above the abort threshold (presumed eavesdropping)."""

    def __init__(self, qber: float):
        super().__init__(f"QBER {qber:.4f} >= abort threshold {ABORT_QBER}")
        self.qber = qber


@dataclass
class Bb84Session:
    """Full transcript of one simulated exchange.

    sifted_key holds Alice's bits at the base-agreeing positions,
    bob_sifted Bob's; key_bits is the part of sifted_key left after the
    error-estimation sample was sacrificed, and is what key extraction
    consumes.
    """

    seed: int | None
    length: int
    eve_present: bool
    alice_bits: np.ndarray
    alice_bases: np.ndarray
    bob_bases: np.ndarray
    bob_bits: np.ndarray
    sifted_key: np.ndarray
    bob_sifted: np.ndarray
    qber_sample_fraction: float
    qber: float
    key_bits: np.ndarray


def run_bb84(
    length: int,
    eve: bool = False,
    seed: int | None = None,
    qber_sample_fraction: float = DEFAULT_SAMPLE_FRACTION,
) -> Bb84Session:
    """Simulate one prepare/measure exchange of `length` qubits.

    Deterministic for a given seed. Raises ValueError when the run is too
    short to sacrifice a non-empty error sample while keeping key bits.
    """
    if length < MIN_LENGTH:
        raise ValueError(f"length must be >= {MIN_LENGTH}, got {length}")
    if not 0.0 < qber_sample_fraction < 1.0:
        raise ValueError(f"sample fraction must be in (0, 1), got {qber_sample_fraction}")

    rng = np.random.default_rng(seed)
    alice_bits = rng.integers(0, 2, length, dtype=np.uint8)
    alice_bases = rng.integers(0, 2, length, dtype=np.uint8)
    bob_bases = rng.integers(0, 2, length, dtype=np.uint8)

    if eve:
        eve_bases = rng.integers(0, 2, length, dtype=np.uint8)
        eve_random = rng.integers(0, 2, length, dtype=np.uint8)
        # Wrong-basis measurements collapse to a uniformly random outcome;
        # Eve resends her outcome in her own basis.
        eve_bits = np.where(eve_bases == alice_bases, alice_bits, eve_random)
        send_bits, send_bases = eve_bits, eve_bases
    else:
        send_bits, send_bases = alice_bits, alice_bases

    bob_random = rng.integers(0, 2, length, dtype=np.uint8)
    bob_bits = np.where(bob_bases == send_bases, send_bits, bob_random)

    agree = alice_bases == bob_bases
    sifted_alice = alice_bits[agree]
    sifted_bob = bob_bits[agree]

    sample_size = int(qber_sample_fraction * sifted_alice.size)
    if sample_size < 1 or sample_size >= sifted_alice.size:
        raise ValueError(
            f"sifted key too short ({sifted_alice.size} bits) for a "
            f"{qber_sample_fraction:.0%} error sample"
        )
    sample_idx = rng.choice(sifted_alice.size, size=sample_size, replace=False)
    qber = float(np.mean(sifted_alice[sample_idx] != sifted_bob[sample_idx]))

    keep = np.ones(sifted_alice.size, dtype=bool)
    keep[sample_idx] = False

    return Bb84Session(
        seed=seed,
        length=length,
        eve_present=eve,
        alice_bits=alice_bits,
        alice_bases=alice_bases,
        bob_bases=bob_bases,
        bob_bits=bob_bits,
        sifted_key=sifted_alice,
        bob_sifted=sifted_bob,
        qber_sample_fraction=qber_sample_fraction,
        qber=qber,
        key_bits=sifted_alice[keep],
    )


def extract_key(session: Bb84Session, n: int) -> tuple[int, np.ndarray]:
    """Pack the first n post-sample sifted bits into a key index.

    Bit i of the key is bit i of the stream (least significant first).
    Returns the key and the remaining bits for future rekey seeding.
    Aborts when the session's estimated error rate is at or above 0.11.
    """
    _check_qubits(n)
    if session.qber >= ABORT_QBER:
        raise QkdAbortError(session.qber)
    bits = session.key_bits
    if bits.size < n:
        raise ValueError(f"need {n} key bits but only {bits.size} available")
    k = 0
    for i in range(n):
        k |= int(bits[i]) << i
    return k, bits[n:]
