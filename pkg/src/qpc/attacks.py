"""Adversary harness: passive bias measurement, chosen-plaintext probes,
key search by amplitude amplification, and key-reuse sweeps.

Every scenario returns an AttackReport with a per-round series, so the
full trajectory of the probed distribution is visible, not just the end
state. The recurring probe is inversion about the mean with the uniform
superposition as reference: applied to a ciphertext it exposes how much a
single inverted index biases the distribution, and since the reflection is
an involution the probed state alternates with period two.

The per-state bias metric is the ratio of mean measured probability over
the inverted set to mean probability over its complement; total-variation
distance from uniform is reported alongside it as a scalar distribution
distinguisher.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cipher import CipherText, KeySchedule, Message, encrypt
from .statevector import (
    PhaseMask,
    basis_state,
    mean_inversion,
    probabilities,
    walsh_hadamard,
    _check_qubits,
)

SCENARIO_PASSIVE = "passive_ratio"
SCENARIO_SINGLE = "single_key_cpa"
SCENARIO_MULTI = "multi_key_cpa"
SCENARIO_GROVER = "grover"
SCENARIO_REUSE = "reuse_sweep"

GROVER_MAX_QUBITS = 16


class RoundStat(NamedTuple):
    """One row of a scenario trajectory.

    `success` is scenario-specific: probability of the key state (single-key
    CPA, key search), total mass on the inverted set (multi-key CPA), or the
    running masked-top-hit fraction (reuse sweep). `deviation` is the max
    elementwise amplitude distance from the round-0 state.
    """

    round: int
    ratio: float
    tv: float
    success: float
    deviation: float


@dataclass
class AttackReport:
    n: int
    scenario: str
    ratio_pk_px: float
    tv_distance: float
    iterations: int
    success_probability: float
    series: list[RoundStat] = field(default_factory=list)
    per_state_probs: np.ndarray | None = None


def tv_from_uniform(probs: np.ndarray) -> float:
    """Total-variation distance between a probability vector and uniform."""
    return float(0.5 * np.abs(probs - 1.0 / probs.size).sum())


def _set_ratio(probs: np.ndarray, inverted: np.ndarray) -> float:
    """Mean probability over the inverted set vs over its complement."""
    num = float(probs[inverted].mean())
    den = float(probs[~inverted].mean())
    return num / den if den > 0.0 else math.inf


def passive_ratio(ciphertext: CipherText, mask: PhaseMask) -> AttackReport:
    """Bias visible to an adversary who only measures the transmitted state.

    For any ciphertext produced by the cipher the ratio is 1 and the
    distance from uniform is 0: sign flips leave the modulus untouched.
    """
    if mask.n != ciphertext.n:
        raise ValueError(f"mask has n={mask.n} but ciphertext has n={ciphertext.n}")
    count = mask.count
    if count == 0 or count == mask.inverted.size:
        raise ValueError("mask must be a proper non-empty subset (ratio undefined otherwise)")
    probs = probabilities(ciphertext.state)
    ratio = _set_ratio(probs, mask.inverted)
    tv = tv_from_uniform(probs)
    return AttackReport(
        n=ciphertext.n,
        scenario=SCENARIO_PASSIVE,
        ratio_pk_px=ratio,
        tv_distance=tv,
        iterations=0,
        success_probability=0.0,
        series=[RoundStat(0, ratio, tv, 0.0, 0.0)],
        per_state_probs=probs,
    )


def _probe_rounds(
    n: int,
    inverted: np.ndarray,
    rounds: int,
    m: int,
    success_is_mass: bool,
) -> tuple[list[RoundStat], np.ndarray]:
    """Shared chosen-plaintext loop: flip the inverted set on the known
    plaintext superposition, then reflect about it `rounds` times."""
    reference = walsh_hadamard(basis_state(n, m))
    state = reference.copy()
    state.amps[inverted] *= -1.0
    start = state.amps.copy()

    series = []
    for rnd in range(1, rounds + 1):
        mean_inversion(state, reference)
        probs = probabilities(state)
        ratio = _set_ratio(probs, inverted)
        mass = float(probs[inverted].sum())
        success = mass if success_is_mass else float(probs[inverted].max())
        series.append(
            RoundStat(
                round=rnd,
                ratio=ratio,
                tv=tv_from_uniform(probs),
                success=success,
                deviation=float(np.abs(state.amps - start).max()),
            )
        )
    return series, probabilities(state)


def cpa_single_key(n: int, k: int, rounds: int, m: int = 0) -> AttackReport:
    """Chosen-plaintext probe against a single inverted key index.

    The adversary knows the plaintext (default all-zeros), sees its
    key-marked superposition, and reflects about the plaintext superposition
    repeatedly. Odd rounds show the bias ratio ((3N-4)/(N-4))**2 between the
    key state and everyone else; even rounds return the marked state exactly,
    so the ratio alternates with 1.
    """
    _check_qubits(n)
    dim = 1 << n
    if not 0 <= k < dim:
        raise ValueError(f"key index {k} out of range for n={n}")
    if rounds < 2:
        raise ValueError(f"rounds must be >= 2, got {rounds}")
    inverted = np.zeros(dim, dtype=bool)
    inverted[k] = True
    series, final_probs = _probe_rounds(n, inverted, rounds, m, success_is_mass=False)
    return AttackReport(
        n=n,
        scenario=SCENARIO_SINGLE,
        ratio_pk_px=series[0].ratio,
        tv_distance=series[-1].tv,
        iterations=rounds,
        success_probability=series[-1].success,
        series=series,
        per_state_probs=final_probs,
    )


def cpa_mask(n: int, mask: PhaseMask, rounds: int, m: int = 0) -> AttackReport:
    """Generalised chosen-plaintext probe against an arbitrary inverted set.

    With a singleton set this reproduces cpa_single_key exactly; the
    schedule-based variant below additionally requires the set to be exactly
    half the basis.
    """
    _check_qubits(n)
    if mask.n != n:
        raise ValueError(f"mask has n={mask.n}, expected {n}")
    count = mask.count
    if count == 0 or count == mask.inverted.size:
        raise ValueError("mask must be a proper non-empty subset")
    if rounds < 2:
        raise ValueError(f"rounds must be >= 2, got {rounds}")
    series, final_probs = _probe_rounds(n, mask.inverted, rounds, m, success_is_mass=True)
    return AttackReport(
        n=n,
        scenario=SCENARIO_MULTI,
        ratio_pk_px=series[0].ratio,
        tv_distance=series[-1].tv,
        iterations=rounds,
        success_probability=series[-1].success,
        series=series,
        per_state_probs=final_probs,
    )


def cpa_multi_key(n: int, schedule: KeySchedule, rounds: int, m: int = 0) -> AttackReport:
    """Chosen-plaintext probe against a schedule's half-basis inverted set.

    With exactly half the states inverted, the reflection maps the balanced
    +-1 state to a global-phase-equivalent balanced state, so the per-state
    probability vector stays uniform and the ratio is 1 after every round.
    """
    if schedule.n != n:
        raise ValueError(f"schedule has n={schedule.n}, expected {n}")
    if schedule.mask.count != (1 << n) // 2:
        raise ValueError(
            f"schedule mask inverts {schedule.mask.count} states, expected {(1 << n) // 2}"
        )
    return cpa_mask(n, schedule.mask, rounds, m)


def grover_key_search(n: int, oracle_key: int) -> AttackReport:
    """Amplitude amplification against the key-marking oracle.

    Runs floor(pi/4 * sqrt(N)) iterations of mark-then-reflect starting from
    the uniform superposition. The per-iteration probability of measuring
    the key matches sin((2t+1) * asin(1/sqrt(N)))**2 exactly.
    """
    if not 1 <= n <= GROVER_MAX_QUBITS:
        raise ValueError(f"key search supports 1 <= n <= {GROVER_MAX_QUBITS}, got {n}")
    dim = 1 << n
    if not 0 <= oracle_key < dim:
        raise ValueError(f"oracle key {oracle_key} out of range for n={n}")

    iterations = int(math.pi / 4.0 * math.sqrt(dim))
    reference = walsh_hadamard(basis_state(n, 0))
    state = reference.copy()
    start = state.amps.copy()
    inverted = np.zeros(dim, dtype=bool)
    inverted[oracle_key] = True

    series = []
    for t in range(1, iterations + 1):
        state.amps[oracle_key] *= -1.0
        mean_inversion(state, reference)
        probs = probabilities(state)
        series.append(
            RoundStat(
                round=t,
                ratio=_set_ratio(probs, inverted),
                tv=tv_from_uniform(probs),
                success=float(probs[oracle_key]),
                deviation=float(np.abs(state.amps - start).max()),
            )
        )
    final_probs = probabilities(state)
    return AttackReport(
        n=n,
        scenario=SCENARIO_GROVER,
        ratio_pk_px=series[-1].ratio,
        tv_distance=series[-1].tv,
        iterations=iterations,
        success_probability=series[-1].success,
        series=series,
        per_state_probs=final_probs,
    )


def reuse_sweep(
    n: int, schedule: KeySchedule, uses: int, seed: int | None = None
) -> AttackReport:
    """Measure what repeated use of one schedule leaks, empirically.

    Encrypts `uses` random messages under the same schedule. The adversary
    aggregates the mean measured probability vector (always uniform: the
    cipher is phase-only, so tv_distance stays 0) and a sign-correlation
    estimate: each ciphertext is probed by one reflection about the uniform
    state before measuring. success_probability is the fraction of probes
    whose most likely state lands in the schedule's inverted set, and
    ratio_pk_px the inverted/non-inverted mean ratio of the aggregated probe
    distribution. Measurements are recorded, not asserted against a bound.
    """
    if schedule.n != n:
        raise ValueError(f"schedule has n={schedule.n}, expected {n}")
    if uses < 1:
        raise ValueError(f"uses must be >= 1, got {uses}")

    rng = np.random.default_rng(seed)
    dim = 1 << n
    inverted = schedule.mask.inverted
    reference = walsh_hadamard(basis_state(n, 0))

    plain_sum = np.zeros(dim)
    probe_sum = np.zeros(dim)
    top_hits = 0
    series = []
    for use in range(1, uses + 1):
        message = Message(n, int(rng.integers(0, dim)))
        ct = encrypt(message, schedule)
        plain_sum += probabilities(ct.state)

        probed = ct.state.copy()
        mean_inversion(probed, reference)
        probe_probs = probabilities(probed)
        probe_sum += probe_probs
        if inverted[int(probe_probs.argmax())]:
            top_hits += 1

        plain_mean = plain_sum / use
        probe_mean = probe_sum / use
        series.append(
            RoundStat(
                round=use,
                ratio=_set_ratio(probe_mean, inverted),
                tv=tv_from_uniform(plain_mean),
                success=top_hits / use,
                deviation=0.0,
            )
        )

    probe_mean = probe_sum / uses
    return AttackReport(
        n=n,
        scenario=SCENARIO_REUSE,
        ratio_pk_px=_set_ratio(probe_mean, inverted),
        tv_distance=tv_from_uniform(plain_sum / uses),
        iterations=uses,
        success_probability=top_hits / uses,
        series=series,
        per_state_probs=probe_mean,
    )
