"""Brute-force oracles kept independent of the package's kernels."""

import math

import numpy as np


def dense_hadamard(n: int) -> np.ndarray:
    """Tensor power of the 2x2 Hadamard, materialised as a dense matrix."""
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    h = np.array([[1.0]])
    for _ in range(n):
        h = np.kron(h, h1)
    return h


def block_mask_by_rule(dim: int, k: int, d: int) -> set[int]:
    """Literal enumeration of the alternating-block rule: starting at k,
    invert d consecutive indices, skip the next d, repeat, wrapping mod N."""
    inverted = set()
    pos = k
    invert = True
    for _ in range(dim // d):
        if invert:
            for j in range(d):
                inverted.add((pos + j) % dim)
        pos += d
        invert = not invert
    return inverted


def random_unit_amps(rng: np.random.Generator, n: int) -> np.ndarray:
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return amps / np.linalg.norm(amps)
