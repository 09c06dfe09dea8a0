"""Phase-encoding quantum cipher lab.

Implements the cipher pipeline (superposition spread, key-index sign flip,
alternating-block sign flips) on exact dense statevectors, a BB84 front end
that supplies the shared secret, bit-exact frame/key-file formats with a
socket channel, and an adversary harness that measures every security
property numerically. A toy for auditing the construction's math; not a
production cipher.
"""

from .statevector import (
    MAX_QUBITS,
    PhaseMask,
    StateVector,
    basis_state,
    mean_inversion,
    phase_flip,
    probabilities,
    uniform_state,
    walsh_hadamard,
)
from .cipher import (
    CipherText,
    IntegrityError,
    KeySchedule,
    Message,
    authenticate,
    block_mask,
    decrypt,
    derive_schedule,
    encrypt,
    key_phase_inversion,
    multi_phase_inversion,
    rekey,
)
from .bb84 import Bb84Session, QkdAbortError, extract_key, run_bb84
from .attacks import (
    AttackReport,
    RoundStat,
    cpa_mask,
    cpa_multi_key,
    cpa_single_key,
    grover_key_search,
    passive_ratio,
    reuse_sweep,
    tv_from_uniform,
)
from .frames import (
    FormatError,
    decode_ciphertext,
    decode_frame,
    encode_ciphertext,
    encode_frame,
    parse_key_file,
    read_key_file,
    write_key_file,
)
from .channel import TransportError, send_encrypted, serve_decrypt

__version__ = "0.1.0"

__all__ = [
    "MAX_QUBITS",
    "PhaseMask",
    "StateVector",
    "basis_state",
    "mean_inversion",
    "phase_flip",
    "probabilities",
    "uniform_state",
    "walsh_hadamard",
    "CipherText",
    "IntegrityError",
    "KeySchedule",
    "Message",
    "authenticate",
    "block_mask",
    "decrypt",
    "derive_schedule",
    "encrypt",
    "key_phase_inversion",
    "multi_phase_inversion",
    "rekey",
    "Bb84Session",
    "QkdAbortError",
    "extract_key",
    "run_bb84",
    "AttackReport",
    "RoundStat",
    "cpa_mask",
    "cpa_multi_key",
    "cpa_single_key",
    "grover_key_search",
    "passive_ratio",
    "reuse_sweep",
    "tv_from_uniform",
    "FormatError",
    "decode_ciphertext",
    "decode_frame",
    "encode_ciphertext",
    "encode_frame",
    "parse_key_file",
    "read_key_file",
    "write_key_file",
    "TransportError",
    "send_encrypted",
    "serve_decrypt",
    "__version__",
]
