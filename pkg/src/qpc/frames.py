"""Bit-exact file and wire formats.

State frame layout (all integers and floats little-endian):

    offset  size      field
    0       4         magic "QPC1"
    4       1         version, currently 1
    5       1         n (qubit count)
    6       2         flags (bit 0 = ciphertext, bit 1 = plaintext basis state)
    8       16 * 2^n  payload: per basis index x = 0..N-1, amplitude as
                      (float64 real, float64 imaginary)

Amplitudes are stored verbatim, so decode(encode(v)) reproduces them exactly
and encode(decode(bytes)) is byte-identical. A decoded vector whose norm is
off by more than 1e-9 is rejected as malformed.

Key files are line-oriented text: `n=<int>`, `k=<hex>`, `r=<int>`, and an
optional `origin=` provenance line. The block length d is never written;
both sides re-derive it from (n, k, r).

On a byte stream, each frame is preceded by its byte count as a 32-bit
little-endian integer.
"""

from __future__ import annotations

import struct

import numpy as np

from .cipher import CipherText, KeySchedule, derive_schedule
from .statevector import MAX_QUBITS, StateVector

MAGIC = b"QPC1"
VERSION = 1
HEADER = struct.Struct("<4sBBH")
LENGTH_PREFIX = struct.Struct("<I")

FLAG_CIPHERTEXT = 0x0001
FLAG_PLAINTEXT_BASIS = 0x0002

_NORM_TOL = 1e-9


class FormatError(Exception):
    """Malformed frame or key file."""


def encode_frame(state: StateVector, flags: int = 0) -> bytes:
    if not 0 <= flags <= 0xFFFF:
        raise ValueError(f"flags out of range: {flags}")
    payload = np.ascontiguousarray(state.amps, dtype="<c16").tobytes()
    return HEADER.pack(MAGIC, VERSION, state.n, flags) + payload


def decode_frame(data: bytes) -> tuple[StateVector, int]:
    if len(data) < HEADER.size:
        raise FormatError(f"frame shorter than {HEADER.size}-byte header")
    magic, version, n, flags = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if not 1 <= n <= MAX_QUBITS:
        raise FormatError(f"qubit count {n} out of range")
    expected = HEADER.size + 16 * (1 << n)
    if len(data) != expected:
        raise FormatError(f"frame for n={n} must be {expected} bytes, got {len(data)}")
    amps = np.frombuffer(data, dtype="<c16", offset=HEADER.size).astype(np.complex128)
    state = StateVector(n, amps)
    if abs(state.norm() - 1.0) > _NORM_TOL:
        raise FormatError(f"decoded vector norm {state.norm():.9f} is not 1")
    return state, flags


def encode_ciphertext(ciphertext: CipherText) -> bytes:
    return encode_frame(ciphertext.state, FLAG_CIPHERTEXT)


def decode_ciphertext(data: bytes) -> CipherText:
    state, flags = decode_frame(data)
    if not flags & FLAG_CIPHERTEXT:
        raise FormatError("frame is not flagged as ciphertext")
    return CipherText(state)


def pack_stream_frame(frame: bytes) -> bytes:
    """Length-prefix a frame for transmission on a byte stream."""
    return LENGTH_PREFIX.pack(len(frame)) + frame


def read_stream_frame(reader) -> bytes | None:
    """Read one length-prefixed frame from a binary stream.

    Returns None on clean end-of-stream before any prefix byte.
    """
    prefix = reader.read(LENGTH_PREFIX.size)
    if not prefix:
        return None
    if len(prefix) < LENGTH_PREFIX.size:
        raise FormatError("truncated length prefix")
    (size,) = LENGTH_PREFIX.unpack(prefix)
    frame = reader.read(size)
    if len(frame) < size:
        raise FormatError(f"truncated frame: expected {size} bytes, got {len(frame)}")
    return frame


def format_key_file(schedule: KeySchedule, origin: str | None = None) -> str:
    lines = [f"n={schedule.n}", f"k={schedule.k:x}", f"r={schedule.r}"]
    if origin:
        lines.append(f"origin={origin}")
    return "\n".join(lines) + "\n"


def parse_key_file(text: str) -> KeySchedule:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"key file line {lineno}: expected key=value, got {line!r}")
        name, _, value = line.partition("=")
        fields[name.strip()] = value.strip()
    for required in ("n", "k", "r"):
        if required not in fields:
            raise FormatError(f"key file missing {required}=")
    try:
        n = int(fields["n"])
        k = int(fields["k"], 16)
        r = int(fields["r"])
    except ValueError as exc:
        raise FormatError(f"key file has a malformed value: {exc}") from exc
    try:
        return derive_schedule(n, k, r_hint=r)
    except ValueError as exc:
        raise FormatError(f"key file values are inconsistent: {exc}") from exc


def write_key_file(path, schedule: KeySchedule, origin: str | None = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_key_file(schedule, origin))


def read_key_file(path) -> KeySchedule:
    with open(path, "r", encoding="ascii") as fh:
        return parse_key_file(fh.read())
