"""Simulated quantum channel: a reliable ordered byte stream of state frames.

Physically unfaithful on purpose: the "quantum" state crosses the wire as a
classical serialization of its full amplitude vector. That is the only
desk-scale option, and the security story this package audits lives in the
attack harness, not in transport. Each frame travels length-prefixed; the
receiver decrypts and acknowledges with one text line per frame.
"""

from __future__ import annotations

import socket
from typing import Callable, Iterable

from .cipher import KeySchedule, Message, decrypt, encrypt
from .frames import (
    HEADER,
    decode_ciphertext,
    encode_ciphertext,
    pack_stream_frame,
    read_stream_frame,
)

DEFAULT_TIMEOUT = 30.0


class TransportError(Exception):
    """Connection setup or stream transfer failed."""


def tamper_frame(frame: bytes, index: int = 0) -> bytes:
    """Flip the sign of one payload amplitude's real part, in the raw bytes.

    Emulates in-transit corruption that preserves the vector norm, so only
    the decode integrity check can catch it.
    """
    # float64 little-endian: the sign bit is the top bit of the last byte.
    pos = HEADER.size + 16 * index + 7
    if pos >= len(frame):
        raise ValueError(f"amplitude index {index} beyond frame payload")
    return frame[:pos] + bytes([frame[pos] ^ 0x80]) + frame[pos + 1 :]


def send_encrypted(
    host: str,
    port: int,
    schedule: KeySchedule,
    messages: Iterable[int],
    tamper: bool = False,
    timeout: float = DEFAULT_TIMEOUT,
) -> list[str]:
    """Encrypt and stream messages to a receiver; returns its ack lines.

    With tamper=True the first frame is corrupted in transit (one sign
    flip), which the receiving side must reject.
    """
    frames = []
    for m in messages:
        frames.append(encode_ciphertext(encrypt(Message(schedule.n, m), schedule)))
    if tamper:
        if not frames:
            raise ValueError("nothing to tamper with")
        frames[0] = tamper_frame(frames[0])

    try:
        with socket.create_connection((host, port), timeout=timeout) as sock:
            sock.settimeout(timeout)
            with sock.makefile("wb") as wfile, sock.makefile("rb") as rfile:
                for frame in frames:
                    wfile.write(pack_stream_frame(frame))
                wfile.flush()
                sock.shutdown(socket.SHUT_WR)
                acks = []
                for _ in frames:
                    line = rfile.readline()
                    if not line:
                        raise TransportError("peer closed the stream before acknowledging")
                    acks.append(line.decode("ascii", "replace").strip())
                return acks
    except OSError as exc:
        raise TransportError(f"send failed: {exc}") from exc


def serve_decrypt(
    host: str,
    port: int,
    schedule: KeySchedule,
    count: int,
    on_ready: Callable[[int], None] | None = None,
    on_message: Callable[[int], None] | None = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> list[int]:
    """Accept one connection, decrypt `count` frames in order, ack each.

    on_ready fires with the bound port once listening (useful with port 0).
    Frame decode errors and decrypt integrity errors propagate to the
    caller; connection-level failures surface as TransportError.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    try:
        with socket.create_server((host, port)) as listener:
            listener.settimeout(timeout)
            if on_ready is not None:
                on_ready(listener.getsockname()[1])
            conn, _ = listener.accept()
            with conn:
                conn.settimeout(timeout)
                # close the file wrappers deterministically: a propagating
                # decode error must not leave the fd open via its traceback
                with conn.makefile("rb") as rfile, conn.makefile("wb") as wfile:
                    received = []
                    for _ in range(count):
                        try:
                            frame = read_stream_frame(rfile)
                        except OSError as exc:
                            raise TransportError(f"receive failed: {exc}") from exc
                        if frame is None:
                            raise TransportError("stream ended before all frames arrived")
                        message = decrypt(decode_ciphertext(frame), schedule)
                        received.append(message.m)
                        if on_message is not None:
                            on_message(message.m)
                        wfile.write(f"ok {message.m}\n".encode("ascii"))
                        wfile.flush()
                    return received
    except OSError as exc:
        raise TransportError(f"receive failed: {exc}") from exc
