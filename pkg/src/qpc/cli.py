"""Command-line surface.

Subcommands: keygen, encrypt, decrypt, attack, send, recv, bench.

Exit codes are stable and exhaustive:
    0  success
    2  usage / parameter error
    3  key exchange aborted (error rate over threshold)
    4  file or frame format error (including unreadable/unwritable files)
    5  decode integrity failure (wrong key or tampered state)
    6  transport failure

QPC_SEED in the environment overrides any --seed argument.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

from . import attacks, channel
from .bb84 import QkdAbortError, extract_key, run_bb84
from .cipher import IntegrityError, Message, decrypt, derive_schedule, encrypt
from .frames import (
    FormatError,
    decode_ciphertext,
    encode_ciphertext,
    read_key_file,
    write_key_file,
)
from .statevector import MAX_QUBITS, uniform_state, walsh_hadamard

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_QKD_ABORT = 3
EXIT_FORMAT = 4
EXIT_INTEGRITY = 5
EXIT_TRANSPORT = 6


def _int_arg(text: str) -> int:
    return int(text, 0)


def _resolve_seed(args) -> int | None:
    env = os.environ.get("QPC_SEED")
    if env is not None:
        return int(env, 0)
    return args.seed


def cmd_keygen(args) -> int:
    seed = _resolve_seed(args)
    session = run_bb84(args.length, eve=args.eve, seed=seed)
    k, remaining = extract_key(session, args.n)
    schedule = derive_schedule(args.n, k)
    origin = f"bb84:{seed}" if seed is not None else "bb84"
    write_key_file(args.out, schedule, origin=origin)
    print(f"seed={seed} length={session.length} eve={str(session.eve_present).lower()}")
    print(
        f"sifted={session.sifted_key.size} sampled={session.sifted_key.size - session.key_bits.size} "
        f"qber={session.qber:.4f} reserve_bits={remaining.size}"
    )
    print(f"n={schedule.n} k={schedule.k:x} r={schedule.r} d={schedule.d}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    schedule = read_key_file(args.key)
    ct = encrypt(Message(schedule.n, args.message), schedule)
    with open(args.out, "wb") as fh:
        fh.write(encode_ciphertext(ct))
    print(f"wrote {args.out} ({8 + 16 * (1 << schedule.n)} bytes, n={schedule.n})")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    schedule = read_key_file(args.key)
    with open(args.infile, "rb") as fh:
        data = fh.read()
    message = decrypt(decode_ciphertext(data), schedule)
    print(message.m)
    return EXIT_OK


def _attack_report(args) -> attacks.AttackReport:
    seed = _resolve_seed(args)
    n = args.n
    if args.scenario == "single":
        rounds = args.rounds if args.rounds is not None else 4
        return attacks.cpa_single_key(n, args.k, rounds)
    if args.scenario == "multi":
        rounds = args.rounds if args.rounds is not None else 4
        schedule = derive_schedule(n, args.k, r_hint=args.r)
        return attacks.cpa_multi_key(n, schedule, rounds)
    if args.scenario == "grover":
        return attacks.grover_key_search(n, args.k)
    # reuse
    uses = args.rounds if args.rounds is not None else math.isqrt(1 << n)
    schedule = derive_schedule(n, args.k, r_hint=args.r)
    return attacks.reuse_sweep(n, schedule, uses, seed=seed)


def cmd_attack(args) -> int:
    report = _attack_report(args)
    lines = ["round,ratio,tv,success"]
    for row in report.series:
        lines.append(f"{row.round},{row.ratio:.12g},{row.tv:.12g},{row.success:.12g}")
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    print(
        f"{report.scenario} n={report.n} iterations={report.iterations} "
        f"ratio={report.ratio_pk_px:.6f} tv={report.tv_distance:.3e} "
        f"success={report.success_probability:.6f}"
    )
    return EXIT_OK


def cmd_send(args) -> int:
    schedule = read_key_file(args.key)
    host, _, port = args.connect.rpartition(":")
    acks = channel.send_encrypted(
        host or "127.0.0.1",
        int(port),
        schedule,
        args.messages,
        tamper=args.tamper,
    )
    for ack in acks:
        print(ack)
    return EXIT_OK


def cmd_recv(args) -> int:
    schedule = read_key_file(args.key)

    def announce(port: int) -> None:
        print(f"listening on {args.host}:{port}", file=sys.stderr, flush=True)

    channel.serve_decrypt(
        args.host,
        args.port,
        schedule,
        args.count,
        on_ready=announce,
        on_message=lambda m: print(m, flush=True),
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    lines = ["n,millis"]
    for n in range(args.min_n, args.max_n + 1):
        state = uniform_state(n)
        best = math.inf
        for _ in range(args.reps):
            t0 = time.perf_counter()
            walsh_hadamard(state)
            best = min(best, (time.perf_counter() - t0) * 1000.0)
        lines.append(f"{n},{best:.3f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpc",
        description="Phase-encoding cipher lab on simulated statevectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="run the key exchange and write a key file")
    p.add_argument("--n", type=_int_arg, required=True, help="key width in qubits")
    p.add_argument("--seed", type=_int_arg, default=None)
    p.add_argument("--eve", action="store_true", help="insert an intercept-resend eavesdropper")
    p.add_argument("--length", type=_int_arg, default=512, help="qubits to exchange")
    p.add_argument("--out", default="qpc.key", help="key file path")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a message into a state frame")
    p.add_argument("--key", required=True, help="key file path")
    p.add_argument("-m", "--message", type=_int_arg, required=True)
    p.add_argument("--out", required=True, help="frame file path")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a state frame and print the message")
    p.add_argument("--key", required=True, help="key file path")
    p.add_argument("--in", dest="infile", required=True, help="frame file path")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("attack", help="run an adversary scenario and emit CSV")
    p.add_argument("--scenario", choices=["single", "multi", "grover", "reuse"], required=True)
    p.add_argument("--n", type=_int_arg, required=True)
    p.add_argument("--k", type=_int_arg, default=0, help="key index under attack")
    p.add_argument("--r", type=_int_arg, default=None, help="block count override")
    p.add_argument("--rounds", type=_int_arg, default=None, help="probe rounds (or uses for reuse)")
    p.add_argument("--seed", type=_int_arg, default=None)
    p.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("send", help="encrypt messages and stream them to a receiver")
    p.add_argument("--connect", required=True, metavar="HOST:PORT")
    p.add_argument("--key", required=True)
    p.add_argument("--tamper", action="store_true", help="flip one payload sign in transit")
    p.add_argument("messages", type=_int_arg, nargs="+")
    p.set_defaults(func=cmd_send)

    p = sub.add_parser("recv", help="receive frames, decrypt, and print messages")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=_int_arg, required=True, help="0 picks a free port")
    p.add_argument("--key", required=True)
    p.add_argument("--count", type=_int_arg, default=1)
    p.set_defaults(func=cmd_recv)

    p = sub.add_parser("bench", help="time the transform kernel, CSV n,millis")
    p.add_argument("--min-n", type=_int_arg, default=10)
    p.add_argument("--max-n", type=_int_arg, default=20)
    p.add_argument("--reps", type=_int_arg, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except QkdAbortError as exc:
        print(f"abort: {exc}", file=sys.stderr)
        return EXIT_QKD_ABORT
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except channel.TransportError as exc:
        print(f"transport failure: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
