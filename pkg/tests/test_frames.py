import io

import numpy as np
import pytest

from qpc.cipher import Message, derive_schedule, encrypt
from qpc.frames import (
    FLAG_CIPHERTEXT,
    FLAG_PLAINTEXT_BASIS,
    FormatError,
    decode_ciphertext,
    decode_frame,
    encode_ciphertext,
    encode_frame,
    format_key_file,
    pack_stream_frame,
    parse_key_file,
    read_key_file,
    read_stream_frame,
    write_key_file,
)
from qpc.statevector import StateVector, basis_state, walsh_hadamard

from helpers import random_unit_amps


class TestStateFrame:
    def test_layout_and_size(self):
        frame = encode_frame(basis_state(4, 11), FLAG_PLAINTEXT_BASIS)
        assert len(frame) == 264  # 4 + 1 + 1 + 2 + 16 * 16
        assert frame[:4] == b"QPC1"
        assert frame[4] == 1  # version
        assert frame[5] == 4  # n
        assert frame[6:8] == b"\x02\x00"  # flags, little-endian

    def test_decode_encode_is_byte_identical(self):
        rng = np.random.default_rng(8)
        for n in (1, 4, 8):
            state = StateVector(n, random_unit_amps(rng, n))
            frame = encode_frame(state, FLAG_CIPHERTEXT)
            decoded, flags = decode_frame(frame)
            assert encode_frame(decoded, flags) == frame

    def test_amplitudes_survive_exactly(self):
        rng = np.random.default_rng(21)
        state = StateVector(6, random_unit_amps(rng, 6))
        decoded, _ = decode_frame(encode_frame(state, 0))
        np.testing.assert_array_equal(decoded.amps, state.amps)

    def test_bad_magic(self):
        frame = bytearray(encode_frame(basis_state(2, 0)))
        frame[0] = ord("X")
        with pytest.raises(FormatError):
            decode_frame(bytes(frame))

    def test_bad_version(self):
        frame = bytearray(encode_frame(basis_state(2, 0)))
        frame[4] = 9
        with pytest.raises(FormatError):
            decode_frame(bytes(frame))

    def test_truncated_frame(self):
        frame = encode_frame(basis_state(3, 1))
        with pytest.raises(FormatError):
            decode_frame(frame[:-1])
        with pytest.raises(FormatError):
            decode_frame(frame[:6])

    def test_trailing_garbage_rejected(self):
        frame = encode_frame(basis_state(3, 1))
        with pytest.raises(FormatError):
            decode_frame(frame + b"\x00")

    def test_non_unit_vector_rejected(self):
        state = basis_state(3, 1)
        state.amps[1] = 0.5
        with pytest.raises(FormatError):
            decode_frame(encode_frame(state))

    def test_ciphertext_flag_enforced(self):
        frame = encode_frame(walsh_hadamard(basis_state(3, 0)), 0)
        with pytest.raises(FormatError):
            decode_ciphertext(frame)

    def test_ciphertext_roundtrip(self):
        schedule = derive_schedule(4, 6)
        ct = encrypt(Message(4, 9), schedule)
        again = decode_ciphertext(encode_ciphertext(ct))
        np.testing.assert_array_equal(again.state.amps, ct.state.amps)

    def test_encrypt_is_byte_deterministic(self):
        schedule = derive_schedule(5, 17)
        a = encode_ciphertext(encrypt(Message(5, 23), schedule))
        b = encode_ciphertext(encrypt(Message(5, 23), schedule))
        assert a == b


class TestStreamFraming:
    def test_roundtrip(self):
        frame = encode_frame(basis_state(2, 3))
        stream = io.BytesIO(pack_stream_frame(frame) + pack_stream_frame(frame))
        assert read_stream_frame(stream) == frame
        assert read_stream_frame(stream) == frame
        assert read_stream_frame(stream) is None

    def test_truncated_prefix(self):
        with pytest.raises(FormatError):
            read_stream_frame(io.BytesIO(b"\x01\x00"))

    def test_truncated_body(self):
        frame = encode_frame(basis_state(2, 3))
        data = pack_stream_frame(frame)[:-5]
        with pytest.raises(FormatError):
            read_stream_frame(io.BytesIO(data))


class TestKeyFile:
    def test_format_and_parse(self):
        schedule = derive_schedule(6, 0x2A, r_hint=4)
        text = format_key_file(schedule, origin="bb84:42")
        assert text == "n=6\nk=2a\nr=4\norigin=bb84:42\n"
        assert parse_key_file(text) == schedule

    def test_file_roundtrip(self, tmp_path):
        path = tmp_path / "test.key"
        schedule = derive_schedule(8, 200)
        write_key_file(path, schedule)
        assert read_key_file(path) == schedule

    def test_missing_field(self):
        with pytest.raises(FormatError):
            parse_key_file("n=4\nk=5\n")

    def test_malformed_value(self):
        with pytest.raises(FormatError):
            parse_key_file("n=4\nk=zz\nr=2\n")

    def test_inconsistent_values(self):
        with pytest.raises(FormatError):
            parse_key_file("n=4\nk=5\nr=3\n")  # odd block count
        with pytest.raises(FormatError):
            parse_key_file("n=4\nk=1f\nr=2\n")  # k = 31 out of range

    def test_comments_and_blanks_ignored(self):
        schedule = parse_key_file("# generated\n\nn=4\nk=f\nr=2\n")
        assert (schedule.n, schedule.k, schedule.r) == (4, 15, 2)
