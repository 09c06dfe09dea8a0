import numpy as np
import pytest

from qpc.bb84 import Bb84Session, QkdAbortError, extract_key, run_bb84


def test_same_seed_bit_identical():
    a = run_bb84(2000, eve=False, seed=99)
    b = run_bb84(2000, eve=False, seed=99)
    for field in ("alice_bits", "alice_bases", "bob_bases", "bob_bits", "sifted_key", "key_bits"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
    assert a.qber == b.qber


def test_no_eve_qber_zero_and_sift_rate():
    session = run_bb84(10000, eve=False, seed=1)
    assert session.qber == 0.0
    assert abs(session.sifted_key.size - 5000) < 200  # 4 sigma of Binomial(10000, 1/2)
    np.testing.assert_array_equal(session.sifted_key, session.bob_sifted)


def test_eve_qber_near_quarter():
    session = run_bb84(10000, eve=True, seed=2)
    assert 0.22 <= session.qber <= 0.28


def test_sifted_positions_are_base_agreements():
    session = run_bb84(500, eve=False, seed=3)
    agree = session.alice_bases == session.bob_bases
    np.testing.assert_array_equal(session.sifted_key, session.alice_bits[agree])


def test_eve_mean_qber_over_seeds():
    qbers = [run_bb84(10000, eve=True, seed=s).qber for s in range(100)]
    assert 0.22 <= float(np.mean(qbers)) <= 0.28


def test_no_eve_agreement_over_seeds():
    for s in range(25):
        session = run_bb84(1000, eve=False, seed=s)
        np.testing.assert_array_equal(session.sifted_key, session.bob_sifted)
        assert session.qber == 0.0


def test_sift_rate_concentration():
    rates = []
    for s in range(100):
        session = run_bb84(10000, eve=False, seed=1000 + s)
        rates.append(session.sifted_key.size / session.length)
    band = 5 / np.sqrt(10000)
    inside = [0.5 - band <= r <= 0.5 + band for r in rates]
    assert sum(inside) >= 99  # rare outliers allowed beyond the 5-sigma band


def test_length_too_small():
    with pytest.raises(ValueError):
        run_bb84(32)


def test_bad_sample_fraction():
    with pytest.raises(ValueError):
        run_bb84(1000, qber_sample_fraction=0.0)


class TestExtractKey:
    @staticmethod
    def _session(key_bits, qber=0.0):
        bits = np.array(key_bits, dtype=np.uint8)
        return Bb84Session(
            seed=0,
            length=len(key_bits) * 2,
            eve_present=False,
            alice_bits=bits,
            alice_bases=np.zeros_like(bits),
            bob_bases=np.zeros_like(bits),
            bob_bits=bits,
            sifted_key=bits,
            bob_sifted=bits,
            qber_sample_fraction=0.2,
            qber=qber,
            key_bits=bits,
        )

    def test_bit_packing_little_endian(self):
        session = self._session([1, 0, 1, 0, 1, 1, 0, 0])
        k, remaining = extract_key(session, 4)
        assert k == 0b0101 == 5
        np.testing.assert_array_equal(remaining, [1, 1, 0, 0])

    def test_high_qber_aborts(self):
        session = self._session([1] * 64, qber=0.25)
        with pytest.raises(QkdAbortError) as excinfo:
            extract_key(session, 4)
        assert excinfo.value.qber == 0.25

    def test_threshold_is_inclusive(self):
        with pytest.raises(QkdAbortError):
            extract_key(self._session([1] * 64, qber=0.11), 4)

    def test_just_below_threshold_passes(self):
        k, _ = extract_key(self._session([1] * 64, qber=0.10), 4)
        assert k == 0b1111

    def test_insufficient_bits(self):
        with pytest.raises(ValueError):
            extract_key(self._session([1, 0, 1]), 4)

    def test_end_to_end_with_real_session(self):
        session = run_bb84(512, eve=False, seed=5)
        k, remaining = extract_key(session, 8)
        assert 0 <= k < 256
        assert remaining.size == session.key_bits.size - 8
        # without an eavesdropper both peers hold identical sifted streams,
        # so Bob extracting from his side lands on the same key
        np.testing.assert_array_equal(session.sifted_key, session.bob_sifted)
        expected = 0
        for i in range(8):
            expected |= int(session.key_bits[i]) << i
        assert k == expected
