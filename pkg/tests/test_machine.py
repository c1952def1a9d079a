import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotorcrypt.chaos import Permutation256, wiring_from_seed
from rotorcrypt.imaging import GrayImage, encrypt_image
from rotorcrypt.analysis import pixel_change_rate
from rotorcrypt.machine import (
    Keystream,
    Machine,
    Rotor,
    build_machine,
    identity_machine,
    odometer_positions,
)

from conftest import random_key

keys = st.tuples(*[st.integers(0, 255)] * 7).map(Keystream)


class TestKeystream:
    def test_validation(self):
        with pytest.raises(ValueError):
            Keystream((1, 2, 3))
        with pytest.raises(ValueError):
            Keystream((1, 2, 3, 4, 5, 6, 256))

    def test_roles(self):
        k = Keystream((1, 2, 3, 4, 5, 6, 7))
        assert k.wiring_seeds == (1, 2, 3)
        assert k.positions == (4, 5, 6)
        assert k.reflector_offset == 7
        assert bytes(k) == bytes(range(1, 8))

    def test_flip_bit(self):
        k = Keystream((0,) * 7)
        assert k.flip_bit(0).k == (1, 0, 0, 0, 0, 0, 0)
        assert k.flip_bit(55).k == (0, 0, 0, 0, 0, 0, 128)


class TestBuild:
    def test_deterministic(self, fixed_key):
        a, b = build_machine(fixed_key), build_machine(fixed_key)
        assert [r.wiring for r in a.rotors] == [r.wiring for r in b.rotors]
        assert a.positions == b.positions == fixed_key.positions
        assert a.reflector_offset == fixed_key.reflector_offset
        assert a.steps == 0

    def test_k4_touches_only_fast_position(self, fixed_key):
        k = list(fixed_key)
        k[3] = (k[3] + 1) % 256
        a, b = build_machine(fixed_key), build_machine(Keystream(k))
        assert [r.wiring for r in a.rotors] == [r.wiring for r in b.rotors]
        assert a.positions[0] != b.positions[0]
        assert a.positions[1:] == b.positions[1:]

    def test_k1_changes_fast_wiring(self, rng):
        for _ in range(20):
            key = random_key(rng)
            k = list(key)
            k[0] = (k[0] + 1) % 256
            a = build_machine(key).rotors[0].wiring.forward
            b = build_machine(Keystream(k)).rotors[0].wiring.forward
            assert np.mean(a != b) >= 0.5

    def test_wirings_come_from_seeds(self, fixed_key):
        m = build_machine(fixed_key)
        for rotor, seed in zip(m.rotors, fixed_key.wiring_seeds):
            assert rotor.wiring == wiring_from_seed(seed)


class TestStep:
    @staticmethod
    def at(positions):
        return identity_machine(positions)

    def test_single_carry(self):
        assert self.at((255, 0, 0)).step().positions == (0, 1, 0)

    def test_double_carry(self):
        assert self.at((255, 255, 7)).step().positions == (0, 0, 8)

    def test_full_wrap(self):
        assert self.at((255, 255, 255)).step().positions == (0, 0, 0)

    def test_plain_step(self):
        m = self.at((10, 20, 30)).step()
        assert m.positions == (11, 20, 30)
        assert m.steps == 1

    def test_step_loop_matches_odometer_formula(self):
        m = self.at((250, 254, 3))
        start = m.positions
        for s in range(1, 70_001):
            m.step()
            if s % 997 == 0 or s < 300:
                assert m.positions == tuple(int(v) for v in odometer_positions(start, s))
        assert m.steps == 70_000

    def test_advance_matches_step(self):
        a, b = self.at((1, 2, 3)), self.at((1, 2, 3))
        for _ in range(1000):
            a.step()
        b.advance(1000)
        assert a.positions == b.positions and a.steps == b.steps

    def test_odometer_period(self):
        steps = np.arange(256**3 + 1, dtype=np.int64)
        fast, mid, slow = odometer_positions((0, 0, 0), steps)
        code = fast + 256 * mid + 65536 * slow
        assert (fast[-1], mid[-1], slow[-1]) == (0, 0, 0)
        assert np.unique(code[:-1]).size == 256**3


class TestEncryptByte:
    def test_identity_machine_is_identity(self):
        m = identity_machine((3, 200, 17), reflector_offset=0)
        for p in range(256):
            assert m.encrypt_byte(p) == p

    def test_identity_wirings_half_turn_reflector(self):
        m = identity_machine((5, 6, 7), reflector_offset=128)
        for p in range(256):
            c = m.encrypt_byte(p)
            assert c == (p + 128) % 256
            assert m.encrypt_byte(c) == p

    def test_identity_wirings_decrypt_subtracts_offset(self):
        m = identity_machine((0, 0, 0), reflector_offset=5)
        for c in range(256):
            assert m.decrypt_byte(c) == (c - 5) % 256

    def test_step_happens_before_encoding(self):
        # Fast rotor with a non-identity wiring: the byte must see position 1.
        w = wiring_from_seed(9)
        m = Machine([Rotor(w, 0), Rotor(Permutation256.identity(), 0),
                     Rotor(Permutation256.identity(), 0)], 11)
        probe = Machine([Rotor(w, 1), Rotor(Permutation256.identity(), 0),
                         Rotor(Permutation256.identity(), 0)], 11)
        assert m.encrypt_byte(77) == probe.peek_map()[77]

    def test_hand_evaluated_sandwich(self):
        # Evaluate F, R, B by hand from the stated conjugation formula.
        key = Keystream((5, 60, 200, 10, 255, 3, 99))
        m = build_machine(key)
        wirings = [r.wiring for r in m.rotors]
        p = 123
        c = m.encrypt_byte(p)
        offsets = (11, 255, 3)
        idx = p
        for w, o in zip(wirings, offsets):
            idx = (int(w.forward[(idx + o) % 256]) - o) % 256
        idx = (idx + 99) % 256
        for w, o in zip(reversed(wirings), reversed(offsets)):
            idx = (int(w.inverse[(idx + o) % 256]) - o) % 256
        assert c == idx

    def test_bijective_at_every_state(self, rng):
        for _ in range(100):
            m = build_machine(random_key(rng))
            m.advance(int(rng.integers(0, 256**3)))
            assert sorted(m.peek_map()) == list(range(256))

    def test_rejects_out_of_range(self, fixed_key):
        m = build_machine(fixed_key)
        with pytest.raises(ValueError):
            m.encrypt_byte(256)
        with pytest.raises(ValueError):
            m.encrypt_bytes([0, -1])

    def test_vectorised_stream_matches_scalar(self, rng):
        key = random_key(rng)
        data = rng.integers(0, 256, 70_000)
        scalar = build_machine(key)
        expected = [scalar.encrypt_byte(int(v)) for v in data[:3000]]
        vector = build_machine(key)
        got = vector.encrypt_bytes(data)
        assert list(got[:3000]) == expected
        assert vector.steps == 70_000
        scalar.advance(70_000 - 3000)
        assert vector.positions == scalar.positions

    def test_stream_in_chunks_equals_whole(self, rng):
        key = random_key(rng)
        data = rng.integers(0, 256, 1000)
        whole = build_machine(key).encrypt_bytes(data)
        m = build_machine(key)
        parts = np.concatenate([m.encrypt_bytes(data[:333]), m.encrypt_bytes(data[333:])])
        assert np.array_equal(whole, parts)


class TestFigureWiring:
    WIRING = Permutation256.from_forward([2, 1, 0, 3])  # labels [3 2 1 4], 0-based

    def test_offset_zero_reduces_to_pin_search(self):
        rotor = Rotor(self.WIRING, 0)
        assert [rotor.forward(i) for i in range(4)] == [2, 1, 0, 3]
        assert [rotor.backward(rotor.forward(i)) for i in range(4)] == [0, 1, 2, 3]

    @pytest.mark.xfail(
        strict=True,
        reason="no rotational offset maps pin 4 to pin 3 through an offset-conjugated "
        "[3 2 1 4] wiring; the figure only matches an unconjugated pin search",
    )
    def test_pin_four_exits_at_pin_three(self):
        outputs = {Rotor(self.WIRING, o).forward(3) for o in range(4)}
        assert 2 in outputs


class TestDecryptByte:
    @given(keys, st.lists(st.integers(0, 255), max_size=600))
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, key, data):
        enc, dec = build_machine(key), build_machine(key)
        cipher = [enc.encrypt_byte(p) for p in data]
        assert [dec.decrypt_byte(c) for c in cipher] == data

    def test_shared_machine_breaks_round_trip(self, rng):
        failures = 0
        for _ in range(50):
            m = build_machine(random_key(rng))
            p = int(rng.integers(0, 256))
            failures += m.decrypt_byte(m.encrypt_byte(p)) != p
        assert failures > 40


def test_avalanche_mean_rate(rng):
    img = GrayImage(rng.integers(0, 256, (128, 128)))
    rates = []
    for _ in range(6):
        key = random_key(rng)
        base = encrypt_image(key, img)
        rates += [pixel_change_rate(base, encrypt_image(key.flip_bit(b), img)) for b in range(56)]
    assert np.mean(rates) >= 0.99


@pytest.mark.xfail(
    strict=True,
    reason="slow-rotor-only changes (K3, K6) alter one fixed inner map on a 128x128 "
    "image; unchanged pixels are (coincidences)/256 with ~Poisson(1) coincidences, "
    "so some single-bit flips leave >1% of pixels unchanged",
)
def test_every_single_bit_flip_changes_99_percent(rng):
    img = GrayImage(rng.integers(0, 256, (128, 128)))
    for _ in range(10):
        key = random_key(rng)
        base = encrypt_image(key, img)
        for b in range(56):
            assert pixel_change_rate(base, encrypt_image(key.flip_bit(b), img)) >= 0.99
