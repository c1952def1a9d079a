"""Three-rotor, 256-pin digital rotor machine.

A byte entering the machine passes forward through the fast, medium and slow
rotors, is shifted by the reflector offset, and returns through the rotors'
inverse wirings.  Each rotor's wiring is conjugated by its current rotational
offset: ``idx -> (wiring[(idx + offset) % 256] - offset) % 256``.

The machine steps like an odometer *before* every byte.  Decryption runs the
same sandwich with the reflector shift negated, so a cipher stream can only be
inverted by a machine built from the same keystream and stepped on the same
schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .chaos import HenonParams, Permutation256, wiring_from_seed

N_ROTORS = 3


@dataclass(frozen=True)
class Keystream:
    """The seven key bytes ``K1..K7``.

    ``K1..K3`` seed the rotor wirings, ``K4..K6`` set the initial rotor
    positions (fast, medium, slow), ``K7`` is the reflector offset.
    """

    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        if len(k) != 7:
            raise ValueError(f"a keystream has exactly 7 bytes, got {len(k)}")
        if any(not 0 <= v <= 255 for v in k):
            raise ValueError(f"keystream bytes must lie in [0, 255]: {k}")
        object.__setattr__(self, "k", k)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Keystream":
        return cls(tuple(data))

    def __bytes__(self) -> bytes:
        return bytes(self.k)

    def __getitem__(self, i: int) -> int:
        return self.k[i]

    def __iter__(self):
        return iter(self.k)

    def __len__(self) -> int:
        return 7

    @property
    def wiring_seeds(self) -> tuple[int, int, int]:
        return self.k[0], self.k[1], self.k[2]

    @property
    def positions(self) -> tuple[int, int, int]:
        return self.k[3], self.k[4], self.k[5]

    @property
    def reflector_offset(self) -> int:
        return self.k[6]

    def flip_bit(self, bit: int) -> "Keystream":
        """Return a copy with bit ``bit`` (0..55, byte-major) inverted."""
        if not 0 <= bit < 56:
            raise ValueError(f"bit index must lie in [0, 55], got {bit}")
        k = list(self.k)
        k[bit // 8] ^= 1 << (bit % 8)
        return Keystream(tuple(k))


@dataclass
class Rotor:
    wiring: Permutation256
    position: int = 0

    def __post_init__(self):
        if not 0 <= self.position < self.wiring.size:
            raise ValueError(f"rotor position {self.position} out of range")

    def forward(self, idx: int) -> int:
        n = self.wiring.size
        o = self.position
        return (int(self.wiring.forward[(idx + o) % n]) - o) % n

    def backward(self, idx: int) -> int:
        n = self.wiring.size
        o = self.position
        return (int(self.wiring.inverse[(idx + o) % n]) - o) % n


def odometer_positions(initial: Sequence[int], steps, size: int = 256):
    """Rotor positions after ``steps`` odometer steps from ``initial``.

    ``steps`` may be an int or an integer numpy array; the result is a tuple
    of three ints or arrays (fast, medium, slow).
    """
    fast0, mid0, slow0 = initial
    total = fast0 + steps
    mid_total = mid0 + total // size
    slow_total = slow0 + mid_total // size
    return total % size, mid_total % size, slow_total % size


class Machine:
    """Stateful cipher: three rotors, a reflector offset and a step counter.

    ``rotors[0]`` is the fast rotor, ``rotors[2]`` the slow one.  Instances are
    not thread-safe; build one machine per stream.
    """

    def __init__(self, rotors: Sequence[Rotor], reflector_offset: int):
        rotors = list(rotors)
        if len(rotors) != N_ROTORS:
            raise ValueError(f"a machine has exactly {N_ROTORS} rotors")
        sizes = {r.wiring.size for r in rotors}
        if len(sizes) != 1:
            raise ValueError("all rotors must have the same number of pins")
        self.size = sizes.pop()
        if not 0 <= reflector_offset < self.size:
            raise ValueError(f"reflector offset {reflector_offset} out of range")
        self.rotors = rotors
        self.reflector_offset = reflector_offset
        self.steps = 0
        self.initial_positions = tuple(r.position for r in rotors)

    @property
    def positions(self) -> tuple[int, int, int]:
        return tuple(r.position for r in self.rotors)

    def _set_positions(self, positions) -> None:
        for rotor, p in zip(self.rotors, positions):
            rotor.position = int(p)

    def step(self) -> "Machine":
        """Advance one odometer step; returns ``self`` for chaining."""
        self.steps += 1
        n = self.size
        for rotor in self.rotors:
            rotor.position = (rotor.position + 1) % n
            if rotor.position != 0:
                break
        return self

    def advance(self, count: int) -> "Machine":
        """Equivalent to calling :meth:`step` ``count`` times."""
        if count < 0:
            raise ValueError("cannot step backwards")
        self.steps += count
        self._set_positions(odometer_positions(self.initial_positions, self.steps, self.size))
        return self

    def _sandwich(self, value: int, shift: int) -> int:
        idx = value
        for rotor in self.rotors:
            idx = rotor.forward(idx)
        idx = (idx + shift) % self.size
        for rotor in reversed(self.rotors):
            idx = rotor.backward(idx)
        return idx

    def _check_byte(self, value: int) -> None:
        if not 0 <= value < self.size:
            raise ValueError(f"input {value} outside [0, {self.size - 1}]")

    def encrypt_byte(self, p: int) -> int:
        self._check_byte(p)
        self.step()
        return self._sandwich(p, self.reflector_offset)

    def decrypt_byte(self, c: int) -> int:
        self._check_byte(c)
        self.step()
        return self._sandwich(c, -self.reflector_offset)

    def peek_map(self, shift: int | None = None) -> np.ndarray:
        """The full byte map at the current positions, without stepping."""
        if shift is None:
            shift = self.reflector_offset
        return np.array([self._sandwich(v, shift) for v in range(self.size)])

    def _stream(self, data: Iterable[int], shift: int) -> np.ndarray:
        # Vectorised over the whole stream: every byte's rotor offsets are a
        # closed-form function of its step index.
        values = np.asarray(data, dtype=np.int64).ravel()
        if values.size and (values.min() < 0 or values.max() >= self.size):
            raise ValueError(f"stream values must lie in [0, {self.size - 1}]")
        n = self.size
        step_idx = self.steps + 1 + np.arange(values.size, dtype=np.int64)
        offsets = odometer_positions(self.initial_positions, step_idx, n)
        idx = values
        for rotor, o in zip(self.rotors, offsets):
            idx = (rotor.wiring.forward[(idx + o) % n] - o) % n
        idx = (idx + shift) % n
        for rotor, o in zip(reversed(self.rotors), reversed(offsets)):
            idx = (rotor.wiring.inverse[(idx + o) % n] - o) % n
        self.advance(values.size)
        return idx

    def encrypt_bytes(self, data: Iterable[int]) -> np.ndarray:
        """Encrypt a stream; identical to repeated :meth:`encrypt_byte`."""
        return self._stream(data, self.reflector_offset)

    def decrypt_bytes(self, data: Iterable[int]) -> np.ndarray:
        return self._stream(data, -self.reflector_offset)

    def __repr__(self):
        return (
            f"Machine(positions={self.positions}, "
            f"reflector_offset={self.reflector_offset}, steps={self.steps})"
        )


def build_machine(key: Keystream, params: HenonParams = HenonParams()) -> Machine:
    """Construct a fresh machine: Hénon wirings from K1..K3, positions K4..K6."""
    rotors = [
        Rotor(wiring_from_seed(seed, params), pos)
        for seed, pos in zip(key.wiring_seeds, key.positions)
    ]
    return Machine(rotors, key.reflector_offset)


def identity_machine(positions=(0, 0, 0), reflector_offset: int = 0, size: int = 256) -> Machine:
    """A machine with identity wirings; useful as a degenerate reference."""
    rotors = [Rotor(Permutation256.identity(size), p) for p in positions]
    return Machine(rotors, reflector_offset)
