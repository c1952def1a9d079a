"""Hénon map iteration and byte-permutation synthesis for rotor wirings.

The map ``x' = 1 + y - a*x**2, y' = b*x`` is seeded from a single key byte,
run through a burn-in, and its iterates are folded into bytes.  Duplicate
bytes are then repaired into a full permutation of ``0..255``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DivergenceError

DIVERGENCE_LIMIT = 1e6
BURN_IN = 1000


@dataclass(frozen=True)
class HenonParams:
    a: float = 1.4
    b: float = 0.3
    allow_nonchaotic: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.allow_nonchaotic and (self.a, self.b) != (1.4, 0.3):
            raise ValueError(
                f"Hénon parameters ({self.a}, {self.b}) are not the chaotic "
                "pair (1.4, 0.3); pass allow_nonchaotic=True to override"
            )


@dataclass(frozen=True)
class HenonState:
    x: float
    y: float
    n: int = 0


def henon_iterate(state: HenonState, params: HenonParams = HenonParams()) -> HenonState:
    """Advance the map by one step.

    Raises DivergenceError when the new ``x`` is non-finite or exceeds
    ``DIVERGENCE_LIMIT`` in magnitude.
    """
    x = 1.0 + state.y - params.a * state.x * state.x
    y = params.b * state.x
    if not math.isfinite(x) or abs(x) > DIVERGENCE_LIMIT:
        raise DivergenceError(
            f"Hénon orbit diverged at iterate {state.n + 1} (x={x!r})"
        )
    return HenonState(x, y, state.n + 1)


def seed_state(seed: int) -> HenonState:
    """Map a key byte to a starting point near the origin, inside the basin."""
    if not 0 <= seed <= 255:
        raise ValueError(f"seed must be a byte, got {seed}")
    return HenonState((seed - 127.5) / 1275.0, 0.0, 0)


def value_to_byte(x: float) -> int:
    # Python's % on ints is already the non-negative (Euclidean) residue for
    # a positive modulus.
    return math.floor(256.0 * x) % 256


def henon_byte_sequence(
    seed: int, length: int, params: HenonParams = HenonParams()
) -> list[int]:
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    state = seed_state(seed)
    for _ in range(BURN_IN):
        state = henon_iterate(state, params)
    out = []
    for _ in range(length):
        state = henon_iterate(state, params)
        out.append(value_to_byte(state.x))
    return out


@dataclass(frozen=True, eq=False)
class Permutation256:
    """A bijection on ``0..size-1`` stored with its inverse.

    ``size`` is 256 for real rotors; smaller sizes exist only so that toy
    rotors (like a 4-pin example) can be expressed with the same type.
    """

    forward: np.ndarray
    inverse: np.ndarray

    @classmethod
    def from_forward(cls, forward: Sequence[int]) -> "Permutation256":
        fwd = np.asarray(forward, dtype=np.int64)
        size = fwd.size
        if fwd.ndim != 1 or size == 0:
            raise ValueError("permutation must be a non-empty 1-D sequence")
        if fwd.min() < 0 or fwd.max() >= size or np.unique(fwd).size != size:
            raise ValueError("forward map is not a bijection")
        inv = np.empty_like(fwd)
        inv[fwd] = np.arange(size)
        fwd.setflags(write=False)
        inv.setflags(write=False)
        return cls(fwd, inv)

    @classmethod
    def identity(cls, size: int = 256) -> "Permutation256":
        return cls.from_forward(range(size))

    @property
    def size(self) -> int:
        return int(self.forward.size)

    def is_bijection(self) -> bool:
        n = self.size
        return (
            np.array_equal(np.sort(self.forward), np.arange(n))
            and np.array_equal(self.inverse[self.forward], np.arange(n))
        )

    def __eq__(self, other):
        if not isinstance(other, Permutation256):
            return NotImplemented
        return np.array_equal(self.forward, other.forward)

    def __hash__(self):
        return hash(self.forward.tobytes())


def complete_permutation(raw: Sequence[int], size: int = 256) -> Permutation256:
    """Repair ``raw`` into a bijection.

    The first occurrence of each value stays where it is.  Every later
    duplicate, scanning left to right, takes the smallest value that does not
    occur anywhere in ``raw``.
    """
    raw = [int(v) for v in raw]
    if len(raw) != size:
        raise ValueError(f"expected {size} entries, got {len(raw)}")
    if any(v < 0 or v >= size for v in raw):
        raise ValueError(f"entries must lie in [0, {size - 1}]")
    present = set(raw)
    missing = iter(sorted(set(range(size)) - present))
    seen = set()
    out = []
    for v in raw:
        if v in seen:
            out.append(next(missing))
        else:
            seen.add(v)
            out.append(v)
    return Permutation256.from_forward(out)


def wiring_from_seed(seed: int, params: HenonParams = HenonParams()) -> Permutation256:
    return complete_permutation(henon_byte_sequence(seed, 256, params))
