"""Shamir (k, n) threshold sharing of a keystream, one polynomial per byte."""

from __future__ import annotations

import secrets
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import (
    FormatError,
    InsufficientSharesError,
    MismatchedParamsError,
    NonInvertibleError,
    SecretTooLargeError,
)
from .fileio import atomic_write_bytes
from .machine import Keystream

DEFAULT_PRIME = 257
PAPER_PRIME = 17
SHARE_MAGIC = b"RSH1"
_SHARE_STRUCT = struct.Struct("<4sHBBB7H")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class SharingParams:
    n: int = 5
    k: int = 3
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ValueError(f"need 2 <= k <= n, got k={self.k}, n={self.n}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.n >= self.p:
            raise ValueError(f"n={self.n} evaluation points do not fit below p={self.p}")
        if self.p > 0xFFFF or self.n > 0xFF:
            raise ValueError("parameters exceed the share file field widths")


@dataclass(frozen=True)
class Share:
    x: int
    values: tuple[int, ...]
    params: SharingParams

    def __post_init__(self):
        if not 1 <= self.x < self.params.p:
            raise ValueError(f"share x={self.x} outside [1, {self.params.p - 1}]")
        if len(self.values) != 7 or any(not 0 <= v < self.params.p for v in self.values):
            raise ValueError("a share carries 7 field elements below p")

    def to_bytes(self) -> bytes:
        p = self.params
        return _SHARE_STRUCT.pack(SHARE_MAGIC, p.p, p.n, p.k, self.x, *self.values)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Share":
        if len(data) != _SHARE_STRUCT.size:
            raise FormatError(f"share file must be {_SHARE_STRUCT.size} bytes, got {len(data)}")
        magic, p, n, k, x, *values = _SHARE_STRUCT.unpack(data)
        if magic != SHARE_MAGIC:
            raise FormatError(f"bad share magic {magic!r}")
        try:
            return cls(x, tuple(values), SharingParams(n, k, p))
        except ValueError as exc:
            raise FormatError(f"invalid share contents: {exc}") from exc


def evaluate(coefficients: Sequence[int], x: int, p: int) -> int:
    """Horner evaluation of ``a0 + a1*x + ...`` mod p."""
    y = 0
    for a in reversed(coefficients):
        y = (y * x + a) % p
    return y


def split_secret(
    secret: int, params: SharingParams, coefficients: Sequence[int] | None = None, rng=None
) -> list[tuple[int, int]]:
    """Points ``(x, f(x))`` for x = 1..n of a polynomial with ``f(0) = secret``.

    ``coefficients`` are a1..a_{k-1}; when omitted they are drawn uniformly
    from ``[0, p)`` with ``rng`` (``secrets.SystemRandom`` by default).
    """
    if not 0 <= secret < params.p:
        raise SecretTooLargeError(
            f"secret {secret} does not fit in the field mod {params.p}"
        )
    if coefficients is None:
        rng = rng or secrets.SystemRandom()
        coefficients = [rng.randrange(params.p) for _ in range(params.k - 1)]
    if len(coefficients) != params.k - 1:
        raise ValueError(f"need {params.k - 1} coefficients, got {len(coefficients)}")
    poly = [secret, *(a % params.p for a in coefficients)]
    return [(x, evaluate(poly, x, params.p)) for x in range(1, params.n + 1)]


def lagrange_at_zero(points: Sequence[tuple[int, int]], p: int) -> int:
    """Interpolate the polynomial through ``points`` and evaluate it at 0."""
    xs = [x for x, _ in points]
    if len(set(x % p for x in xs)) != len(xs):
        raise NonInvertibleError(f"evaluation points are not distinct mod {p}: {xs}")
    total = 0
    for j, (xj, yj) in enumerate(points):
        num, den = 1, 1
        for m, xm in enumerate(xs):
            if m != j:
                num = num * -xm % p
                den = den * (xj - xm) % p
        total = (total + yj * num * pow(den, -1, p)) % p
    return total


def split(
    key: Keystream,
    params: SharingParams = SharingParams(),
    coefficients: Sequence[Sequence[int]] | None = None,
    rng=None,
) -> list[Share]:
    """Split each of the 7 key bytes independently into ``n`` shares.

    ``coefficients``, when given, holds one list of a1..a_{k-1} per key byte.
    """
    too_big = [b for b in key if b >= params.p]
    if too_big:
        raise SecretTooLargeError(
            f"key bytes {too_big} are not below the prime {params.p}; "
            f"use a prime above 255 (e.g. {DEFAULT_PRIME})"
        )
    if coefficients is not None and len(coefficients) != 7:
        raise ValueError("coefficients must give one list per key byte")
    columns = [
        split_secret(b, params, None if coefficients is None else coefficients[i], rng)
        for i, b in enumerate(key)
    ]
    return [
        Share(x, tuple(col[j][1] for col in columns), params)
        for j, x in enumerate(range(1, params.n + 1))
    ]


def reconstruct(shares: Sequence[Share]) -> Keystream:
    """Recover the keystream from the first ``k`` of the given shares."""
    if not shares:
        raise InsufficientSharesError("no shares given")
    params = shares[0].params
    if any(s.params != params for s in shares):
        raise MismatchedParamsError("shares come from different sharing parameters")
    if len({s.x for s in shares}) != len(shares):
        raise MismatchedParamsError("duplicate share evaluation points")
    if len(shares) < params.k:
        raise InsufficientSharesError(f"need {params.k} shares, got {len(shares)}")
    used = shares[: params.k]
    secret = [
        lagrange_at_zero([(s.x, s.values[i]) for s in used], params.p) for i in range(7)
    ]
    if any(b > 255 for b in secret):
        raise MismatchedParamsError(
            f"reconstructed values {secret} are not bytes; shares are inconsistent"
        )
    return Keystream(tuple(secret))


def write_share(path: str | Path, share: Share) -> None:
    atomic_write_bytes(path, share.to_bytes())


def read_share(path: str | Path) -> Share:
    return Share.from_bytes(Path(path).read_bytes())
