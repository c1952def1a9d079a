"""Atomic file writes and the binary key-file format."""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

from .errors import FormatError
from .machine import Keystream

KEY_MAGIC = b"RKEY"
KEY_VERSION = 1
_KEY_STRUCT = struct.Struct("<4sB7s")


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write ``data`` so that ``path`` is either untouched or complete."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        # mkstemp creates 0600; match what a plain open() would produce
        os.fchmod(fd, 0o666 & ~_umask())
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def encode_key(key: Keystream) -> bytes:
    return _KEY_STRUCT.pack(KEY_MAGIC, KEY_VERSION, bytes(key))


def decode_key(data: bytes) -> Keystream:
    if len(data) != _KEY_STRUCT.size:
        raise FormatError(f"key file must be {_KEY_STRUCT.size} bytes, got {len(data)}")
    magic, version, k = _KEY_STRUCT.unpack(data)
    if magic != KEY_MAGIC:
        raise FormatError(f"bad key file magic {magic!r}")
    if version != KEY_VERSION:
        raise FormatError(f"unsupported key file version {version}")
    return Keystream.from_bytes(k)


def write_key(path: str | Path, key: Keystream) -> None:
    atomic_write_bytes(path, encode_key(key))


def read_key(path: str | Path) -> Keystream:
    return decode_key(Path(path).read_bytes())
