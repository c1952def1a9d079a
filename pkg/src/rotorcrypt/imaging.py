"""Grayscale images, binary netpbm I/O and whole-image encryption."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError
from .fileio import atomic_write_bytes
from .machine import Keystream, build_machine


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit image; ``pixels`` has shape ``(height, width)``, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise ValueError(f"gray pixels must be 2-D, got shape {px.shape}")
        if px.size and (px.min() < 0 or px.max() > 255):
            raise ValueError("pixel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", px.astype(np.uint8, copy=False))

    @classmethod
    def from_buffer(cls, width: int, height: int, data) -> "GrayImage":
        buf = np.asarray(bytearray(data) if isinstance(data, (bytes, bytearray)) else data)
        if buf.size != width * height:
            raise ValueError(f"buffer holds {buf.size} pixels, expected {width * height}")
        return cls(buf.reshape(height, width))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class ColorImage:
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"color pixels must have shape (h, w, 3), got {px.shape}")
        object.__setattr__(self, "pixels", px.astype(np.uint8, copy=False))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def to_grayscale(img: ColorImage) -> GrayImage:
    """BT.601 luma, rounded half up."""
    rgb = img.pixels.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return GrayImage(np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8))


def encrypt_image(key: Keystream, img: GrayImage) -> GrayImage:
    """Stream the pixels row by row through a freshly built machine."""
    machine = build_machine(key)
    out = machine.encrypt_bytes(img.pixels.ravel())
    return GrayImage(out.reshape(img.pixels.shape))


def decrypt_image(key: Keystream, img: GrayImage) -> GrayImage:
    machine = build_machine(key)
    out = machine.decrypt_bytes(img.pixels.ravel())
    return GrayImage(out.reshape(img.pixels.shape))


# -- netpbm ------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _parse_header(data: bytes):
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if not m:
            raise FormatError("truncated netpbm header")
        fields.append(m.group(1))
        pos = m.end()
    if pos >= len(data) or data[pos:pos + 1] not in b" \t\r\n":
        raise FormatError("netpbm header must end with a single whitespace byte")
    magic = fields[0]
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError as exc:
        raise FormatError(f"bad netpbm header: {exc}") from exc
    return magic, width, height, maxval, pos + 1


def decode_netpbm(data: bytes) -> GrayImage | ColorImage:
    """Decode binary PGM (P5) or PPM (P6) with maxval 255."""
    magic, width, height, maxval, start = _parse_header(data)
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"unsupported netpbm type {magic!r}; expected P5 or P6")
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    if width < 0 or height < 0:
        raise FormatError("negative image dimensions")
    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    body = data[start:start + need]
    if len(body) != need:
        raise FormatError(f"pixel data truncated: {len(body)} of {need} bytes")
    px = np.frombuffer(body, dtype=np.uint8)
    if channels == 1:
        return GrayImage(px.reshape(height, width))
    return ColorImage(px.reshape(height, width, 3))


def encode_pgm(img: GrayImage) -> bytes:
    return b"P5\n%d %d\n255\n" % (img.width, img.height) + img.tobytes()


def encode_ppm(img: ColorImage) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.pixels.tobytes()


def read_image(path: str | Path) -> GrayImage | ColorImage:
    return decode_netpbm(Path(path).read_bytes())


def read_gray(path: str | Path) -> GrayImage:
    """Read a PGM, or a PPM reduced to grayscale."""
    img = read_image(path)
    return to_grayscale(img) if isinstance(img, ColorImage) else img


def write_pgm(path: str | Path, img: GrayImage) -> None:
    atomic_write_bytes(path, encode_pgm(img))


def write_ppm(path: str | Path, img: ColorImage) -> None:
    atomic_write_bytes(path, encode_ppm(img))
