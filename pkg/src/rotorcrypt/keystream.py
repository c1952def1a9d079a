"""Voice-derived keystream: a literal, minimal PLP pipeline.

256 samples -> power spectrum -> 14 triangular Bark-band energies ->
cube-root compression -> 14-point inverse DFT -> 7 selected coefficients
folded into bytes.  No window, pre-emphasis or equal-loudness weighting is
applied.
"""

from __future__ import annotations

import math
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateBandError, FormatError, SelectionError
from .machine import Keystream

FRAME_LENGTH = 256
N_FILTERS = 14
KEY_LENGTH = 7
DEFAULT_SELECTION = tuple(range(KEY_LENGTH))
MIN_SAMPLE_RATE = 200


@dataclass(frozen=True)
class VoiceFrame:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.shape != (FRAME_LENGTH,):
            raise ValueError(f"a voice frame holds exactly {FRAME_LENGTH} samples, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("voice frame contains non-finite samples")
        if self.sample_rate <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", s)


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read 16-bit PCM samples (first channel) normalised to [-1, 1)."""
    try:
        with wave.open(str(path), "rb") as w:
            if w.getsampwidth() != 2:
                raise FormatError(
                    f"{path}: only 16-bit PCM is supported "
                    f"(sample width {8 * w.getsampwidth()} bits)"
                )
            channels = w.getnchannels()
            rate = w.getframerate()
            raw = w.readframes(w.getnframes())
    except (wave.Error, EOFError) as exc:
        raise FormatError(f"{path}: not a PCM WAV file ({exc})") from exc
    samples = np.frombuffer(raw, dtype="<i2").reshape(-1, channels)[:, 0]
    return samples.astype(np.float64) / 32768.0, rate


def write_wav(path: str | Path, samples: Sequence[float], sample_rate: int) -> None:
    """Write mono 16-bit PCM; samples are clipped to [-1, 1)."""
    pcm = np.clip(np.round(np.asarray(samples) * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(pcm.tobytes())


def frame_from_samples(samples: np.ndarray, sample_rate: int, offset: int = 0) -> VoiceFrame:
    if offset < 0:
        raise ValueError(f"offset must be non-negative, got {offset}")
    chunk = samples[offset:offset + FRAME_LENGTH]
    if len(chunk) < FRAME_LENGTH:
        raise FormatError(
            f"need {FRAME_LENGTH} samples from offset {offset}, "
            f"only {len(chunk)} available"
        )
    return VoiceFrame(chunk, sample_rate)


def power_spectrum(frame: VoiceFrame) -> np.ndarray:
    """One-sided |DFT|^2, 129 bins."""
    return np.abs(np.fft.rfft(frame.samples)) ** 2


def hz_to_bark(f):
    """Traunmüller's Bark approximation, clamped at 0."""
    f = np.asarray(f, dtype=np.float64)
    z = np.maximum(26.81 * f / (1960.0 + f) - 0.53, 0.0)
    return float(z) if z.ndim == 0 else z


def filter_centers(sample_rate: int) -> tuple[np.ndarray, float]:
    """Bark centres of the 14 filters and their spacing."""
    if sample_rate < MIN_SAMPLE_RATE:
        raise DegenerateBandError(
            f"sample rate {sample_rate} Hz leaves too little Bark range for "
            f"{N_FILTERS} filters (minimum {MIN_SAMPLE_RATE} Hz)"
        )
    delta = hz_to_bark(sample_rate / 2) / (N_FILTERS + 1)
    return delta * np.arange(1, N_FILTERS + 1), delta


def filterbank_weights(sample_rate: int, n_bins: int = FRAME_LENGTH // 2 + 1) -> np.ndarray:
    """(14, n_bins) triangular weights on the Bark axis.

    Each triangle spans two centre spacings, so neighbours overlap by half.
    Rows are scaled to sum to one; a row with no bin under it stays zero.
    """
    centers, delta = filter_centers(sample_rate)
    freqs = np.arange(n_bins) * sample_rate / (2 * (n_bins - 1))
    bark = hz_to_bark(freqs)
    w = np.maximum(0.0, 1.0 - np.abs(bark[None, :] - centers[:, None]) / delta)
    sums = w.sum(axis=1, keepdims=True)
    return np.divide(w, sums, out=np.zeros_like(w), where=sums > 0)


def bark_filterbank(power: np.ndarray, sample_rate: int) -> np.ndarray:
    power = np.asarray(power, dtype=np.float64)
    if power.shape != (FRAME_LENGTH // 2 + 1,):
        raise ValueError(f"expected a {FRAME_LENGTH // 2 + 1}-bin spectrum, got {power.shape}")
    return filterbank_weights(sample_rate) @ power


def plp_coefficients(energies: Sequence[float]) -> np.ndarray:
    e = np.asarray(energies, dtype=np.float64)
    if e.shape != (N_FILTERS,):
        raise ValueError(f"expected {N_FILTERS} energies, got {e.shape}")
    if np.any(e < 0):
        raise ValueError("filterbank energies must be non-negative")
    return np.fft.ifft(np.cbrt(e)).real


def coefficient_to_byte(c: float) -> int:
    return math.floor(abs(c) * 256) % 256


def validate_selection(selection: Sequence[int]) -> tuple[int, ...]:
    sel = tuple(int(i) for i in selection)
    if len(sel) != KEY_LENGTH:
        raise SelectionError(f"select exactly {KEY_LENGTH} coefficients, got {len(sel)}")
    if len(set(sel)) != KEY_LENGTH:
        raise SelectionError(f"selection has duplicate indices: {sel}")
    if any(not 0 <= i < N_FILTERS for i in sel):
        raise SelectionError(f"selection indices must lie in [0, {N_FILTERS - 1}]: {sel}")
    return sel


def derive_keystream(coeffs: Sequence[float], selection: Sequence[int] = DEFAULT_SELECTION) -> Keystream:
    sel = validate_selection(selection)
    c = np.asarray(coeffs, dtype=np.float64)
    if c.shape != (N_FILTERS,) or not np.all(np.isfinite(c)):
        raise ValueError(f"expected {N_FILTERS} finite PLP coefficients")
    return Keystream(tuple(coefficient_to_byte(c[i]) for i in sel))


def frame_keystream(frame: VoiceFrame, selection: Sequence[int] = DEFAULT_SELECTION) -> Keystream:
    energies = bark_filterbank(power_spectrum(frame), frame.sample_rate)
    return derive_keystream(plp_coefficients(energies), selection)


def keystream_from_wav(
    path: str | Path, offset: int = 0, selection: Sequence[int] = DEFAULT_SELECTION
) -> Keystream:
    samples, rate = read_wav(path)
    return frame_keystream(frame_from_samples(samples, rate, offset), selection)
