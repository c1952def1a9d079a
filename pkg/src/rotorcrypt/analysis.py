"""Cipher-quality statistics: entropy, histogram, column means, change rate."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, EmptyImageError
from .imaging import GrayImage

# Upper 1% point of chi-square with 255 degrees of freedom.
CHI2_255_CRITICAL_1PCT = 310.457


def histogram(img: GrayImage) -> np.ndarray:
    return np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)


def entropy(img: GrayImage) -> float:
    """Shannon entropy of the intensity distribution in bits per pixel."""
    if img.pixels.size == 0:
        raise EmptyImageError("entropy of an empty image is undefined")
    counts = histogram(img)
    p = counts[counts > 0] / img.pixels.size
    # abs() folds the -0.0 produced by a single-valued image
    return abs(float((p * np.log2(p)).sum()))


def column_means(img: GrayImage) -> np.ndarray:
    if img.height == 0:
        raise EmptyImageError("column means need at least one row")
    return img.pixels.mean(axis=0, dtype=np.float64)


def row_means(img: GrayImage) -> np.ndarray:
    if img.width == 0:
        raise EmptyImageError("row means need at least one column")
    return img.pixels.mean(axis=1, dtype=np.float64)


def pixel_change_rate(a: GrayImage, b: GrayImage) -> float:
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatchError(
            f"image shapes differ: {a.pixels.shape} vs {b.pixels.shape}"
        )
    if a.pixels.size == 0:
        return 0.0
    return float(np.count_nonzero(a.pixels != b.pixels)) / a.pixels.size


def chi_square(img: GrayImage) -> float:
    """Chi-square statistic of the histogram against a uniform distribution."""
    if img.pixels.size == 0:
        raise EmptyImageError("chi-square of an empty image is undefined")
    counts = histogram(img)
    expected = img.pixels.size / 256
    return float(((counts - expected) ** 2).sum() / expected)


@dataclass
class AnalysisReport:
    entropy: float
    histogram: list[int]
    column_means: list[float]
    pixel_change_rate: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "entropy": self.entropy,
            "histogram": self.histogram,
            "column_means": self.column_means,
            "pixel_change_rate": self.pixel_change_rate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["intensity", "count"])
        writer.writerows(enumerate(self.histogram))
        return buf.getvalue()


def analyze(img: GrayImage, compare: GrayImage | None = None) -> AnalysisReport:
    return AnalysisReport(
        entropy=entropy(img),
        histogram=histogram(img).tolist(),
        column_means=column_means(img).tolist(),
        pixel_change_rate=None if compare is None else pixel_change_rate(img, compare),
    )
