"""Detection battery: visual comparison, file size, unique colors, pairs-of-values
chi-square, whitespace scan, plus attack-class selection and LSB scrubbing."""

import enum
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DimensionMismatch, InsufficientSamples, NoInput
from .image_stego import PixelImage
from .report import AnalysisReport, DetectorResult
from .text_stego import gap_counts


class AttackClass(enum.Enum):
    KNOWN_CARRIER = "KnownCarrier"
    STEGO_ONLY = "StegoOnly"
    KNOWN_MESSAGE = "KnownMessage"
    KNOWN_STEGANOGRAPHY = "KnownSteganography"


@dataclass(frozen=True)
class Thresholds:
    chi_square_p: float = 0.95
    chi_square_min_samples: int = 1024
    whitespace_fraction: float = 0.05
    changed_fraction: float = 0.0
    unique_color_delta: int = 0
    file_size_delta: int = 0


def visual_diff(cover, stego):
    """Boolean map of differing samples and their count."""
    if cover.samples.shape != stego.samples.shape:
        raise DimensionMismatch(f"{cover.samples.shape} vs {stego.samples.shape}")
    diff = cover.samples != stego.samples
    return diff, int(diff.sum())


def file_size_delta(cover_bytes, suspect_bytes):
    return len(suspect_bytes) - len(cover_bytes)


def unique_color_count(image):
    px = image.samples.reshape(-1, image.channels)
    if image.channels == 1:
        return int(np.unique(px).size)
    packed = (px[:, 0].astype(np.uint32) << 16) | (px[:, 1].astype(np.uint32) << 8) | px[:, 2]
    return int(np.unique(packed).size)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int


def lsb_chi_square(image, min_samples=1024):
    """Pairs-of-values test over the sample histogram.

    Each pair (2k, 2k+1) with expected count >= 5 contributes
    ``(h[2k] - e)^2 / e`` with ``e = (h[2k] + h[2k+1]) / 2``. LSB embedding
    equalizes the pairs, pushing the p-value towards 1.
    """
    samples = image.samples.reshape(-1) if isinstance(image, PixelImage) else np.asarray(image).reshape(-1)
    if samples.size < min_samples:
        raise InsufficientSamples(f"{samples.size} samples, need {min_samples}")
    hist = np.bincount(samples.astype(np.int64), minlength=256)[:256]
    even, odd = hist[0::2].astype(np.float64), hist[1::2].astype(np.float64)
    expected = (even + odd) / 2
    keep = expected >= 5
    if keep.sum() < 2:
        return ChiSquareResult(0.0, 1.0, 0)
    stat = float((((even - expected) ** 2)[keep] / expected[keep]).sum())
    dof = int(keep.sum()) - 1
    return ChiSquareResult(stat, float(stats.chi2.sf(stat, dof)), dof)


def whitespace_scan(text, fraction=0.05):
    """Histogram of spaces per inter-word gap; flags when >= ``fraction`` of gaps hold 2+ spaces."""
    counts = gap_counts(text)
    hist = Counter(counts)
    if not counts:
        return hist, False
    wide = sum(n for spaces, n in hist.items() if spaces >= 2)
    return hist, wide / len(counts) >= fraction


def lsb_scrub(image, seed=0):
    """Overwrite every LSB with seeded random bits, destroying any LSB payload."""
    rng = np.random.default_rng(seed)
    flat = image.flat()
    return image.replace((flat & 0xFE) | rng.integers(0, 2, flat.size, dtype=np.uint8))


_RUNNABLE = {
    AttackClass.STEGO_ONLY: ("lsb_chi_square", "unique_color_count", "whitespace_scan", "header_anomaly_scan"),
    AttackClass.KNOWN_CARRIER: ("visual_diff", "file_size_delta", "unique_color_delta",
                                "lsb_chi_square", "whitespace_scan", "header_anomaly_scan"),
    AttackClass.KNOWN_MESSAGE: ("lsb_chi_square", "unique_color_count", "whitespace_scan",
                                "header_anomaly_scan", "message_search"),
    AttackClass.KNOWN_STEGANOGRAPHY: ("lsb_chi_square", "unique_color_count", "whitespace_scan",
                                      "header_anomaly_scan", "extract"),
}


@dataclass(frozen=True)
class AttackPlan:
    attack: AttackClass
    detectors: tuple


def classify_attack(stego=None, cover=None, message=None, algorithm=None):
    """Map the available inputs to an attack class and the detectors it can run."""
    if stego is None:
        raise NoInput("a suspect medium is required")
    if algorithm is not None:
        attack = AttackClass.KNOWN_STEGANOGRAPHY
    elif message is not None:
        attack = AttackClass.KNOWN_MESSAGE
    elif cover is not None:
        attack = AttackClass.KNOWN_CARRIER
    else:
        attack = AttackClass.STEGO_ONLY
    detectors = _RUNNABLE[attack]
    if cover is not None and attack is not AttackClass.KNOWN_CARRIER:
        detectors = detectors + ("visual_diff", "file_size_delta", "unique_color_delta")
    return AttackPlan(attack, detectors)


def analyze_image(stego, cover=None, thresholds=Thresholds(), stego_bytes=None, cover_bytes=None):
    report = AnalysisReport()
    inputs = ("stego",) if cover is None else ("cover", "stego")
    if stego.size >= thresholds.chi_square_min_samples:
        chi = lsb_chi_square(stego, thresholds.chi_square_min_samples)
        report.add(DetectorResult("lsb_chi_square_p", chi.p_value, thresholds.chi_square_p,
                                  chi.p_value > thresholds.chi_square_p, ("stego",),
                                  note=f"chi2={chi.statistic:.6g} dof={chi.dof}"))
    else:
        report.notes.append("lsb_chi_square skipped: insufficient samples")
    colors = unique_color_count(stego)
    if cover is None:
        report.add(DetectorResult("unique_colors", colors, float("nan"), False, ("stego",)))
        return report
    _, changed = visual_diff(cover, stego)
    frac = changed / stego.size
    report.add(DetectorResult("changed_fraction", frac, thresholds.changed_fraction,
                              frac > thresholds.changed_fraction, inputs))
    delta = colors - unique_color_count(cover)
    report.add(DetectorResult("unique_color_delta", delta, thresholds.unique_color_delta,
                              abs(delta) > thresholds.unique_color_delta, inputs))
    if stego_bytes is not None and cover_bytes is not None:
        size = file_size_delta(cover_bytes, stego_bytes)
        report.add(DetectorResult("file_size_delta", size, thresholds.file_size_delta,
                                  abs(size) > thresholds.file_size_delta, inputs))
    return report


def analyze_text(text, thresholds=Thresholds()):
    report = AnalysisReport()
    hist, flag = whitespace_scan(text, thresholds.whitespace_fraction)
    total = sum(hist.values())
    wide = sum(n for s, n in hist.items() if s >= 2)
    report.add(DetectorResult("wide_gap_fraction", wide / total if total else 0.0,
                              thresholds.whitespace_fraction, flag, ("stego",)))
    return report
