"""Inter-frame difference signal: construction, smoothing, peak detection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..errors import A11yBenchError
from .color import frames_to_luv


class TooFewFrames(A11yBenchError):
    pass


class EvenWindow(A11yBenchError):
    pass


class WindowTooLarge(A11yBenchError):
    pass


@dataclass
class FrameSequence:
    """Frames sampled from one video, in source order.

    ``frames`` is a ``(n, height, width, 3)`` uint8 RGB array. ``frame_indices``
    are the positions in the sampled stream (strictly increasing);
    ``source_fps`` is the rate of that stream, so index / source_fps is the
    timestamp.
    """

    frames: np.ndarray
    frame_indices: List[int]
    source_fps: float

    def __post_init__(self) -> None:
        if self.frames.ndim != 4 or self.frames.shape[-1] != 3:
            raise ValueError(f"frames must be (n, h, w, 3), got {self.frames.shape}")
        if len(self.frame_indices) != len(self.frames):
            raise ValueError("frame_indices length must match frame count")
        if any(b <= a for a, b in zip(self.frame_indices, self.frame_indices[1:])):
            raise ValueError("frame_indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.frames)


@dataclass
class DifferenceSignal:
    """Per-transition change magnitudes; length = frame count - 1."""

    values: np.ndarray
    smoothed: Optional[np.ndarray] = field(default=None)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("difference signal must be 1-D")
        if np.any(self.values < 0):
            raise ValueError("difference values must be non-negative")
        if self.smoothed is not None:
            self.smoothed = np.asarray(self.smoothed, dtype=np.float64)
            if self.smoothed.shape != self.values.shape:
                raise ValueError("smoothed must have the same length as values")

    def __len__(self) -> int:
        return len(self.values)


def frame_difference_signal(seq: FrameSequence) -> DifferenceSignal:
    """Mean per-pixel absolute L*u*v* difference between consecutive frames.

    values[i] = mean over pixels of |dL| + |du| + |dv| between frame i and
    frame i+1. Deterministic.
    """
    if len(seq) < 2:
        raise TooFewFrames(f"need at least 2 frames, got {len(seq)}")
    luv = frames_to_luv(seq.frames)
    deltas = np.abs(np.diff(luv, axis=0))  # (n-1, h, w, 3)
    per_pixel = deltas.sum(axis=-1)
    values = per_pixel.mean(axis=(1, 2))
    return DifferenceSignal(values=values)


def hanning_kernel(window_len: int) -> np.ndarray:
    """Raised-cosine coefficients w[n] = 0.5(1 - cos(2*pi*n/(N-1))), unit sum."""
    if window_len == 1:
        return np.ones(1)
    window = np.hanning(window_len)
    return window / window.sum()


def smooth_signal(sig: DifferenceSignal, window_len: int) -> DifferenceSignal:
    """Convolve with a normalized Hanning window; edges by reflection.

    Unit-sum kernel + reflection padding preserve constants and never change
    signal length; non-negative input stays non-negative.
    """
    n = len(sig)
    if window_len < 1 or window_len % 2 == 0:
        raise EvenWindow(f"window_len must be odd and >= 1, got {window_len}")
    if window_len > n:
        raise WindowTooLarge(f"window_len {window_len} exceeds signal length {n}")
    if window_len == 1:
        return DifferenceSignal(values=sig.values.copy(), smoothed=sig.values.copy())
    kernel = hanning_kernel(window_len)
    pad = window_len // 2
    padded = np.pad(sig.values, pad, mode="reflect")
    smoothed = np.convolve(padded, kernel, mode="valid")
    # Clamp tiny negative residue from float convolution of ~0 values.
    smoothed = np.maximum(smoothed, 0.0)
    return DifferenceSignal(values=sig.values.copy(), smoothed=smoothed)


def detect_local_maxima(sig: DifferenceSignal) -> List[Tuple[int, float]]:
    """Interior strict local maxima of the smoothed signal.

    A plateau higher than both shoulders reports its leftmost index. Returns
    (index, value) pairs in index order; may be empty.
    """
    if sig.smoothed is None:
        raise ValueError("signal must be smoothed before peak detection")
    s = sig.smoothed
    n = len(s)
    peaks: List[Tuple[int, float]] = []
    i = 1
    while i < n - 1:
        if s[i] > s[i - 1]:
            # Walk the (possibly length-1) plateau starting at i.
            j = i
            while j + 1 < n and s[j + 1] == s[i]:
                j += 1
            if j + 1 < n and s[i] > s[j + 1]:
                peaks.append((i, float(s[i])))
            i = j + 1
        else:
            i += 1
    return peaks
