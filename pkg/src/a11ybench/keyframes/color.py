"""sRGB (8-bit) to CIE 1976 L*u*v* conversion under the D65 white point.

Frame differencing runs in L*u*v* because Euclidean-ish distances there
track perceived change better than raw RGB deltas.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

# sRGB linear-light -> XYZ, D65 reference white, 2-degree observer.
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)

_WHITE = _SRGB_TO_XYZ @ np.ones(3)  # XYZ of sRGB white; Yn ~= 1.0
_XN, _YN, _ZN = _WHITE

_WHITE_DENOM = _XN + 15.0 * _YN + 3.0 * _ZN
_UN_PRIME = 4.0 * _XN / _WHITE_DENOM
_VN_PRIME = 9.0 * _YN / _WHITE_DENOM

# CIE constants for the L* cube-root / linear split.
_EPS = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0


def _linearize(channel: np.ndarray) -> np.ndarray:
    """Undo the sRGB transfer function; input in [0, 1]."""
    low = channel <= 0.04045
    out = np.empty_like(channel)
    out[low] = channel[low] / 12.92
    out[~low] = ((channel[~low] + 0.055) / 1.055) ** 2.4
    return out


def frames_to_luv(rgb: np.ndarray) -> np.ndarray:
    """Convert an array of 8-bit RGB pixels (shape ``(..., 3)``) to L*u*v*.

    L is in [0, 100]; u and v are signed chromaticity offsets. Black maps
    to (0, 0, 0) exactly.
    """
    rgb = np.asarray(rgb)
    if rgb.shape[-1] != 3:
        raise ValueError(f"expected trailing RGB axis of size 3, got shape {rgb.shape}")
    scaled = rgb.astype(np.float64) / 255.0
    linear = _linearize(scaled)
    xyz = linear @ _SRGB_TO_XYZ.T

    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    y_rel = y / _YN
    lstar = np.where(y_rel > _EPS, 116.0 * np.cbrt(y_rel) - 16.0, _KAPPA * y_rel)

    denom = x + 15.0 * y + 3.0 * z
    # u'/v' are 0/0 at pure black; the L=0 factor zeroes u and v anyway.
    safe = np.where(denom == 0.0, 1.0, denom)
    u_prime = np.where(denom == 0.0, _UN_PRIME, 4.0 * x / safe)
    v_prime = np.where(denom == 0.0, _VN_PRIME, 9.0 * y / safe)

    u = 13.0 * lstar * (u_prime - _UN_PRIME)
    v = 13.0 * lstar * (v_prime - _VN_PRIME)
    return np.stack([lstar, u, v], axis=-1)


def rgb_to_luv(pixel: Tuple[int, int, int]) -> Tuple[float, float, float]:
    """Convert a single 8-bit (r, g, b) pixel to (L, u, v). Total function."""
    r, g, b = pixel
    for c in (r, g, b):
        if not 0 <= c <= 255:
            raise ValueError(f"channel value {c} outside [0, 255]")
    luv = frames_to_luv(np.array([[r, g, b]], dtype=np.float64))[0]
    return float(luv[0]), float(luv[1]), float(luv[2])
