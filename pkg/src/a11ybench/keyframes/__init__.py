"""Adaptive keyframe extraction.

Per-frame conversion to CIE L*u*v*, inter-frame mean absolute difference,
Hanning-window smoothing, local-maxima detection, and top-K selection with
a uniform-sampling fallback for static footage.
"""

from .color import rgb_to_luv, frames_to_luv
from .signal import (
    DifferenceSignal,
    FrameSequence,
    TooFewFrames,
    EvenWindow,
    WindowTooLarge,
    frame_difference_signal,
    smooth_signal,
    detect_local_maxima,
)
from .extract import (
    KeyframeSet,
    KeyframeConfig,
    DumperNotFound,
    DumperFailed,
    EmptyVideo,
    EmptySequence,
    DEFAULT_DUMP_TEMPLATE,
    decode_frames,
    select_keyframes,
    extract_keyframes,
    write_keyframes,
    load_keyframe_sidecar,
)

__all__ = [
    "rgb_to_luv",
    "frames_to_luv",
    "DifferenceSignal",
    "FrameSequence",
    "TooFewFrames",
    "EvenWindow",
    "WindowTooLarge",
    "frame_difference_signal",
    "smooth_signal",
    "detect_local_maxima",
    "KeyframeSet",
    "KeyframeConfig",
    "DumperNotFound",
    "DumperFailed",
    "EmptyVideo",
    "EmptySequence",
    "DEFAULT_DUMP_TEMPLATE",
    "decode_frames",
    "select_keyframes",
    "extract_keyframes",
    "write_keyframes",
    "load_keyframe_sidecar",
]
