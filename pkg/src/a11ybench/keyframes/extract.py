"""Frame decoding via an external dumper, keyframe selection, and artifacts.

The frame dumper is any command template that writes numbered image files
(``frame_%05d.png``) into a temp directory at the requested fps. The default
template shells out to the FFmpeg CLI; hosts without ffmpeg can point the
template at the bundled OpenCV dumper
(``python -m a11ybench.tools.framedump``).
"""

from __future__ import annotations

import json
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image

from ..errors import A11yBenchError
from .signal import (
    DifferenceSignal,
    FrameSequence,
    detect_local_maxima,
    frame_difference_signal,
    smooth_signal,
)

K_MAX = 16

DEFAULT_DUMP_TEMPLATE: Tuple[str, ...] = (
    "ffmpeg",
    "-hide_banner",
    "-loglevel",
    "error",
    "-i",
    "{video}",
    "-vf",
    "fps={fps}",
    "-start_number",
    "0",
    "{outdir}/frame_%05d.png",
)


class DumperNotFound(A11yBenchError):
    pass


class DumperFailed(A11yBenchError):
    pass


class EmptyVideo(A11yBenchError):
    pass


class EmptySequence(A11yBenchError):
    pass


@dataclass
class KeyframeSet:
    """Selected keyframes for one video.

    ``selected`` holds (frame_index, score) in frame order; score is the
    smoothed difference value at the peak, or 0.0 for uniform-fill frames.
    """

    video_id: str
    selected: List[Tuple[int, float]]
    images: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 1 <= len(self.selected) <= K_MAX:
            raise ValueError(f"keyframe count {len(self.selected)} outside [1, {K_MAX}]")
        indices = [i for i, _ in self.selected]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("keyframe indices must be strictly increasing")

    @property
    def frame_indices(self) -> List[int]:
        return [i for i, _ in self.selected]


@dataclass
class KeyframeConfig:
    sample_fps: float = 2.0
    window_len: int = 5
    k: int = 4
    dump_template: Sequence[str] = DEFAULT_DUMP_TEMPLATE

    def validate(self) -> None:
        if self.sample_fps <= 0:
            raise ValueError("sample_fps must be > 0")
        if not 1 <= self.k <= K_MAX:
            raise ValueError(f"k must be in [1, {K_MAX}], got {self.k}")
        if self.window_len < 1 or self.window_len % 2 == 0:
            raise ValueError("window_len must be odd and >= 1")


def decode_frames(
    video_path: str | Path,
    sample_fps: float,
    dump_template: Sequence[str] = DEFAULT_DUMP_TEMPLATE,
    timeout_s: float = 300.0,
) -> FrameSequence:
    """Dump frames at ``sample_fps`` through the external dumper and load them.

    Frames get sequential indices in the sampled stream; the sequence's
    source_fps is the sampling rate, so timestamps are index / sample_fps.
    """
    video_path = Path(video_path)
    if sample_fps <= 0:
        raise ValueError("sample_fps must be > 0")
    if not video_path.is_file():
        raise DumperFailed(f"video not found: {video_path}")

    with tempfile.TemporaryDirectory(prefix="a11ybench_frames_") as tmp:
        argv = [
            part.format(video=str(video_path), fps=sample_fps, outdir=tmp)
            for part in dump_template
        ]
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=timeout_s
            )
        except FileNotFoundError as exc:
            raise DumperNotFound(f"frame dumper executable not found: {argv[0]}") from exc
        if proc.returncode != 0:
            raise DumperFailed(
                f"frame dumper exited {proc.returncode}: {proc.stderr.strip()[:2000]}"
            )

        files = sorted(Path(tmp).glob("frame_*.png"))
        if not files:
            raise EmptyVideo(f"dumper produced no frames for {video_path}")
        frames = []
        shape = None
        for f in files:
            arr = np.asarray(Image.open(f).convert("RGB"), dtype=np.uint8)
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise DumperFailed(
                    f"inconsistent frame dimensions: {arr.shape} vs {shape}"
                )
            frames.append(arr)

    return FrameSequence(
        frames=np.stack(frames),
        frame_indices=list(range(len(frames))),
        source_fps=float(sample_fps),
    )


def _uniform_fill(unselected: List[int], slots: int) -> List[int]:
    """Uniform temporal positions over the unselected frames; deduplicated."""
    m = len(unselected)
    if m == 0 or slots <= 0:
        return []
    picks: List[int] = []
    for j in range(slots):
        pos = (j + 1) * m // (slots + 1)
        idx = unselected[min(pos, m - 1)]
        if idx not in picks:
            picks.append(idx)
    return picks


def select_keyframes(
    seq: FrameSequence, peaks: List[Tuple[int, float]], k: int
) -> KeyframeSet:
    """Top-k peaks re-sorted temporally; uniform fill when peaks run short.

    A peak at signal position i selects frame i+1 (the frame after the
    change). Always returns at least one frame.
    """
    if len(seq) == 0:
        raise EmptySequence("cannot select keyframes from an empty sequence")
    if not 1 <= k <= K_MAX:
        raise ValueError(f"k must be in [1, {K_MAX}], got {k}")

    n = len(seq)
    ranked = sorted(peaks, key=lambda p: (-p[1], p[0]))[:k]
    chosen = {}
    for sig_idx, value in ranked:
        frame_idx = min(sig_idx + 1, n - 1)
        if frame_idx not in chosen:
            chosen[frame_idx] = float(value)

    remaining = k - len(chosen)
    if remaining > 0:
        unselected = [i for i in range(n) if i not in chosen]
        for idx in _uniform_fill(unselected, remaining):
            chosen[idx] = 0.0

    selected = sorted(chosen.items())
    return KeyframeSet(video_id="", selected=[(i, s) for i, s in selected])


def extract_keyframes(
    video_path: str | Path,
    video_id: str,
    config: Optional[KeyframeConfig] = None,
) -> Tuple[KeyframeSet, FrameSequence, DifferenceSignal]:
    """Full pipeline: decode, difference, smooth, peak-pick, select.

    Deterministic: identical video bytes and config produce an identical
    KeyframeSet.
    """
    config = config or KeyframeConfig()
    config.validate()
    seq = decode_frames(video_path, config.sample_fps, config.dump_template)
    if len(seq) < 2:
        kfs = select_keyframes(seq, [], config.k)
        kfs.video_id = video_id
        return kfs, seq, DifferenceSignal(values=np.zeros(0))

    sig = frame_difference_signal(seq)
    window = min(config.window_len, len(sig))
    if window % 2 == 0:
        window -= 1
    sig = smooth_signal(sig, max(window, 1))
    peaks = detect_local_maxima(sig)
    kfs = select_keyframes(seq, peaks, config.k)
    kfs.video_id = video_id
    return kfs, seq, sig


def write_keyframes(
    kfs: KeyframeSet, seq: FrameSequence, out_dir: str | Path
) -> Path:
    """Write keyframe PNGs plus the JSON sidecar; returns the sidecar path.

    Output bytes are deterministic for identical inputs.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    images: List[str] = []
    for frame_idx, _ in kfs.selected:
        name = f"keyframe_{frame_idx:05d}.png"
        Image.fromarray(seq.frames[frame_idx]).save(out_dir / name, format="PNG")
        images.append(name)
    kfs.images = images

    sidecar = {
        "video_id": kfs.video_id,
        "sample_fps": seq.source_fps,
        "keyframes": [
            {
                "frame_index": idx,
                "score": round(score, 9),
                "time_s": round(idx / seq.source_fps, 6),
                "image": img,
            }
            for (idx, score), img in zip(kfs.selected, images)
        ],
    }
    sidecar_path = out_dir / "keyframes.json"
    sidecar_path.write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return sidecar_path


def load_keyframe_sidecar(sidecar_path: str | Path) -> KeyframeSet:
    """Rehydrate a KeyframeSet from its sidecar; image paths become absolute."""
    sidecar_path = Path(sidecar_path)
    obj = json.loads(sidecar_path.read_text(encoding="utf-8"))
    selected = [(kf["frame_index"], kf["score"]) for kf in obj["keyframes"]]
    images = [str(sidecar_path.parent / kf["image"]) for kf in obj["keyframes"]]
    return KeyframeSet(video_id=obj["video_id"], selected=selected, images=images)
