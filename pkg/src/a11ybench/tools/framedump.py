"""OpenCV-based frame dumper for hosts without ffmpeg.

Satisfies the frame-dumper contract: writes frame_%05d.png into --outdir at
the requested --fps. Use it as a dump template:

    python -m a11ybench.tools.framedump {video} --fps {fps} --outdir {outdir}
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


def dump_frames(video: str, fps: float, outdir: str) -> int:
    try:
        import cv2
    except ImportError:
        print("framedump requires opencv-python-headless", file=sys.stderr)
        return 3

    cap = cv2.VideoCapture(video)
    if not cap.isOpened():
        print(f"cannot open video: {video}", file=sys.stderr)
        return 2
    src_fps = cap.get(cv2.CAP_PROP_FPS) or fps
    step = src_fps / fps

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    src_idx = 0
    next_target = 0.0
    while True:
        ok, frame = cap.read()
        if not ok:
            break
        # Emit the first source frame at or past each sampling instant.
        while src_idx >= round(next_target):
            cv2.imwrite(str(out / f"frame_{written:05d}.png"), frame)
            written += 1
            next_target += step
            if step <= 0:
                break
        src_idx += 1
    cap.release()
    if written == 0:
        print(f"no frames decoded from {video}", file=sys.stderr)
        return 2
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("video")
    parser.add_argument("--fps", type=float, required=True)
    parser.add_argument("--outdir", required=True)
    args = parser.parse_args(argv)
    if args.fps <= 0:
        parser.error("--fps must be > 0")
    return dump_frames(args.video, args.fps, args.outdir)


if __name__ == "__main__":
    sys.exit(main())
