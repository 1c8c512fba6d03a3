"""Keyframe images as request-ready base64 payloads."""

from __future__ import annotations

import base64
import io
from dataclasses import dataclass
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from ..errors import A11yBenchError, MissingFile

DEFAULT_MAX_EDGE = 1024

_MIME = {"PNG": "image/png", "JPEG": "image/jpeg"}


class UnsupportedFormat(A11yBenchError):
    pass


@dataclass(frozen=True)
class ImagePayload:
    base64_data: str
    mime_type: str
    width: int
    height: int

    @property
    def data_url(self) -> str:
        return f"data:{self.mime_type};base64,{self.base64_data}"

    def decode(self) -> Image.Image:
        return Image.open(io.BytesIO(base64.b64decode(self.base64_data)))


def encode_image_payload(path: str | Path, max_edge: int = DEFAULT_MAX_EDGE) -> ImagePayload:
    """Encode a PNG or JPEG for embedding in a backend request.

    Images whose longest side exceeds ``max_edge`` are downscaled to it,
    preserving aspect ratio, before encoding.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"image not found: {path}")
    try:
        img = Image.open(path)
        img.load()
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"not a decodable image: {path}") from exc
    if img.format not in _MIME:
        raise UnsupportedFormat(f"unsupported image format {img.format!r} for {path}")
    fmt = img.format

    width, height = img.size
    longest = max(width, height)
    if longest > max_edge:
        scale = max_edge / longest
        new_size = (max(1, round(width * scale)), max(1, round(height * scale)))
        img = img.resize(new_size, Image.LANCZOS)
        width, height = img.size

    buf = io.BytesIO()
    if fmt == "JPEG" and img.mode not in ("RGB", "L"):
        img = img.convert("RGB")
    img.save(buf, format=fmt)
    return ImagePayload(
        base64_data=base64.b64encode(buf.getvalue()).decode("ascii"),
        mime_type=_MIME[fmt],
        width=width,
        height=height,
    )
