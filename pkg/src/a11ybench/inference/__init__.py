"""Clients for local multimodal inference backends plus a deterministic stub server."""

from .client import (
    ApiFlavor,
    BackendConfig,
    BackendClient,
    BackendError,
    BackendIdentity,
    ConnectError,
    GenerationResult,
    StreamAborted,
    Timeout,
    TokenTimingTrace,
    generate,
    health_check,
)
from .images import ImagePayload, UnsupportedFormat, encode_image_payload

__all__ = [
    "ApiFlavor",
    "BackendConfig",
    "BackendClient",
    "BackendError",
    "BackendIdentity",
    "ConnectError",
    "GenerationResult",
    "StreamAborted",
    "Timeout",
    "TokenTimingTrace",
    "generate",
    "health_check",
    "ImagePayload",
    "UnsupportedFormat",
    "encode_image_payload",
]
