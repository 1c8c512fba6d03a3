"""Streaming client for local OpenAI-compatible and llama.cpp server backends.

All trace timestamps come from the monotonic clock; wall-clock time is never
used for durations. Token counting equals the number of streamed content
events, matching what the serving layer reports.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

import httpx

from ..errors import A11yBenchError
from .images import ImagePayload, encode_image_payload


class ConnectError(A11yBenchError):
    pass


class Timeout(A11yBenchError):
    pass


class BackendError(A11yBenchError):
    """Non-2xx response; message carries status and body excerpt."""


class StreamAborted(A11yBenchError):
    """Stream died mid-generation; partial text kept for diagnostics."""

    def __init__(self, message: str, partial_text: str = ""):
        super().__init__(message)
        self.partial_text = partial_text


class ApiFlavor(str, Enum):
    OPENAI_CHAT = "openai_chat"
    LLAMA_SERVER = "llama_server"


@dataclass
class BackendConfig:
    endpoint_url: str
    model_name: str
    api_flavor: ApiFlavor = ApiFlavor.OPENAI_CHAT
    max_tokens: int = 512
    temperature: float = 0.0
    timeout_s: float = 120.0
    max_retries: int = 2
    stream: bool = True
    seed: Optional[int] = None
    max_inflight: int = 4

    def __post_init__(self) -> None:
        if isinstance(self.api_flavor, str):
            self.api_flavor = ApiFlavor(self.api_flavor)
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")
        self.endpoint_url = self.endpoint_url.rstrip("/")

    def snapshot(self) -> Dict[str, Any]:
        return {
            "endpoint_url": self.endpoint_url,
            "model_name": self.model_name,
            "api_flavor": self.api_flavor.value,
            "max_tokens": self.max_tokens,
            "temperature": self.temperature,
            "timeout_s": self.timeout_s,
            "max_retries": self.max_retries,
            "stream": self.stream,
            "seed": self.seed,
        }


@dataclass
class TokenTimingTrace:
    """Raw monotonic-clock observations behind TTFT/TPOT derivations."""

    request_start: float
    first_token_at: float
    token_arrivals: List[float] = field(default_factory=list)
    prompt_eval_ms: Optional[float] = None
    load_ms: Optional[float] = None

    def __post_init__(self) -> None:
        if self.token_arrivals:
            if any(b < a for a, b in zip(self.token_arrivals, self.token_arrivals[1:])):
                raise ValueError("token_arrivals must be non-decreasing")
            if self.first_token_at != self.token_arrivals[0]:
                raise ValueError("first_token_at must equal the first arrival")

    @property
    def ttft_ms(self) -> float:
        return (self.first_token_at - self.request_start) * 1000.0

    def arrivals_rel_ms(self) -> List[float]:
        return [(a - self.request_start) * 1000.0 for a in self.token_arrivals]


@dataclass
class GenerationResult:
    video_id: str
    strategy: str
    text: str
    tokens_out: int
    trace: TokenTimingTrace
    backend: Dict[str, Any]
    flags: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.tokens_out != len(self.trace.token_arrivals):
            raise ValueError("tokens_out must equal the number of token arrivals")

    def to_json_obj(self) -> Dict[str, Any]:
        return {
            "video_id": self.video_id,
            "strategy": self.strategy,
            "text": self.text,
            "tokens_out": self.tokens_out,
            "ttft_ms": self.trace.ttft_ms,
            "arrivals_rel_ms": self.trace.arrivals_rel_ms(),
            "prompt_eval_ms": self.trace.prompt_eval_ms,
            "load_ms": self.trace.load_ms,
            "backend": self.backend,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class BackendIdentity:
    model_name: str
    context_length: Optional[int] = None


def parse_openai_event(data: str) -> Tuple[Optional[str], bool, Optional[Dict[str, Any]]]:
    """Parse one OpenAI chat-completions SSE payload.

    Returns (content_delta, done, timings). Transport parsing is
    deterministic: replaying a transcript reproduces identical output.
    """
    if data.strip() == "[DONE]":
        return None, True, None
    obj = json.loads(data)
    timings = obj.get("timings")
    choices = obj.get("choices") or []
    if not choices:
        return None, False, timings
    choice = choices[0]
    delta = choice.get("delta") or {}
    content = delta.get("content")
    done = choice.get("finish_reason") is not None
    return (content if content else None), done, timings


def parse_llama_event(data: str) -> Tuple[Optional[str], bool, Optional[Dict[str, Any]]]:
    """Parse one llama.cpp server completion SSE payload."""
    obj = json.loads(data)
    content = obj.get("content")
    done = bool(obj.get("stop", False))
    timings = obj.get("timings")
    return (content if content else None), done, timings


def replay_transcript(lines: Iterable[str], flavor: ApiFlavor) -> Tuple[str, int]:
    """Run recorded SSE lines through the parser; returns (text, tokens_out)."""
    parser = parse_openai_event if flavor == ApiFlavor.OPENAI_CHAT else parse_llama_event
    parts: List[str] = []
    for line in lines:
        if not line.startswith("data:"):
            continue
        content, done, _ = parser(line[len("data:"):].strip())
        if content:
            parts.append(content)
        if done:
            break
    return "".join(parts), len(parts)


def _extract_timings(trace: TokenTimingTrace, timings: Optional[Dict[str, Any]]) -> None:
    if not timings:
        return
    for key in ("prompt_ms", "prompt_eval_ms"):
        if key in timings and timings[key] is not None:
            trace.prompt_eval_ms = float(timings[key])
            break
    for key in ("load_ms", "model_load_ms"):
        if key in timings and timings[key] is not None:
            trace.load_ms = float(timings[key])
            break


class BackendClient:
    """Shareable client; a per-backend semaphore caps in-flight requests.

    Perf runs construct the config with ``max_inflight=1`` so contention
    cannot corrupt timing.
    """

    def __init__(self, cfg: BackendConfig):
        self.cfg = cfg
        self._sem = threading.Semaphore(cfg.max_inflight)

    # -- request construction -------------------------------------------------

    def _chat_body(self, system_text: str, user_text: str,
                   payloads: List[ImagePayload], stream: bool) -> Dict[str, Any]:
        content: List[Dict[str, Any]] = [{"type": "text", "text": user_text}]
        for p in payloads:
            content.append({"type": "image_url", "image_url": {"url": p.data_url}})
        body: Dict[str, Any] = {
            "model": self.cfg.model_name,
            "messages": [
                {"role": "system", "content": system_text},
                {"role": "user", "content": content},
            ],
            "max_tokens": self.cfg.max_tokens,
            "temperature": self.cfg.temperature,
            "stream": stream,
        }
        if self.cfg.seed is not None:
            body["seed"] = self.cfg.seed
        return body

    def _llama_body(self, system_text: str, user_text: str,
                    payloads: List[ImagePayload], stream: bool) -> Dict[str, Any]:
        body: Dict[str, Any] = {
            "prompt": f"{system_text}\n\n{user_text}",
            "n_predict": self.cfg.max_tokens,
            "temperature": self.cfg.temperature,
            "stream": stream,
            "image_data": [
                {"data": p.base64_data, "id": 10 + i} for i, p in enumerate(payloads)
            ],
        }
        if self.cfg.seed is not None:
            body["seed"] = self.cfg.seed
        return body

    def _route(self) -> str:
        if self.cfg.api_flavor == ApiFlavor.OPENAI_CHAT:
            return f"{self.cfg.endpoint_url}/v1/chat/completions"
        return f"{self.cfg.endpoint_url}/completion"

    # -- generation ------------------------------------------------------------

    def generate(self, bundle, images, video_id: Optional[str] = None) -> GenerationResult:
        """Send one prompt + keyframe images; stream tokens and record timing.

        ``bundle`` needs ``system_text``/``user_text`` attributes (a
        PromptBundle); ``images`` is a list of image file paths or
        ImagePayloads. Retries cover connection-phase failures only, never a
        stream already in progress.
        """
        payloads = [
            img if isinstance(img, ImagePayload) else encode_image_payload(img)
            for img in images
        ]
        last_err: Optional[A11yBenchError] = None
        with self._sem:
            for attempt in range(self.cfg.max_retries + 1):
                try:
                    return self._generate_once(bundle, payloads, video_id)
                except ConnectError as exc:
                    last_err = exc
                    if attempt < self.cfg.max_retries:
                        time.sleep(min(0.2 * (attempt + 1), 1.0))
        assert last_err is not None
        raise last_err

    def _generate_once(self, bundle, payloads: List[ImagePayload],
                       video_id: Optional[str]) -> GenerationResult:
        flavor = self.cfg.api_flavor
        stream = self.cfg.stream
        if flavor == ApiFlavor.OPENAI_CHAT:
            body = self._chat_body(bundle.system_text, bundle.user_text, payloads, stream)
            parser = parse_openai_event
        else:
            body = self._llama_body(bundle.system_text, bundle.user_text, payloads, stream)
            parser = parse_llama_event

        vid = video_id if video_id is not None else getattr(bundle, "video_id", "")
        strategy = getattr(bundle, "strategy", None)
        strategy_name = getattr(strategy, "value", str(strategy)) if strategy else ""

        if not stream:
            return self._generate_blocking(body, vid, strategy_name)

        parts: List[str] = []
        arrivals: List[float] = []
        timings: Optional[Dict[str, Any]] = None
        start = time.perf_counter()
        try:
            with httpx.Client(timeout=self.cfg.timeout_s) as client:
                with client.stream("POST", self._route(), json=body) as resp:
                    if resp.status_code != 200:
                        detail = resp.read().decode("utf-8", errors="replace")
                        raise BackendError(
                            f"backend returned {resp.status_code}: {detail[:2000]}"
                        )
                    for line in resp.iter_lines():
                        if not line.startswith("data:"):
                            continue
                        content, done, event_timings = parser(line[len("data:"):].strip())
                        if event_timings:
                            timings = event_timings
                        if content:
                            arrivals.append(time.perf_counter())
                            parts.append(content)
                        if done and line.strip().endswith("[DONE]"):
                            break
                        if done and flavor == ApiFlavor.LLAMA_SERVER:
                            break
        except httpx.ConnectError as exc:
            raise ConnectError(f"cannot reach backend at {self.cfg.endpoint_url}: {exc}") from exc
        except httpx.ConnectTimeout as exc:
            raise ConnectError(f"connect timeout for {self.cfg.endpoint_url}: {exc}") from exc
        except httpx.TimeoutException as exc:
            if arrivals:
                raise StreamAborted(
                    f"stream timed out after {len(arrivals)} tokens", "".join(parts)
                ) from exc
            raise Timeout(f"no response within {self.cfg.timeout_s}s") from exc
        except httpx.HTTPError as exc:
            if arrivals:
                raise StreamAborted(
                    f"stream aborted after {len(arrivals)} tokens: {exc}", "".join(parts)
                ) from exc
            raise ConnectError(f"transport failure before first token: {exc}") from exc

        if not arrivals:
            raise BackendError("backend streamed no content tokens")

        trace = TokenTimingTrace(
            request_start=start,
            first_token_at=arrivals[0],
            token_arrivals=arrivals,
        )
        _extract_timings(trace, timings)
        return GenerationResult(
            video_id=vid,
            strategy=strategy_name,
            text="".join(parts),
            tokens_out=len(arrivals),
            trace=trace,
            backend=self.cfg.snapshot(),
        )

    def _generate_blocking(self, body: Dict[str, Any], vid: str,
                           strategy_name: str) -> GenerationResult:
        """Non-streaming fallback: one arrival, TTFT = total time."""
        start = time.perf_counter()
        try:
            resp = httpx.post(self._route(), json=body, timeout=self.cfg.timeout_s)
        except httpx.ConnectError as exc:
            raise ConnectError(f"cannot reach backend at {self.cfg.endpoint_url}: {exc}") from exc
        except httpx.TimeoutException as exc:
            raise Timeout(f"no response within {self.cfg.timeout_s}s") from exc
        if resp.status_code != 200:
            raise BackendError(f"backend returned {resp.status_code}: {resp.text[:2000]}")
        done_at = time.perf_counter()
        obj = resp.json()
        if self.cfg.api_flavor == ApiFlavor.OPENAI_CHAT:
            text = (obj.get("choices") or [{}])[0].get("message", {}).get("content") or ""
        else:
            text = obj.get("content") or ""
        if not text:
            raise BackendError("backend returned an empty completion")
        trace = TokenTimingTrace(
            request_start=start, first_token_at=done_at, token_arrivals=[done_at]
        )
        _extract_timings(trace, obj.get("timings"))
        return GenerationResult(
            video_id=vid,
            strategy=strategy_name,
            text=text,
            tokens_out=1,
            trace=trace,
            backend=self.cfg.snapshot(),
            flags=["low_resolution_timing"],
        )

    # -- health ------------------------------------------------------------------

    def health_check(self) -> BackendIdentity:
        """Trivial round-trip; succeeds iff it completes within the timeout."""
        base = self.cfg.endpoint_url
        try:
            if self.cfg.api_flavor == ApiFlavor.OPENAI_CHAT:
                resp = httpx.get(f"{base}/v1/models", timeout=self.cfg.timeout_s)
                if resp.status_code != 200:
                    raise BackendError(f"health check returned {resp.status_code}")
                data = resp.json().get("data") or []
                name = data[0].get("id") if data else self.cfg.model_name
                ctx = data[0].get("context_length") if data else None
                return BackendIdentity(model_name=name or self.cfg.model_name,
                                       context_length=ctx)
            resp = httpx.get(f"{base}/props", timeout=self.cfg.timeout_s)
            if resp.status_code == 200:
                props = resp.json()
                ctx = (props.get("default_generation_settings") or {}).get("n_ctx")
                name = props.get("model_path") or self.cfg.model_name
                return BackendIdentity(model_name=name, context_length=ctx)
            resp = httpx.get(f"{base}/health", timeout=self.cfg.timeout_s)
            if resp.status_code != 200:
                raise BackendError(f"health check returned {resp.status_code}")
            return BackendIdentity(model_name=self.cfg.model_name)
        except httpx.ConnectError as exc:
            raise ConnectError(f"cannot reach backend at {base}: {exc}") from exc
        except httpx.TimeoutException as exc:
            raise Timeout(f"health check exceeded {self.cfg.timeout_s}s") from exc


def generate(bundle, images, cfg: BackendConfig) -> GenerationResult:
    return BackendClient(cfg).generate(bundle, images)


def health_check(cfg: BackendConfig) -> BackendIdentity:
    return BackendClient(cfg).health_check()
