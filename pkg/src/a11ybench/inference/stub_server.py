"""Deterministic OpenAI-flavor stub backend with scriptable timing.

Serves /v1/chat/completions (streaming SSE and blocking), /v1/models, and
/health. Each request consumes the next scripted response, falling back to
the default script when the queue is empty. Token timing is controlled by
per-script delays, which makes TTFT/TPOT assertions exact up to scheduler
jitter.
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Dict, List, Optional


def split_tokens(text: str) -> List[str]:
    """Whitespace-preserving token split so concatenation restores the text."""
    return re.findall(r"\S+\s*", text)


@dataclass
class StubScript:
    """One scripted response: content plus timing and failure knobs."""

    text: str = "a person walks through a bright room ."
    tokens: Optional[List[str]] = None
    first_token_delay_s: float = 0.0
    inter_token_delay_s: float = 0.0
    status_code: int = 200
    error_body: str = '{"error": "stub scripted failure"}'
    abort_after_tokens: Optional[int] = None
    timings: Optional[Dict[str, float]] = None
    health_delay_s: float = 0.0

    def token_list(self) -> List[str]:
        return self.tokens if self.tokens is not None else split_tokens(self.text)


@dataclass
class RecordedRequest:
    path: str
    body: Dict[str, Any] = field(default_factory=dict)

    @property
    def image_count(self) -> int:
        count = 0
        for message in self.body.get("messages", []):
            content = message.get("content")
            if isinstance(content, list):
                count += sum(1 for part in content if part.get("type") == "image_url")
        return count

    @property
    def user_text(self) -> str:
        for message in self.body.get("messages", []):
            content = message.get("content")
            if isinstance(content, list):
                for part in content:
                    if part.get("type") == "text":
                        return part["text"]
            elif message.get("role") == "user" and isinstance(content, str):
                return content
        return ""


class _Handler(BaseHTTPRequestHandler):
    server: "StubServer"

    def log_message(self, fmt: str, *args: Any) -> None:  # silence request logging
        pass

    def _send_json(self, code: int, obj: Any) -> None:
        payload = json.dumps(obj).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self) -> None:
        stub = self.server.stub
        delay = stub.health_delay_s
        if delay > 0:
            time.sleep(delay)
        if self.path.startswith("/v1/models"):
            self._send_json(200, {
                "object": "list",
                "data": [{"id": stub.model_name, "context_length": stub.context_length}],
            })
        elif self.path.startswith("/health"):
            self._send_json(200, {"status": "ok"})
        else:
            self._send_json(404, {"error": f"no route {self.path}"})

    def do_POST(self) -> None:
        stub = self.server.stub
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length) if length else b"{}"
        try:
            body = json.loads(raw)
        except json.JSONDecodeError:
            body = {}
        stub._record(RecordedRequest(path=self.path, body=body))

        if not (self.path.startswith("/v1/chat/completions") or self.path == "/completion"):
            self._send_json(404, {"error": f"no route {self.path}"})
            return

        script = stub._next_script()
        if script.status_code != 200:
            self._send_json(script.status_code, json.loads(script.error_body))
            return

        if body.get("stream"):
            self._stream_response(script)
        else:
            self._blocking_response(script)

    def _event(self, content: Optional[str], finish: Optional[str],
               timings: Optional[Dict[str, float]] = None) -> bytes:
        delta: Dict[str, Any] = {"content": content} if content is not None else {}
        obj: Dict[str, Any] = {
            "id": "chatcmpl-stub",
            "object": "chat.completion.chunk",
            "model": self.server.stub.model_name,
            "choices": [{"index": 0, "delta": delta, "finish_reason": finish}],
        }
        if timings:
            obj["timings"] = timings
        return f"data: {json.dumps(obj)}\n\n".encode("utf-8")

    def _stream_response(self, script: StubScript) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.end_headers()
        # Role preamble goes out immediately; TTFT clocks content events only.
        self.wfile.write(b'data: {"choices":[{"index":0,"delta":{"role":"assistant"},"finish_reason":null}]}\n\n')
        self.wfile.flush()

        tokens = script.token_list()
        if script.first_token_delay_s > 0:
            time.sleep(script.first_token_delay_s)
        for i, token in enumerate(tokens):
            if script.abort_after_tokens is not None and i >= script.abort_after_tokens:
                self.wfile.flush()
                self.connection.close()
                return
            if i > 0 and script.inter_token_delay_s > 0:
                time.sleep(script.inter_token_delay_s)
            self.wfile.write(self._event(token, None))
            self.wfile.flush()
        self.wfile.write(self._event(None, "stop", script.timings))
        self.wfile.write(b"data: [DONE]\n\n")
        self.wfile.flush()

    def _blocking_response(self, script: StubScript) -> None:
        tokens = script.token_list()
        total_delay = script.first_token_delay_s + script.inter_token_delay_s * max(
            0, len(tokens) - 1
        )
        if total_delay > 0:
            time.sleep(total_delay)
        obj: Dict[str, Any] = {
            "id": "chatcmpl-stub",
            "object": "chat.completion",
            "model": self.server.stub.model_name,
            "choices": [
                {
                    "index": 0,
                    "message": {"role": "assistant", "content": "".join(tokens)},
                    "finish_reason": "stop",
                }
            ],
            "usage": {"completion_tokens": len(tokens)},
        }
        if script.timings:
            obj["timings"] = script.timings
        self._send_json(200, obj)


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    stub: "StubServer"


class StubServer:
    """In-process stub backend; use as a context manager in tests and demos."""

    def __init__(
        self,
        default_script: Optional[StubScript] = None,
        model_name: str = "stub-vlm",
        context_length: int = 4096,
        health_delay_s: float = 0.0,
    ):
        self.default_script = default_script or StubScript()
        self.model_name = model_name
        self.context_length = context_length
        self.health_delay_s = health_delay_s
        self._scripts: List[StubScript] = []
        self._requests: List[RecordedRequest] = []
        self._lock = threading.Lock()
        self._server: Optional[_Server] = None
        self._thread: Optional[threading.Thread] = None

    # -- lifecycle -------------------------------------------------------------

    def start(self) -> "StubServer":
        self._server = _Server(("127.0.0.1", 0), _Handler)
        self._server.stub = self
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    def __enter__(self) -> "StubServer":
        return self.start()

    def __exit__(self, *exc_info: Any) -> None:
        self.stop()

    @property
    def url(self) -> str:
        assert self._server is not None, "stub server not started"
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    # -- scripting ---------------------------------------------------------------

    def enqueue(self, *scripts: StubScript) -> None:
        with self._lock:
            self._scripts.extend(scripts)

    def _next_script(self) -> StubScript:
        with self._lock:
            if self._scripts:
                return self._scripts.pop(0)
        return self.default_script

    def _record(self, req: RecordedRequest) -> None:
        with self._lock:
            self._requests.append(req)

    @property
    def requests(self) -> List[RecordedRequest]:
        with self._lock:
            return list(self._requests)
