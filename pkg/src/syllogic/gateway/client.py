"""Chat-completion transport: HTTP client and the deterministic stub.

Both gateways expose ``complete(template_name, prompt, temperature=...,
attempt=...)`` returning the assistant message text. The HTTP client speaks
the OpenAI-compatible chat-completions JSON schema; the stub replays
scripted responses keyed by (template name, SHA-256 of the rendered
prompt), indexed by attempt number so retries are reproducible regardless
of thread schedule.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field

import requests

DEFAULT_MAX_CONTEXT_TOKENS = 16384
DEFAULT_CONCURRENCY = 4

BASE_URL_ENV = "LLM_BASE_URL"
API_KEY_ENV = "LLM_API_KEY"


class GatewayError(Exception):
    pass


class NetworkError(GatewayError):
    pass


class HttpStatusError(GatewayError):
    def __init__(self, code: int, body: str = ""):
        self.code = code
        self.body = body
        super().__init__(f"chat endpoint returned HTTP {code}")


class MalformedResponseError(GatewayError):
    pass


class GatewayTimeoutError(GatewayError):
    pass


class UnscriptedPromptError(GatewayError):
    def __init__(self, template_name: str, digest: str):
        super().__init__(
            f"stub has no fixture for template '{template_name}' "
            f"(prompt sha256 {digest[:12]}...)")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"invalid role {self.role!r}")


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_context_tokens: int = DEFAULT_MAX_CONTEXT_TOKENS

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be nonempty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class ChatClient:
    """HTTP gateway. Shareable across threads; request concurrency bounded."""

    def __init__(self, base_url: str | None = None, api_key: str | None = None,
                 model: str = "default", timeout: float = 120.0,
                 max_concurrent: int = DEFAULT_CONCURRENCY,
                 session: requests.Session | None = None):
        base_url = base_url or os.environ.get(BASE_URL_ENV)
        if not base_url:
            raise ValueError(
                f"no endpoint configured; pass base_url or set {BASE_URL_ENV}")
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.model = model
        self.timeout = timeout
        self._semaphore = threading.BoundedSemaphore(max_concurrent)
        self._session = session or requests.Session()

    def chat(self, request: ChatRequest) -> str:
        payload = {
            "model": request.model,
            "messages": [{"role": m.role, "content": m.content}
                         for m in request.messages],
            "temperature": request.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        with self._semaphore:
            try:
                response = self._session.post(
                    f"{self.base_url}/chat/completions",
                    json=payload, headers=headers, timeout=self.timeout)
            except requests.Timeout as exc:
                raise GatewayTimeoutError(str(exc)) from exc
            except requests.RequestException as exc:
                raise NetworkError(str(exc)) from exc
        if response.status_code >= 400:
            raise HttpStatusError(response.status_code, response.text[:500])
        try:
            data = response.json()
            content = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponseError(f"unexpected response body: {exc}") from exc
        if not isinstance(content, str):
            raise MalformedResponseError("message content is not a string")
        return content

    def complete(self, template_name: str, prompt: str, *,
                 temperature: float = 0.0, attempt: int = 1) -> str:
        del template_name, attempt  # transport does not key on these
        request = ChatRequest(
            model=self.model,
            messages=(ChatMessage("user", prompt),),
            temperature=temperature,
        )
        return self.chat(request)


@dataclass
class StubGateway:
    """Offline gateway replaying scripted responses.

    Responses for a key are indexed by ``attempt`` (1-based, clamped to the
    last entry), so sequences like garbage-garbage-gold exercise the retry
    path deterministically.
    """

    fixtures: dict[tuple[str, str], tuple[str, ...]] = field(default_factory=dict)

    def script(self, template_name: str, prompt: str, *responses: str) -> None:
        if not responses:
            raise ValueError("at least one response is required")
        self.fixtures[(template_name, prompt_digest(prompt))] = tuple(responses)

    def complete(self, template_name: str, prompt: str, *,
                 temperature: float = 0.0, attempt: int = 1) -> str:
        del temperature
        digest = prompt_digest(prompt)
        responses = self.fixtures.get((template_name, digest))
        if responses is None:
            raise UnscriptedPromptError(template_name, digest)
        return responses[min(attempt, len(responses)) - 1]

    def to_json(self) -> str:
        entries = [
            {"template": template, "prompt_sha256": digest, "responses": list(rs)}
            for (template, digest), rs in self.fixtures.items()
        ]
        return json.dumps({"fixtures": entries}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StubGateway":
        data = json.loads(text)
        stub = cls()
        for entry in data["fixtures"]:
            if "prompt_sha256" in entry:
                digest = entry["prompt_sha256"]
            else:
                digest = prompt_digest(entry["prompt"])
            responses = tuple(entry["responses"])
            if not responses:
                raise ValueError("fixture with no responses")
            stub.fixtures[(entry["template"], digest)] = responses
        return stub
