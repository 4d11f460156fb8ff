"""LLM provider plumbing and the two simplifier agents.

The simplifier (first agent) does general cause/action decomposition; the
alternative simplifier handles timing and arithmetic rewrites and is only
called when the comparator asks for a revision.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from string import Template
from typing import Protocol

import httpx

log = logging.getLogger(__name__)


class AgentKind(str, Enum):
    SIMPLIFIER = "simplifier"
    ALTERNATIVE_SIMPLIFIER = "alternative"


# --------------------------------------------------------------------------
# errors

class ProviderError(RuntimeError):
    """A provider call failed for good (after any retries)."""


class TransientProviderError(ProviderError):
    """Worth retrying: 5xx, 429, dropped connections."""


class AuthError(ProviderError):
    """Credential missing or rejected. Never retried."""


class ProviderTimeout(ProviderError):
    pass


class FixtureMiss(ProviderError):
    """Scripted provider/scorer has no entry for the request."""


class MalformedResponse(ValueError):
    """Model output has no ANSWER section."""


class EmptyAnswer(ValueError):
    pass


# --------------------------------------------------------------------------
# config and records

@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-4o"
    temperature: float = 0.7
    top_p: float = 1.0
    max_retries: int = 3
    timeout: float = 60.0
    api_key_env: str = "OPENAI_API_KEY"
    backoff: float = 1.0  # seconds, doubled per retry

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.max_retries < 0:
            raise ValueError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.timeout <= 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")


@dataclass(frozen=True)
class ProviderCall:
    prompt: str
    response: str
    latency: float
    cached: bool
    attempts: int = 1


@dataclass(frozen=True)
class SimplificationCandidate:
    sentences: tuple[str, ...]
    produced_by: AgentKind
    iteration: int
    raw_response: str = ""

    def __post_init__(self):
        if not self.sentences:
            raise ValueError("candidate needs at least one sentence")
        if any(not s.strip() for s in self.sentences):
            raise ValueError("candidate sentences must be non-empty")
        if self.iteration < 1:
            raise ValueError(f"iteration must be >= 1, got {self.iteration}")

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


# --------------------------------------------------------------------------
# providers

class Provider(Protocol):
    def complete(self, prompt: str, config: ProviderConfig, sample: int = 0) -> str:
        """Return the model's text for ``prompt``.

        ``sample`` numbers repeated requests for the same prompt within a run;
        providers that sample stochastically may ignore it.
        """


class HttpChatProvider:
    """Client for any endpoint speaking the common chat-completions JSON schema."""

    def __init__(self, client: httpx.Client | None = None):
        self._client = client or httpx.Client()

    def complete(self, prompt: str, config: ProviderConfig, sample: int = 0) -> str:
        key = os.environ.get(config.api_key_env)
        if not key:
            raise AuthError(f"environment variable {config.api_key_env} is not set")
        body = {
            "model": config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": config.temperature,
            "top_p": config.top_p,
        }
        try:
            resp = self._client.post(
                config.endpoint,
                json=body,
                headers={"Authorization": f"Bearer {key}"},
                timeout=config.timeout,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(f"request timed out after {config.timeout}s") from exc
        except httpx.TransportError as exc:
            raise TransientProviderError(f"transport error: {exc}") from exc

        if resp.status_code in (401, 403):
            raise AuthError(f"HTTP {resp.status_code}: credential rejected")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientProviderError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise ProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"] or ""
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError("response does not follow the chat-completions schema") from exc

    def close(self):
        self._client.close()


_HEADER = re.compile(r"^\[prompt (\w+)/\d+\]")
_QUERY_LINE = re.compile(r"^Query: (.*)$", re.M)


def prompt_agent(prompt: str) -> str | None:
    m = _HEADER.match(prompt)
    return m.group(1) if m else None


def prompt_query(prompt: str) -> str | None:
    found = _QUERY_LINE.findall(prompt)
    return found[-1] if found else None


@dataclass
class ScriptedProvider:
    """Fixture-table provider for offline runs.

    ``table`` maps ``(agent, query)`` to a list of raw responses; request
    number ``sample`` gets ``responses[sample]``, the last one repeating.
    With ``echo`` set, unknown queries are answered with the query itself.
    """

    table: dict[tuple[str, str], list[str]] = field(default_factory=dict)
    echo: bool = False

    def complete(self, prompt: str, config: ProviderConfig, sample: int = 0) -> str:
        agent, query = prompt_agent(prompt), prompt_query(prompt)
        if agent is None or query is None:
            raise FixtureMiss("prompt has no agent header or Query line")
        responses = self.table.get((agent, query))
        if responses:
            return responses[min(sample, len(responses) - 1)]
        if self.echo:
            return f"ANSWER: {query}"
        raise FixtureMiss(f"no scripted {agent} response for {query!r}")

    @classmethod
    def from_jsonl(cls, path, echo: bool = False) -> "ScriptedProvider":
        """Records: ``{"agent": ..., "query": ..., "responses": [...]}``.

        ``"answers"`` (list of sentence lists) may stand in for ``responses``;
        each is wrapped as a bare ``ANSWER:`` block.
        """
        table = {}
        with Path(path).open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                rec = json.loads(line)
                try:
                    agent = AgentKind(rec["agent"]).value
                    query = rec["query"]
                except (KeyError, ValueError) as exc:
                    raise ValueError(f"{path}:{lineno}: bad fixture record") from exc
                if "responses" in rec:
                    responses = list(rec["responses"])
                else:
                    responses = ["ANSWER:\n" + "\n".join(a) for a in rec["answers"]]
                table.setdefault((agent, query), []).extend(responses)
        return cls(table, echo)


# --------------------------------------------------------------------------
# cache

class ResponseCache:
    """Content-addressed response files under ``root``.

    Reads are lock-free. Writes go through a temp file and ``os.replace`` under
    a lock, so concurrent readers never see a partial file.
    """

    def __init__(self, root):
        self.root = Path(root).expanduser()
        self._lock = threading.Lock()

    @staticmethod
    def key_material(prompt: str, config: ProviderConfig, sample: int) -> dict:
        return {
            "prompt": prompt,
            "model_name": config.model_name,
            "temperature": config.temperature,
            "top_p": config.top_p,
            "sample": sample,
        }

    @staticmethod
    def digest(material: dict) -> str:
        blob = json.dumps(material, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, material: dict) -> str | None:
        key = self.digest(material)
        path = self._path(key)
        try:
            stored = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            log.warning("unreadable cache entry %s", path)
            return None
        # a hash collision or a hand-edited file must not serve a foreign prompt
        if stored.get("material") != material or self.digest(stored["material"]) != key:
            log.warning("cache entry %s does not match its key; ignoring", path)
            return None
        return stored["response"]

    def put(self, material: dict, response: str) -> None:
        key = self.digest(material)
        path = self._path(key)
        payload = json.dumps({"material": material, "response": response}, ensure_ascii=False)
        with self._lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)


def call_provider(
    prompt: str,
    config: ProviderConfig,
    provider: Provider,
    cache: ResponseCache | None = None,
    sample: int = 0,
    sleep=time.sleep,
) -> ProviderCall:
    if not prompt:
        raise ValueError("prompt must be non-empty")
    material = ResponseCache.key_material(prompt, config, sample)
    if cache is not None:
        hit = cache.get(material)
        if hit is not None:
            return ProviderCall(prompt, hit, 0.0, cached=True, attempts=0)

    start = time.perf_counter()
    attempt = 0
    while True:
        attempt += 1
        try:
            response = provider.complete(prompt, config, sample)
            break
        except (AuthError, FixtureMiss):
            raise
        except (TransientProviderError, ProviderTimeout) as exc:
            if attempt > config.max_retries:
                if isinstance(exc, ProviderTimeout):
                    raise
                raise ProviderError(f"giving up after {attempt} attempts: {exc}") from exc
            delay = config.backoff * 2 ** (attempt - 1)
            log.info("provider attempt %d failed (%s); retrying in %.2fs", attempt, exc, delay)
            sleep(delay)
    latency = time.perf_counter() - start
    if cache is not None:
        cache.put(material, response)
    return ProviderCall(prompt, response, latency, cached=False, attempts=attempt)


# --------------------------------------------------------------------------
# prompts

_TEMPLATE_FILES = {
    AgentKind.SIMPLIFIER: "simplifier_v1.txt",
    AgentKind.ALTERNATIVE_SIMPLIFIER: "alternative_v1.txt",
}


def load_template(name: str) -> Template:
    text = (resources.files("sentsimp") / "prompts" / name).read_text(encoding="utf-8")
    return Template(text)


def render_prompt(query: str, agent: AgentKind) -> str:
    if not query or not query.strip():
        raise ValueError("query must be non-empty")
    # single-line query keeps the trailing "Query:" line machine-readable
    query = " ".join(query.split())
    return load_template(_TEMPLATE_FILES[AgentKind(agent)]).substitute(query=query)


# --------------------------------------------------------------------------
# answer extraction

_ANSWER = re.compile(r"^\s*\**ANSWER\**\s*:\**\s*", re.I | re.M)
_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+")
_SPLIT = re.compile(r"(?<=[.?!])\s+")


def extract_answer(response: str) -> str:
    matches = list(_ANSWER.finditer(response))
    if not matches:
        raise MalformedResponse("response has no ANSWER: section")
    return response[matches[-1].end():].strip()


def split_sentences(answer: str) -> list[str]:
    sentences = []
    for line in answer.splitlines():
        line = _BULLET.sub("", line).strip()
        if not line:
            continue
        sentences.extend(s.strip() for s in _SPLIT.split(line) if s.strip())
    return sentences


def simplify(
    query: str,
    agent: AgentKind,
    config: ProviderConfig,
    provider: Provider,
    iteration: int = 1,
    cache: ResponseCache | None = None,
    sample: int = 0,
) -> SimplificationCandidate:
    call = call_provider(render_prompt(query, agent), config, provider, cache, sample)
    sentences = split_sentences(extract_answer(call.response))
    if not sentences:
        raise EmptyAnswer("ANSWER section is empty")
    return SimplificationCandidate(tuple(sentences), AgentKind(agent), iteration, call.response)


@dataclass
class LlmSimplifier:
    """Binds provider, config and cache so the orchestrator only passes the query.

    Re-invocations of one agent within a run get increasing ``sample`` numbers,
    so a cache does not hand back the same rejected answer every time.
    """

    provider: Provider
    config: ProviderConfig = field(default_factory=ProviderConfig)
    cache: ResponseCache | None = None

    def simplify(self, query: str, agent: AgentKind, iteration: int, sample: int = 0):
        return simplify(query, agent, self.config, self.provider, iteration, self.cache, sample)


def judge_config(config: ProviderConfig, temperature: float = 0.0) -> ProviderConfig:
    return replace(config, temperature=temperature)
