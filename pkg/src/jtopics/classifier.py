"""Prompt rendering, completion backends and response parsing.

The classification prompt embeds the full topic list and the full case text;
the model answers with four labelled lines (primary topic, secondary topic,
explanation, confidence score).  Backends are pluggable: a live HTTP backend
for real runs and a replay backend that serves pre-recorded responses so the
whole stage is deterministic under test.
"""

from __future__ import annotations

import base64
import re
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Protocol

from .corpus import CaseDocument
from .taxonomy import Taxonomy

# Characters per token assumed by the prompt budget check.
CHARS_PER_TOKEN = 4
DEFAULT_TOKEN_BUDGET = 180_000

PROMPT_TEMPLATE = """Dear Claude Opus,

I would like you to carefully review the details of a legal case that has been filed by a judge. After analyzing the facts and legal issues involved, please determine the most appropriate primary topic that the case falls under, based only on the following comprehensive list of legal topics:

```
{topics}
```

If the case involves multiple legal issues, please identify one primary topic that is most central and relevant to the case. Avoid selecting a topic that is only tangentially related or a peripheral issue. The topic description should provide sufficient information for a judge to properly classify the case.

After determining the primary topic, please consider whether the case can also be categorized under any secondary topics from the legal topics list above only. If so, include the most relevant secondary topic. If there are no applicable secondary topics, simply state ‘none’.

Before providing your response, please ensure that the selected primary and secondary topics are actually present in the list of legal topics provided above. If the topics you have chosen are not found in the list, please reconsider your selection and choose topics that are included in the list that meet the description of the primary and secondary topic.

Please format your response as follows:

Primary topic: [topic 1]

Secondary topic: [topic] or none

In your response, please provide a brief explanation (around 10 words) of your reasoning and cite any relevant legal principles or precedents that support your decision. Use the format: [Explanation:]. Additionally, include a confidence score (1-5, with 5 being the most confident) for your topic allocation. Use the format: [Confidence score:]

Thank you for your thorough analysis and attention to detail in this matter.

Case details:

```
{case}
```
"""


@dataclass(frozen=True)
class RenderedPrompt:
    case_id: str
    text: str


@dataclass(frozen=True)
class RawResponse:
    case_id: str
    text: str
    backend_id: str
    received_at: datetime

    def __post_init__(self):
        if not self.text:
            raise ValueError("response text must be non-empty")


@dataclass(frozen=True)
class ParsedClassification:
    case_id: str
    primary_raw: str
    secondary_raw: Optional[str]
    explanation: str
    confidence: int

    def __post_init__(self):
        if not self.primary_raw:
            raise ValueError("primary_raw must be non-empty")
        if self.confidence not in (1, 2, 3, 4, 5):
            raise ValueError(f"confidence outside 1..5: {self.confidence}")


class BackendError(RuntimeError):
    """A completion backend failed for good."""


class TransientBackendError(BackendError):
    """A completion backend failed in a way worth retrying."""


class MissingFixtureError(BackendError):
    """The replay backend has no recorded response for a case."""


class ExhaustedRetriesError(BackendError):
    """All retry attempts against the backend failed."""


class PromptBudgetError(ValueError):
    """The rendered prompt exceeds the configured token budget."""


class ResponseParseError(ValueError):
    """A model response is missing or mangling a required field."""

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


def render_prompt(taxonomy: Taxonomy, case: CaseDocument) -> RenderedPrompt:
    """Render the classification prompt for one case.

    The topic list is every canonical label joined by ", "; the case body is
    inserted verbatim.  Rendering is deterministic.
    """
    topics = ", ".join(area.canonical_label for area in taxonomy)
    return RenderedPrompt(
        case_id=case.case_id,
        text=PROMPT_TEMPLATE.format(topics=topics, case=case.full_text),
    )


class CompletionBackend(Protocol):
    backend_id: str

    def complete(self, prompt: RenderedPrompt) -> str: ...


class ReplayBackend:
    """Serves pre-recorded responses keyed by case_id; fully deterministic."""

    backend_id = "replay"

    def __init__(self, fixtures: dict[str, str]):
        self._fixtures = dict(fixtures)

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayBackend":
        """Load "case_id<TAB>base64(response)" fixture lines."""
        fixtures: dict[str, str] = {}
        for lineno, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            if not raw_line.strip():
                continue
            case_id, _, encoded = raw_line.partition("\t")
            if not encoded:
                raise ValueError(f"{path}:{lineno}: expected case_id<TAB>base64 record")
            fixtures[case_id] = base64.b64decode(encoded).decode("utf-8")
        return cls(fixtures)

    @staticmethod
    def dump_fixture_line(case_id: str, response_text: str) -> str:
        encoded = base64.b64encode(response_text.encode("utf-8")).decode("ascii")
        return f"{case_id}\t{encoded}"

    def complete(self, prompt: RenderedPrompt) -> str:
        try:
            return self._fixtures[prompt.case_id]
        except KeyError:
            raise MissingFixtureError(f"no replay fixture for case {prompt.case_id!r}") from None


class LiveBackend:
    """HTTP backend for a hosted completion model.

    The credential is read from the environment at request time, never stored.
    Server errors and timeouts are transient; other HTTP errors are final.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        credential_env: str = "JT_BACKEND_CREDENTIAL",
        timeout: float = 120.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.credential_env = credential_env
        self.timeout = timeout
        self.backend_id = f"live:{model}"

    def complete(self, prompt: RenderedPrompt) -> str:
        import os

        import httpx

        credential = os.environ.get(self.credential_env, "")
        try:
            response = httpx.post(
                self.endpoint,
                json={"model": self.model, "prompt": prompt.text},
                headers={"x-api-key": credential},
                timeout=self.timeout,
            )
        except httpx.TimeoutException as exc:
            raise TransientBackendError(f"backend timeout: {exc}") from exc
        except httpx.TransportError as exc:
            raise TransientBackendError(f"backend unreachable: {exc}") from exc
        if response.status_code >= 500:
            raise TransientBackendError(f"backend returned {response.status_code}")
        if response.status_code != 200:
            raise BackendError(f"backend returned {response.status_code}: {response.text[:200]}")
        completion = response.json().get("completion", "")
        if not completion:
            raise BackendError("backend returned an empty completion")
        return completion


def classify_case(
    backend: CompletionBackend,
    taxonomy: Taxonomy,
    case: CaseDocument,
    *,
    retry_limit: int = 3,
    backoff_base: float = 0.5,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
) -> RawResponse:
    """Render, dispatch and collect one completion, retrying transient failures.

    Retries use exponential backoff and give up after ``retry_limit`` attempts.
    The prompt size is bounded by a characters/4 token proxy before dispatch.
    """
    prompt = render_prompt(taxonomy, case)
    if len(prompt.text) > token_budget * CHARS_PER_TOKEN:
        raise PromptBudgetError(
            f"prompt for {case.case_id} is ~{len(prompt.text) // CHARS_PER_TOKEN} tokens, "
            f"budget is {token_budget}"
        )
    attempt = 0
    while True:
        attempt += 1
        try:
            text = backend.complete(prompt)
            break
        except TransientBackendError as exc:
            if attempt >= retry_limit:
                raise ExhaustedRetriesError(
                    f"backend failed {attempt} times for {case.case_id}: {exc}"
                ) from exc
            sleep(backoff_base * 2 ** (attempt - 1))
    return RawResponse(
        case_id=case.case_id,
        text=text,
        backend_id=backend.backend_id,
        received_at=clock(),
    )


_FIELD_RE = re.compile(
    r"^\s*(?P<bracket>\[)?\s*(?P<label>primary topic|secondary topic|explanation|confidence score)"
    r"\s*:\s*(?P<value>.*)$",
    re.IGNORECASE,
)


def _clean_value(value: str, bracketed_label: bool) -> str:
    value = value.strip()
    if bracketed_label and value.endswith("]"):
        value = value[:-1].rstrip()
    if len(value) >= 2 and value.startswith("[") and value.endswith("]"):
        value = value[1:-1].strip()
    return value


def parse_response(text: str, case_id: str = "") -> ParsedClassification:
    """Extract the four labelled fields from a model response.

    Field labels match case-insensitively and tolerate the bracketed form the
    prompt suggests ("[Explanation:] ...").  A secondary topic of "none" means
    no secondary topic.  Raises :class:`ResponseParseError` naming the field
    that is missing or malformed; never raises anything else.
    """
    fields: dict[str, str] = {}
    explanation_lines: list[str] = []
    in_explanation = False
    for line in text.splitlines():
        match = _FIELD_RE.match(line)
        if match:
            label = match.group("label").lower()
            value = _clean_value(match.group("value"), match.group("bracket") is not None)
            in_explanation = False
            if label == "explanation" and "explanation" not in fields:
                fields["explanation"] = value
                explanation_lines = [value] if value else []
                in_explanation = True
            elif label not in fields:
                fields[label] = value
        elif in_explanation and line.strip():
            explanation_lines.append(line.rstrip())

    if "primary topic" not in fields or not fields["primary topic"]:
        raise ResponseParseError("primary topic", "missing Primary topic line")
    if "confidence score" not in fields or not fields["confidence score"]:
        raise ResponseParseError("confidence score", "missing Confidence score line")
    try:
        confidence = int(fields["confidence score"])
    except ValueError:
        raise ResponseParseError(
            "confidence score", f"confidence is not an integer: {fields['confidence score']!r}"
        ) from None
    if confidence not in (1, 2, 3, 4, 5):
        raise ResponseParseError("confidence score", f"confidence outside 1..5: {confidence}")

    secondary = fields.get("secondary topic", "")
    secondary_value: Optional[str] = None if secondary.lower() in ("", "none") else secondary

    return ParsedClassification(
        case_id=case_id,
        primary_raw=fields["primary topic"],
        secondary_raw=secondary_value,
        explanation="\n".join(explanation_lines),
        confidence=confidence,
    )


def format_response(parsed: ParsedClassification) -> str:
    """Render a well-formed response from parsed fields (round-trip inverse)."""
    secondary = parsed.secondary_raw if parsed.secondary_raw is not None else "none"
    return (
        f"Primary topic: {parsed.primary_raw}\n"
        f"Secondary topic: {secondary}\n"
        f"Explanation: {parsed.explanation}\n"
        f"Confidence score: {parsed.confidence}\n"
    )
