"""The ReAct run loop: render → complete → parse → dispatch until done.

All failures are encoded in Transcript.status; run never raises and never
reads interactive input.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Protocol, Sequence

from ..llm import BackendError, ChatMessage, CompletionRequest, Role
from ..tools import ToolRegistry
from .parsing import DirectiveKind, UnparseableOutput, parse_model_output
from .prompt import PromptTemplate, render_prompt


class CompletionBackend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


class RunStatus(str, Enum):
    COMPLETED = "completed"
    STEP_LIMIT_EXCEEDED = "step_limit_exceeded"
    LOOP_DETECTED = "loop_detected"
    TOOL_FAILURE = "tool_failure"
    PARSE_FAILURE = "parse_failure"
    BACKEND_FAILURE = "backend_failure"


@dataclass(frozen=True)
class AgentLimits:
    max_steps: int = 15
    loop_window: int = 3
    per_tool_timeout_seconds: int = 30
    observation_byte_budget: int = 8192

    def __post_init__(self) -> None:
        if self.max_steps <= 0 or self.loop_window <= 0:
            raise ValueError("max_steps and loop_window must be positive")
        if self.loop_window > self.max_steps:
            raise ValueError("loop_window must not exceed max_steps")


@dataclass
class AgentStep:
    index: int
    action_name: str
    action_input: str
    observation: str
    duration_ms: int = 0
    thought: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "thought": self.thought,
            "action_name": self.action_name,
            "action_input": self.action_input,
            "observation": self.observation,
            "duration_ms": self.duration_ms,
        }


@dataclass
class Transcript:
    task_query: str
    steps: list[AgentStep] = field(default_factory=list)
    final_answer: str | None = None
    status: RunStatus = RunStatus.BACKEND_FAILURE
    started_at: str = ""
    ended_at: str = ""
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "task_query": self.task_query,
            "output": self.final_answer,
            "steps": [step.to_dict() for step in self.steps],
            "status": self.status.value,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "note": self.note,
        }

    def render_text(self) -> str:
        lines = [f"Task: {self.task_query}"]
        for step in self.steps:
            lines.append(f"--- step {step.index} ---")
            if step.thought:
                lines.append(f"Thought: {step.thought}")
            lines.append(f"Action: {step.action_name}")
            lines.append(f"Action Input: {step.action_input}")
            lines.append(f"Observation: {step.observation}")
        lines.append(f"--- status: {self.status.value} ---")
        if self.final_answer is not None:
            lines.append(f"Final Answer: {self.final_answer}")
        if self.note:
            lines.append(f"Note: {self.note}")
        return "\n".join(lines)


def detect_loop(steps: Sequence[AgentStep], window: int) -> bool:
    """True iff the trailing `window` steps repeat one (action, input) pair."""
    if window <= 0 or len(steps) < window:
        return False
    tail = steps[-window:]
    first = (tail[0].action_name, tail[0].action_input)
    return all((step.action_name, step.action_input) == first for step in tail)


_CORRECTIVE_MESSAGE = (
    "Your last reply did not follow the required format. Reply again with "
    "either an 'Action:' line followed by an 'Action Input:' line, or a "
    "'Final Answer:' line."
)


def _truncate_observation(text: str, byte_budget: int) -> str:
    encoded = text.encode("utf-8")
    if len(encoded) <= byte_budget:
        return text
    return encoded[:byte_budget].decode("utf-8", errors="ignore") + "\n[truncated]"


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def run(
    task_query: str,
    tools: ToolRegistry,
    backend: CompletionBackend,
    template: PromptTemplate | None = None,
    limits: AgentLimits | None = None,
    model_id: str = "scripted",
    max_tokens: int = 1024,
) -> Transcript:
    """Run the agent on one task; the result status classifies the outcome."""
    limits = limits or AgentLimits()
    template = template or PromptTemplate.for_tools(tools)
    transcript = Transcript(task_query=task_query, started_at=_now_iso())
    extra: list[ChatMessage] = []
    corrective_used = False

    while True:
        messages = render_prompt(template, task_query, transcript.steps) + extra
        request = CompletionRequest(
            messages=tuple(messages),
            model_id=model_id,
            stop_sequences=("Observation:",),
            max_tokens=max_tokens,
        )
        try:
            reply = backend.complete(request)
        except BackendError as exc:
            transcript.status = RunStatus.BACKEND_FAILURE
            transcript.note = str(exc)
            break

        try:
            directive = parse_model_output(reply)
        except UnparseableOutput as exc:
            if corrective_used:
                transcript.status = RunStatus.PARSE_FAILURE
                transcript.note = f"{exc}; model reply: {reply[:500]}"
                break
            corrective_used = True
            extra = [ChatMessage(Role.USER, _CORRECTIVE_MESSAGE)]
            continue
        corrective_used = False
        extra = []

        if directive.kind is DirectiveKind.FINAL_ANSWER:
            transcript.final_answer = directive.answer
            transcript.status = RunStatus.COMPLETED
            break

        if len(transcript.steps) >= limits.max_steps:
            transcript.status = RunStatus.STEP_LIMIT_EXCEEDED
            break

        start = time.monotonic()
        result, tool_failed = _dispatch_with_retry(tools, directive.action_name, directive.action_input)
        duration_ms = int((time.monotonic() - start) * 1000)
        observation = _truncate_observation(result, limits.observation_byte_budget)
        transcript.steps.append(
            AgentStep(
                index=len(transcript.steps),
                action_name=directive.action_name,
                action_input=directive.action_input,
                observation=observation,
                duration_ms=duration_ms,
                thought=directive.thought,
            )
        )
        if tool_failed:
            transcript.status = RunStatus.TOOL_FAILURE
            transcript.note = observation
            break
        if detect_loop(transcript.steps, limits.loop_window):
            transcript.status = RunStatus.LOOP_DETECTED
            break

    transcript.ended_at = _now_iso()
    return transcript


def _dispatch_with_retry(tools: ToolRegistry, name: str, text: str) -> tuple[str, bool]:
    """Invoke a tool, retrying once if the handler raises.

    Error *results* (including unknown tools) are normal observations the
    model can react to; only a handler that raises twice fails the run.
    """
    for attempt in (0, 1):
        try:
            result = tools.dispatch(name, text)
        except Exception as exc:  # noqa: BLE001 - tool handlers are third-party code
            if attempt == 0:
                continue
            return f"ToolError: {exc}", True
        return result.output, False
    raise AssertionError("unreachable")
