"""Parser for the model's Thought / Action / Final Answer text grammar."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class DirectiveKind(Enum):
    TOOL_CALL = "tool_call"
    FINAL_ANSWER = "final_answer"


class UnparseableOutput(ValueError):
    """Neither an Action + Action Input pair nor a Final Answer was found."""


@dataclass(frozen=True)
class ParsedDirective:
    kind: DirectiveKind
    action_name: str = ""
    action_input: str = ""
    answer: str = ""
    thought: str | None = None

    def __post_init__(self) -> None:
        if self.kind is DirectiveKind.TOOL_CALL and (self.answer or not self.action_name):
            raise ValueError("tool call must carry an action name and no answer")
        if self.kind is DirectiveKind.FINAL_ANSWER and (self.action_name or self.action_input):
            raise ValueError("final answer must not carry action fields")


# Labels recognized case-insensitively at line starts; "action input" must
# precede "action" in the alternation so it wins at shared prefixes.
_LABEL_RE = re.compile(
    r"^[ \t]*(?P<label>thought|action input|action|final answer)[ \t]*:",
    re.IGNORECASE | re.MULTILINE,
)


def _strip_quotes(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    return text


def parse_model_output(text: str) -> ParsedDirective:
    """Total over arbitrary text: returns a directive or raises UnparseableOutput.

    When both an Action and a Final Answer appear, the earlier one wins.
    A Final Answer block extends to the end of the text; other labelled
    blocks end at the next recognized label.
    """
    matches = list(_LABEL_RE.finditer(text))
    segments: list[tuple[str, int, str]] = []
    for i, match in enumerate(matches):
        start = match.end()
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        segments.append((match["label"].lower(), match.start(), text[start:end]))

    thought = next((seg.strip() for label, _, seg in segments if label == "thought"), None)
    action_at = next((i for i, (label, _, _) in enumerate(segments) if label == "action"), None)
    final_at = next((i for i, (label, _, _) in enumerate(segments) if label == "final answer"), None)

    use_final = final_at is not None and (
        action_at is None or segments[final_at][1] < segments[action_at][1]
    )
    if use_final:
        answer = text[matches[final_at].end():].strip()  # type: ignore[index]
        return ParsedDirective(DirectiveKind.FINAL_ANSWER, answer=answer, thought=thought)

    if action_at is not None:
        input_at = next(
            (i for i in range(action_at + 1, len(segments)) if segments[i][0] == "action input"),
            None,
        )
        if input_at is not None:
            name = segments[action_at][2].strip()
            if name:
                return ParsedDirective(
                    DirectiveKind.TOOL_CALL,
                    action_name=name,
                    action_input=_strip_quotes(segments[input_at][2]),
                    thought=thought,
                )
    raise UnparseableOutput(
        "expected either an 'Action:' line followed by 'Action Input:', "
        "or a 'Final Answer:' block"
    )
