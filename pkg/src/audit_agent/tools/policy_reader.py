"""Policy-document reader tool (takes pre-extracted text, not PDF bytes)."""

from __future__ import annotations

from pathlib import Path

from ..compliance import PolicySet, parse_policy_text
from ..compliance.rules import PARAMETER_LABELS
from .registry import ToolResult, ToolSpec


def read_policy_document(path: str | Path) -> PolicySet:
    """Parse a policy text file into a PolicySet.

    Raises FileNotFoundError for a missing file and NoRulesExtracted when
    the document yields zero rules.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_policy_text(text, source_id=str(path))


def render_policy_set(policy: PolicySet) -> str:
    """Human/agent-readable rule list."""
    lines = [f"Password policy baseline ({policy.source_id}), {len(policy.rules)} rules:"]
    for rule in policy.rules:
        label = PARAMETER_LABELS[rule.parameter]
        lines.append(f"- {rule.rule_id}: {label} must be {rule.expected_text} [{rule.scope.value}]")
    return "\n".join(lines)


def make_policy_reader_tool(path: str | Path, name: str = "PolicyReader") -> ToolSpec:
    def handler(_text: str) -> ToolResult:
        try:
            policy = read_policy_document(path)
        except FileNotFoundError:
            return ToolResult(
                output=f"FileNotFound: policy document {str(path)!r} does not exist.",
                is_error=True,
                code="FileNotFound",
            )
        except ValueError as exc:
            return ToolResult(output=str(exc), is_error=True, code="NoRulesExtracted")
        return ToolResult(output=render_policy_set(policy))

    return ToolSpec(
        name=name,
        description=(
            "Reads the password policy baseline document and returns the list "
            "of machine-checkable rules. Input is ignored."
        ),
        handler=handler,
    )
