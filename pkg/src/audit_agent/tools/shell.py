"""Allowlisted shell command execution with a deterministic fixture mode."""

from __future__ import annotations

import re
import subprocess
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .registry import ToolResult, ToolSpec

DEFAULT_ALLOWLIST = ("net user", "net accounts")

_SHELL_TOOL_DESCRIPTION = (
    "Runs a Windows shell command and returns its output. Useful for reading "
    "account and password settings, e.g. 'net user <name>' or 'net accounts'."
)


class ShellMode(Enum):
    LIVE = "live"
    FIXTURE = "fixture"


def normalize_command(command: str) -> str:
    """Collapse whitespace runs, trim, and case-fold the command word."""
    collapsed = re.sub(r"\s+", " ", command).strip()
    if not collapsed:
        return ""
    word, _, rest = collapsed.partition(" ")
    return word.casefold() + (" " + rest if rest else "")


@dataclass(frozen=True)
class ShellPolicy:
    allowlist: tuple[str, ...] = DEFAULT_ALLOWLIST
    timeout_seconds: int = 30
    mode: ShellMode = ShellMode.FIXTURE
    fixture_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode is ShellMode.FIXTURE and not self.fixture_map:
            raise ValueError("fixture mode requires a non-empty fixture_map")
        normalized = {normalize_command(k): v for k, v in self.fixture_map.items()}
        object.__setattr__(self, "fixture_map", MappingProxyType(normalized))


# Characters that would let an allowlisted prefix smuggle in a second
# command once handed to the platform shell.
_SHELL_METACHARACTERS = frozenset(";|&><`$\n\r")


def _is_allowed(command: str, allowlist: tuple[str, ...]) -> bool:
    if _SHELL_METACHARACTERS & set(command):
        return False
    normalized = normalize_command(command)
    for prefix in allowlist:
        prefix = normalize_command(prefix)
        if normalized == prefix or normalized.startswith(prefix + " "):
            return True
    return False


def shell_execute(command: str, policy: ShellPolicy) -> ToolResult:
    """Run (or replay) a command; non-allowlisted commands are never spawned."""
    if not _is_allowed(command, policy.allowlist):
        return ToolResult(
            output=(
                f"DisallowedCommand: {command!r} is not on the allowlist "
                f"({', '.join(policy.allowlist)}); nothing was executed."
            ),
            is_error=True,
            code="DisallowedCommand",
        )
    if policy.mode is ShellMode.FIXTURE:
        canned = policy.fixture_map.get(normalize_command(command))
        if canned is None:
            return ToolResult(
                output=f"FixtureMiss: no canned output for {command!r}.",
                is_error=True,
                code="FixtureMiss",
            )
        return ToolResult(output=canned)
    try:
        completed = subprocess.run(
            command,
            shell=True,
            capture_output=True,
            text=True,
            timeout=policy.timeout_seconds,
        )
    except subprocess.TimeoutExpired:
        return ToolResult(
            output=f"Timeout: {command!r} exceeded {policy.timeout_seconds}s.",
            is_error=True,
            code="Timeout",
        )
    output = (completed.stdout + completed.stderr).strip() or "(no output)"
    if completed.returncode != 0:
        return ToolResult(output=output, is_error=True, code="NonZeroExit")
    return ToolResult(output=output)


def make_shell_tool(policy: ShellPolicy, name: str = "WindowsTask") -> ToolSpec:
    return ToolSpec(
        name=name,
        description=_SHELL_TOOL_DESCRIPTION,
        handler=lambda command: shell_execute(command, policy),
    )
