"""Current-date tool so the agent never has to guess today's date."""

from __future__ import annotations

from datetime import date

from .registry import ToolResult, ToolSpec


def clock_now(fixed_override: date | None = None) -> str:
    """Return the ISO-8601 date: the override when set, else the host date."""
    return (fixed_override or date.today()).isoformat()


def make_clock_tool(fixed_override: date | None = None, name: str = "CurrentDate") -> ToolSpec:
    return ToolSpec(
        name=name,
        description="Returns the current date in ISO format (YYYY-MM-DD). Input is ignored.",
        handler=lambda _text: ToolResult(output=clock_now(fixed_override)),
    )
