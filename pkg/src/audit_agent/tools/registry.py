"""Named single-text-input tools and their registry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator


@dataclass(frozen=True)
class ToolResult:
    """Output of one tool invocation; errors carry a diagnostic as output."""

    output: str
    is_error: bool = False
    code: str | None = None

    def __post_init__(self) -> None:
        if not self.output:
            raise ValueError("output must be non-empty")


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    handler: Callable[[str], ToolResult]

    def __post_init__(self) -> None:
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError("tool name must be non-empty and contain no whitespace")
        if not self.description:
            raise ValueError("tool description must be non-empty")


class DuplicateToolName(ValueError):
    pass


class UnknownTool(KeyError):
    pass


class ToolRegistry:
    """Name → ToolSpec mapping; immutable by convention after setup."""

    def __init__(self, specs: tuple[ToolSpec, ...] | list[ToolSpec] = ()):
        self._specs: dict[str, ToolSpec] = {}
        for spec in specs:
            self.register(spec)

    def register(self, spec: ToolSpec) -> "ToolRegistry":
        if spec.name in self._specs:
            raise DuplicateToolName(spec.name)
        self._specs[spec.name] = spec
        return self

    def lookup(self, name: str) -> ToolSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise UnknownTool(name) from None

    def names(self) -> tuple[str, ...]:
        return tuple(self._specs)

    def dispatch(self, name: str, text: str) -> ToolResult:
        """Invoke the named tool; an unknown name yields an error observation."""
        try:
            spec = self._specs[name]
        except KeyError:
            return ToolResult(
                output=f"Unknown tool {name!r}. Valid tools: {', '.join(self.names())}",
                is_error=True,
                code="UnknownTool",
            )
        return spec.handler(text)

    def __iter__(self) -> Iterator[ToolSpec]:
        return iter(self._specs.values())

    def __len__(self) -> int:
        return len(self._specs)
