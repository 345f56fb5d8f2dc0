"""ReAct agent state machine: prompt building, output parsing, run loop."""

from .parsing import DirectiveKind, ParsedDirective, UnparseableOutput, parse_model_output
from .prompt import (
    DEFAULT_COT_TRIGGER,
    DEFAULT_FORMAT_INSTRUCTIONS,
    DEFAULT_PERSONA,
    PromptTemplate,
    render_prompt,
)
from .runner import AgentLimits, AgentStep, RunStatus, Transcript, detect_loop, run

__all__ = [
    "AgentLimits",
    "AgentStep",
    "DEFAULT_COT_TRIGGER",
    "DEFAULT_FORMAT_INSTRUCTIONS",
    "DEFAULT_PERSONA",
    "DirectiveKind",
    "ParsedDirective",
    "PromptTemplate",
    "RunStatus",
    "Transcript",
    "UnparseableOutput",
    "detect_loop",
    "parse_model_output",
    "render_prompt",
    "run",
]
