"""Persona + zero-shot chain-of-thought prompt construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from ..llm import ChatMessage, Role
from ..tools import ToolRegistry

if TYPE_CHECKING:
    from .runner import AgentStep

DEFAULT_PERSONA = "You are a security audit assistant"

DEFAULT_COT_TRIGGER = "Let's think step by step."

DEFAULT_FORMAT_INSTRUCTIONS = """Use the following format:

Thought: reason about what to do next
Action: the tool to use, one of [{tool_names}]
Action Input: the input to pass to the tool
Observation: the result of the tool
... (Thought/Action/Action Input/Observation can repeat)
Thought: I now know the final answer
Final Answer: the answer to the original question

Reply with exactly one Action and Action Input, or with a Final Answer."""


@dataclass(frozen=True)
class PromptTemplate:
    """Pieces of the audit prompt; the persona line always renders first."""

    persona_line: str = DEFAULT_PERSONA
    tool_descriptions: str = ""
    format_instructions: str = DEFAULT_FORMAT_INSTRUCTIONS
    cot_trigger: str = DEFAULT_COT_TRIGGER

    @classmethod
    def for_tools(cls, registry: ToolRegistry, **overrides: str) -> "PromptTemplate":
        descriptions = "\n".join(f"{spec.name}: {spec.description}" for spec in registry)
        instructions = overrides.pop("format_instructions", DEFAULT_FORMAT_INSTRUCTIONS)
        instructions = instructions.replace("{tool_names}", ", ".join(registry.names()))
        return cls(tool_descriptions=descriptions, format_instructions=instructions, **overrides)


def render_prompt(
    template: PromptTemplate,
    task_query: str,
    steps: Sequence["AgentStep"] = (),
) -> list[ChatMessage]:
    """Build the message list: system persona/tools/format, user task + CoT
    trigger, then the prior Thought/Action/Observation scratchpad in order."""
    system = template.persona_line
    if template.tool_descriptions:
        system += "\n\nYou have access to the following tools:\n" + template.tool_descriptions
    system += "\n\n" + template.format_instructions
    messages = [
        ChatMessage(Role.SYSTEM, system),
        ChatMessage(Role.USER, f"{task_query}\n\n{template.cot_trigger}"),
    ]
    for step in steps:
        reply = ""
        if step.thought:
            reply += f"Thought: {step.thought}\n"
        reply += f"Action: {step.action_name}\nAction Input: {step.action_input}"
        messages.append(ChatMessage(Role.ASSISTANT, reply))
        messages.append(ChatMessage(Role.USER, f"Observation: {step.observation}"))
    return messages
