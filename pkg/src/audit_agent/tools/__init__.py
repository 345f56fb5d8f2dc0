"""Agent tool registry and the concrete audit tools."""

from .clock import clock_now, make_clock_tool
from .policy_reader import make_policy_reader_tool, read_policy_document, render_policy_set
from .registry import DuplicateToolName, ToolRegistry, ToolResult, ToolSpec, UnknownTool
from .reporting import (
    DeliveryReceipt,
    FileSink,
    SinkUnavailable,
    SmtpConfig,
    SmtpSink,
    emit_report,
    make_send_report_tool,
    render_report_body,
)
from .shell import (
    DEFAULT_ALLOWLIST,
    ShellMode,
    ShellPolicy,
    make_shell_tool,
    normalize_command,
    shell_execute,
)

__all__ = [
    "DEFAULT_ALLOWLIST",
    "DeliveryReceipt",
    "DuplicateToolName",
    "FileSink",
    "ShellMode",
    "ShellPolicy",
    "SinkUnavailable",
    "SmtpConfig",
    "SmtpSink",
    "ToolRegistry",
    "ToolResult",
    "ToolSpec",
    "UnknownTool",
    "clock_now",
    "emit_report",
    "make_clock_tool",
    "make_policy_reader_tool",
    "make_send_report_tool",
    "make_shell_tool",
    "normalize_command",
    "read_policy_document",
    "render_policy_set",
    "render_report_body",
    "shell_execute",
]
