"""Assembly of backends, tools, and fixtures into the ask/check workflows."""

from __future__ import annotations

import json
import tempfile
from datetime import date
from pathlib import Path

from .agent import Transcript, run
from .compliance import ComplianceReport, evaluate_account, evaluate_machine
from .llm import BackendConfig, HttpBackend, ScriptedBackend, load_script
from .scenarios import FixtureMissing, default_data_root
from .tools import (
    FileSink,
    ShellMode,
    ShellPolicy,
    ToolRegistry,
    emit_report,
    make_clock_tool,
    make_policy_reader_tool,
    make_send_report_tool,
    make_shell_tool,
)
from .windows_parsers import parse_net_accounts, parse_net_user


class ConfigError(ValueError):
    """Invalid or incomplete workflow configuration."""


def default_policy_path() -> Path:
    return default_data_root() / "policy" / "cis_password_policy.txt"


def load_fixture_map(fixtures: str | Path | None, state: str = "before") -> dict[str, str]:
    """Build the shell fixture map.

    Accepts either a JSON map file (command → output) or a fixture
    directory holding net_user_<name>.txt / net_accounts_<state>.txt files;
    defaults to the packaged fixtures.
    """
    path = Path(fixtures) if fixtures else default_data_root() / "fixtures"
    if path.is_file():
        payload = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(payload, dict):
            raise ConfigError(f"fixture map {path} must be a JSON object")
        return {str(k): str(v) for k, v in payload.items()}
    if not path.is_dir():
        raise FixtureMissing(f"no fixture file or directory at {path}")
    fixture_map: dict[str, str] = {}
    for user_file in sorted(path.glob("net_user_*.txt")):
        text = user_file.read_text(encoding="utf-8")
        username = parse_net_user(text).username
        fixture_map[f"net user {username}"] = text
    accounts_file = path / f"net_accounts_{state}.txt"
    if accounts_file.is_file():
        fixture_map["net accounts"] = accounts_file.read_text(encoding="utf-8")
    if not fixture_map:
        raise FixtureMissing(f"no net_user_*/net_accounts_* fixtures under {path}")
    return fixture_map


def build_ask_tools(
    fixtures: str | Path | None = None,
    state: str = "before",
    policy_path: str | Path | None = None,
    date_override: date | None = None,
    report_dir: str | Path | None = None,
    live_shell: bool = False,
) -> ToolRegistry:
    if live_shell:
        shell_policy = ShellPolicy(mode=ShellMode.LIVE)
    else:
        shell_policy = ShellPolicy(mode=ShellMode.FIXTURE, fixture_map=load_fixture_map(fixtures, state))
    sink = FileSink(report_dir or tempfile.mkdtemp(prefix="audit-reports-"))
    return ToolRegistry(
        [
            make_shell_tool(shell_policy),
            make_policy_reader_tool(policy_path or default_policy_path()),
            make_clock_tool(fixed_override=date_override),
            make_send_report_tool(sink),
        ]
    )


def run_ask(
    prompt: str,
    backend: str = "scripted",
    script_path: str | Path | None = None,
    endpoint_url: str | None = None,
    model_id: str = "gpt-4",
    fixtures: str | Path | None = None,
    state: str = "before",
    policy_path: str | Path | None = None,
    date_override: date | None = None,
    report_dir: str | Path | None = None,
    max_steps: int = 15,
    live_shell: bool = False,
) -> Transcript:
    """Run the agent on a free-form audit prompt with all four tools."""
    from .agent import AgentLimits

    if backend == "scripted":
        if not script_path:
            raise ConfigError("scripted backend requires a script path")
        if not Path(script_path).is_file():
            raise ConfigError(f"script file not found: {script_path}")
        completion_backend = ScriptedBackend(load_script(script_path))
    elif backend == "http":
        if not endpoint_url:
            raise ConfigError("http backend requires an endpoint URL")
        completion_backend = HttpBackend(BackendConfig(endpoint_url=endpoint_url, model_id=model_id))
    else:
        raise ConfigError(f"unknown backend {backend!r} (expected 'scripted' or 'http')")
    tools = build_ask_tools(fixtures, state, policy_path, date_override, report_dir, live_shell)
    limits = AgentLimits(max_steps=max_steps)
    return run(prompt, tools, completion_backend, limits=limits, model_id=model_id)


def run_check(
    subject: str,
    policy_path: str | Path | None = None,
    fixtures: str | Path | None = None,
    state: str = "before",
    audit_date: date | None = None,
    report_dir: str | Path | None = None,
    task_query: str = "",
) -> ComplianceReport:
    """Agent-free oracle path: parsers plus compliance engine, no LLM."""
    from .tools import read_policy_document

    policy = read_policy_document(policy_path or default_policy_path())
    when = audit_date or date.today()
    fixtures_dir = Path(fixtures) if fixtures else default_data_root() / "fixtures"
    if subject.lower() == "machine":
        path = fixtures_dir / f"net_accounts_{state}.txt"
        if not path.is_file():
            raise FixtureMissing(f"no machine fixture at {path}")
        settings = parse_net_accounts(path.read_text(encoding="utf-8"))
        report = evaluate_machine(settings, policy, when, task_query=task_query)
    else:
        path = fixtures_dir / f"net_user_{subject.lower()}.txt"
        if not path.is_file():
            raise FixtureMissing(f"no account fixture at {path}")
        account = parse_net_user(path.read_text(encoding="utf-8"))
        report = evaluate_account(account, policy, when, task_query=task_query)
    if report_dir:
        emit_report(report, FileSink(report_dir))
    return report
