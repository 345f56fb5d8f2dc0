"""Command-line client for the audit service.

The CLI is a thin client: every command builds a request and sends it to
the FastAPI app. By default the app is called in-process (no sockets, no
network); --server switches to a running remote service.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .service.app import app

_EXIT_OK = 0
_EXIT_FAILED = 1
_EXIT_CONFIG = 2


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300)
    # In-process ASGI call: no sockets, no network.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    return TestClient(app, raise_server_exceptions=False)


def _load_config_file(path: str | None) -> dict[str, str]:
    """Optional key = value config file; flags given on the command line win."""
    if not path:
        return {}
    values: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _merge(ctx: click.Context, config: dict[str, str], key: str, current):
    source = ctx.get_parameter_source(key)
    if source is not None and source.name != "DEFAULT":
        return current
    return config.get(key.replace("_", "-"), config.get(key, current))


def _fail_config(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(_EXIT_CONFIG)


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        response = client.post(path, json=payload)
    if response.status_code == 400:
        _fail_config(response.json().get("detail", response.text))
    if response.status_code == 422:
        _fail_config(response.text)
    response.raise_for_status()
    return response.json()


common_options = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="Optional key=value config file; flags override it."),
    click.option("--server", default=None,
                 help="Base URL of a running audit-agent service (default: in-process)."),
    click.option("--out", "output_format", type=click.Choice(["text", "json"]), default="text"),
]


def _with_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@click.group()
def main() -> None:
    """Windows password-policy audit agent."""


@main.command()
@click.argument("prompt")
@click.option("--backend", type=click.Choice(["scripted", "http"]), default="scripted")
@click.option("--script", "script_path", default=None, help="Scripted-backend exchange file (JSON).")
@click.option("--endpoint", "endpoint_url", default=None, help="Chat-completions endpoint URL.")
@click.option("--model", "model_id", default="gpt-4")
@click.option("--fixtures", default=None, help="Fixture dir or JSON command→output map.")
@click.option("--state", type=click.Choice(["before", "after"]), default="before")
@click.option("--policy", default=None, help="Policy document path (text).")
@click.option("--report-dir", default=None)
@click.option("--date", "date_override", default=None, help="Fixed clock date (ISO).")
@click.option("--max-steps", type=int, default=15)
@click.option("--live-shell", is_flag=True, default=False, help="Execute allowlisted commands for real.")
@_with_options(common_options)
@click.pass_context
def ask(ctx, prompt, backend, script_path, endpoint_url, model_id, fixtures, state, policy,
        report_dir, date_override, max_steps, live_shell, config_path, server, output_format):
    """Run the agent on an audit PROMPT and print the transcript."""
    config = _load_config_file(config_path)
    payload = {
        "prompt": prompt,
        "backend": _merge(ctx, config, "backend", backend),
        "script_path": _merge(ctx, config, "script_path", script_path),
        "endpoint_url": _merge(ctx, config, "endpoint_url", endpoint_url),
        "model_id": _merge(ctx, config, "model_id", model_id),
        "fixtures": _merge(ctx, config, "fixtures", fixtures),
        "state": state,
        "policy": _merge(ctx, config, "policy", policy),
        "report_dir": _merge(ctx, config, "report_dir", report_dir),
        "date": _merge(ctx, config, "date_override", date_override),
        "max_steps": int(_merge(ctx, config, "max_steps", max_steps)),
        "live_shell": live_shell,
    }
    transcript = _post(server or config.get("server"), "/ask", payload)
    if output_format == "json":
        click.echo(json.dumps(transcript, indent=2))
    else:
        _print_transcript_text(transcript)
    sys.exit(_EXIT_OK if transcript["status"] == "completed" else _EXIT_FAILED)


def _print_transcript_text(transcript: dict) -> None:
    click.echo(f"Task: {transcript['task_query']}")
    for step in transcript["steps"]:
        click.echo(f"--- step {step['index']} ---")
        if step.get("thought"):
            click.echo(f"Thought: {step['thought']}")
        click.echo(f"Action: {step['action_name']}")
        click.echo(f"Action Input: {step['action_input']}")
        click.echo(f"Observation: {step['observation']}")
    click.echo(f"--- status: {transcript['status']} ---")
    if transcript.get("output") is not None:
        click.echo(f"Final Answer: {transcript['output']}")
    if transcript.get("note"):
        click.echo(f"Note: {transcript['note']}")


@main.group()
def scenario() -> None:
    """List or run the canonical audit scenarios."""


@scenario.command("list")
@_with_options(common_options)
def scenario_list(config_path, server, output_format):
    """Print scenario ids and their prompts."""
    config = _load_config_file(config_path)
    with _client(server or config.get("server")) as client:
        response = client.get("/scenarios")
    response.raise_for_status()
    entries = response.json()
    if output_format == "json":
        click.echo(json.dumps(entries, indent=2))
    else:
        for entry in entries:
            click.echo(f"{entry['id']}: {entry['prompt']}")
    sys.exit(_EXIT_OK)


@scenario.command("run")
@click.argument("ids", nargs=-1)
@click.option("--mode", type=click.Choice(["scripted", "live"]), default="scripted")
@click.option("--endpoint", "endpoint_url", default=None)
@click.option("--model", "model_id", default="gpt-4")
@click.option("--report-dir", default=None)
@_with_options(common_options)
def scenario_run(ids, mode, endpoint_url, model_id, report_dir, config_path, server, output_format):
    """Run scenarios (default: all) and print the result matrix."""
    config = _load_config_file(config_path)
    payload = {
        "ids": list(ids) or None,
        "mode": mode,
        "endpoint_url": endpoint_url or config.get("endpoint_url"),
        "model_id": model_id,
        "report_dir": report_dir,
    }
    matrix = _post(server or config.get("server"), "/scenarios/run", payload)
    if output_format == "json":
        click.echo(json.dumps(matrix, indent=2))
    else:
        _print_matrix_text(matrix)
    if matrix["gating"] and not matrix["all_pass"]:
        sys.exit(_EXIT_FAILED)
    sys.exit(_EXIT_OK)


def _print_matrix_text(matrix: dict) -> None:
    headers = (
        "Scenario",
        "Interpret Audit Task",
        "Execute Task Independently",
        "Compliance Status",
        "Task Result Evaluation",
    )
    table = [headers]
    for row in matrix["rows"]:
        table.append(
            (
                f"Scenario {row['scenario']}",
                row["interpret_audit_task"],
                row["execute_task_independently"],
                row["compliance_status"],
                row["task_result"],
            )
        )
    widths = [max(len(line[col]) for line in table) for col in range(len(headers))]
    for i, line in enumerate(table):
        click.echo("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(line)).rstrip())
        if i == 0:
            click.echo("  ".join("-" * w for w in widths))
    click.echo(f"\nmode={matrix['mode']}  all_pass={matrix['all_pass']}")


@main.command()
@click.argument("subject")
@click.option("--policy", default=None)
@click.option("--fixtures", default=None,
              help="Fixture directory, or a bare state name (before/after) for machine checks.")
@click.option("--state", type=click.Choice(["before", "after"]), default=None)
@click.option("--date", "audit_date", default=None, help="Audit date (ISO), default today.")
@click.option("--report-dir", default=None)
@_with_options(common_options)
@click.pass_context
def check(ctx, subject, policy, fixtures, state, audit_date, report_dir, config_path, server,
          output_format):
    """Agent-free compliance check of SUBJECT (an account name, or 'machine')."""
    config = _load_config_file(config_path)
    fixtures = _merge(ctx, config, "fixtures", fixtures)
    # `--fixtures after` shorthand: a bare state name selects the packaged fixtures.
    if fixtures in ("before", "after") and state is None:
        fixtures, state = None, fixtures
    payload = {
        "subject": subject,
        "policy": _merge(ctx, config, "policy", policy),
        "fixtures": fixtures,
        "state": state or "before",
        "date": audit_date,
        "report_dir": report_dir,
    }
    report = _post(server or config.get("server"), "/check", payload)
    if output_format == "json":
        click.echo(json.dumps(report, indent=2))
    else:
        click.echo("COMPLIANT" if report["overall"] == "compliant" else "NON-COMPLIANT")
        click.echo(f"Subject: {report['subject']}  Audit date: {report['audit_date']}")
        for verdict in report["verdicts"]:
            mark = "ok " if verdict["compliant"] else "GAP"
            click.echo(
                f"  [{mark}] {verdict['rule_id']}: observed {verdict['observed']}, "
                f"expected {verdict['expected']}"
            )
    sys.exit(_EXIT_OK if report["overall"] == "compliant" else _EXIT_FAILED)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Run the audit service over HTTP."""
    import uvicorn

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
