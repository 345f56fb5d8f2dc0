"""The six canonical audit scenarios: fixtures, scripts, scoring, matrix.

Scoring operationalizes the three evaluation metrics mechanically:
task interpretation (first tool call targets the scenario's scope),
independent execution (run completed with no interactive input), and
result accuracy (reported compliance equals the deterministic oracle).
"""

from __future__ import annotations

import json
import re
import tempfile
from dataclasses import dataclass
from datetime import date
from enum import Enum
from importlib import resources
from pathlib import Path

from .agent import RunStatus, Transcript, run
from .compliance import Overall, evaluate_account, evaluate_machine
from .llm import BackendConfig, HttpBackend, ScriptedBackend, load_script
from .tools import (
    FileSink,
    ShellMode,
    ShellPolicy,
    ToolRegistry,
    make_clock_tool,
    make_policy_reader_tool,
    make_send_report_tool,
    make_shell_tool,
    read_policy_document,
)
from .windows_parsers import parse_net_accounts, parse_net_user


class RunMode(str, Enum):
    SCRIPTED = "scripted"
    LIVE = "live"


class Reported(str, Enum):
    COMPLIANT = "compliant"
    NON_COMPLIANT = "non-compliant"
    INDETERMINATE = "indeterminate"


class FixtureMissing(FileNotFoundError):
    pass


class ScriptMissing(FileNotFoundError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    scenario_id: str
    prompt: str
    scope: str  # "account" | "machine"
    subject: str
    net_user_fixture: str | None
    net_accounts_fixture: str | None
    policy_fixture: str
    clock_date: date
    script_file: str
    expected_compliance: Overall


@dataclass
class ScenarioResult:
    scenario_id: str
    interpreted_task: bool
    executed_independently: bool
    reported_compliance: Reported
    oracle_compliance: Overall
    task_result: str  # "Pass" | "Fail"
    transcript: Transcript | None = None
    hedged: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario_id,
            "interpret_audit_task": "Yes" if self.interpreted_task else "No",
            "execute_task_independently": "Yes" if self.executed_independently else "No",
            "compliance_status": _status_label(self.reported_compliance),
            "oracle_compliance": _status_label(Reported(self.oracle_compliance.value)),
            "task_result": self.task_result,
            "hedged": self.hedged,
            "note": self.note,
        }


NEGATIVE_MARKERS = ("not compl", "non-compliant", "does not comply")
NEGATIVE_PATTERNS = (re.compile(r"\bfail"), re.compile(r"\bviolat"))
POSITIVE_MARKERS = ("compliant", "complies", "comply", "within the past")
# "pass" needs a word boundary so "password" never classifies an answer.
POSITIVE_PATTERNS = (re.compile(r"\bpass(?:es|ed)?\b"),)
HEDGE_MARKERS = ("if today's date",)


def classify_final_answer(answer: str) -> Reported:
    """Keyword classification; negative markers take precedence."""
    lowered = answer.lower()
    if any(m in lowered for m in NEGATIVE_MARKERS) or any(
        p.search(lowered) for p in NEGATIVE_PATTERNS
    ):
        return Reported.NON_COMPLIANT
    if any(m in lowered for m in POSITIVE_MARKERS) or any(
        p.search(lowered) for p in POSITIVE_PATTERNS
    ):
        return Reported.COMPLIANT
    return Reported.INDETERMINATE


def default_data_root() -> Path:
    return Path(str(resources.files("audit_agent").joinpath("data")))


def load_scenario(scenario_id: str, data_root: Path | None = None) -> ScenarioSpec:
    root = data_root or default_data_root()
    spec_path = root / "scenarios" / scenario_id / "spec.json"
    if not spec_path.is_file():
        raise FixtureMissing(f"no scenario bundle at {spec_path}")
    raw = json.loads(spec_path.read_text(encoding="utf-8"))
    fixtures = raw["fixtures"]
    return ScenarioSpec(
        scenario_id=raw["id"],
        prompt=raw["prompt"],
        scope=raw["scope"],
        subject=raw["subject"],
        net_user_fixture=fixtures.get("net_user"),
        net_accounts_fixture=fixtures.get("net_accounts"),
        policy_fixture=fixtures["policy"],
        clock_date=date.fromisoformat(fixtures["clock"]),
        script_file=raw["script"],
        expected_compliance=Overall(raw["expected_compliance"]),
    )


def list_scenarios(data_root: Path | None = None) -> list[ScenarioSpec]:
    root = data_root or default_data_root()
    ids = sorted(p.name for p in (root / "scenarios").iterdir() if p.is_dir())
    return [load_scenario(scenario_id, root) for scenario_id in ids]


def _read_fixture(root: Path, name: str) -> str:
    path = root / "fixtures" / name
    if not path.is_file():
        raise FixtureMissing(f"fixture file missing: {path}")
    return path.read_text(encoding="utf-8")


def _status_label(reported: Reported) -> str:
    return {
        Reported.COMPLIANT: "Compliant",
        Reported.NON_COMPLIANT: "Non-Compliant",
        Reported.INDETERMINATE: "Indeterminate",
    }[reported]


def oracle_compliance(spec: ScenarioSpec, data_root: Path | None = None) -> Overall:
    """Ground truth for the scenario, computed without any LLM backend."""
    root = data_root or default_data_root()
    policy = read_policy_document(root / "policy" / spec.policy_fixture)
    if spec.scope == "machine":
        if spec.net_accounts_fixture is None:
            raise FixtureMissing(f"scenario {spec.scenario_id} lacks a net_accounts fixture")
        settings = parse_net_accounts(_read_fixture(root, spec.net_accounts_fixture))
        return evaluate_machine(settings, policy, spec.clock_date, task_query=spec.prompt).overall
    if spec.net_user_fixture is None:
        raise FixtureMissing(f"scenario {spec.scenario_id} lacks a net_user fixture")
    account = parse_net_user(_read_fixture(root, spec.net_user_fixture))
    return evaluate_account(account, policy, spec.clock_date, task_query=spec.prompt).overall


def build_scenario_tools(
    spec: ScenarioSpec,
    data_root: Path | None = None,
    report_dir: str | Path | None = None,
) -> ToolRegistry:
    """Registry of the four tools bound to the scenario's fixture bundle."""
    root = data_root or default_data_root()
    fixture_map: dict[str, str] = {}
    if spec.net_user_fixture:
        text = _read_fixture(root, spec.net_user_fixture)
        username = parse_net_user(text).username
        fixture_map[f"net user {username}"] = text
    if spec.net_accounts_fixture:
        fixture_map["net accounts"] = _read_fixture(root, spec.net_accounts_fixture)
    shell_policy = ShellPolicy(mode=ShellMode.FIXTURE, fixture_map=fixture_map)
    sink = FileSink(report_dir or tempfile.mkdtemp(prefix="audit-reports-"))
    return ToolRegistry(
        [
            make_shell_tool(shell_policy),
            make_policy_reader_tool(root / "policy" / spec.policy_fixture),
            make_clock_tool(fixed_override=spec.clock_date),
            make_send_report_tool(sink, subject=f"audit-{spec.subject.lower()}"),
        ]
    )


def _first_call_interprets_task(spec: ScenarioSpec, transcript: Transcript) -> bool:
    if not transcript.steps:
        return False
    first = transcript.steps[0]
    if first.action_name == "PolicyReader":
        return True
    if first.action_name != "WindowsTask":
        return False
    probe = "net user" if spec.scope == "account" else "net accounts"
    return probe in first.action_input.lower()


def run_scenario(
    spec: ScenarioSpec,
    mode: RunMode = RunMode.SCRIPTED,
    data_root: Path | None = None,
    report_dir: str | Path | None = None,
    backend_config: BackendConfig | None = None,
) -> ScenarioResult:
    """Run the agent on one scenario and score it against the oracle."""
    root = data_root or default_data_root()
    oracle = oracle_compliance(spec, root)
    tools = build_scenario_tools(spec, root, report_dir)
    if mode is RunMode.SCRIPTED:
        script_path = root / "scenarios" / spec.scenario_id / spec.script_file
        if not script_path.is_file():
            raise ScriptMissing(f"script file missing: {script_path}")
        backend = ScriptedBackend(load_script(script_path))
    else:
        if backend_config is None:
            raise ValueError("live mode requires a backend configuration")
        backend = HttpBackend(backend_config)

    transcript = run(spec.prompt, tools, backend)
    interpreted = _first_call_interprets_task(spec, transcript)
    executed = transcript.status is RunStatus.COMPLETED
    answer = transcript.final_answer or ""
    reported = classify_final_answer(answer) if executed else Reported.INDETERMINATE
    hedged = any(m in answer.lower() for m in HEDGE_MARKERS)
    passed = executed and reported.value == oracle.value
    return ScenarioResult(
        scenario_id=spec.scenario_id,
        interpreted_task=interpreted,
        executed_independently=executed,
        reported_compliance=reported,
        oracle_compliance=oracle,
        task_result="Pass" if passed else "Fail",
        transcript=transcript,
        hedged=hedged,
        note=transcript.note,
    )


@dataclass
class ScenarioMatrix:
    rows: list[ScenarioResult]
    mode: RunMode

    @property
    def all_pass(self) -> bool:
        return all(row.task_result == "Pass" for row in self.rows)

    @property
    def gating(self) -> bool:
        # Live runs are advisory evidence only; they never gate.
        return self.mode is RunMode.SCRIPTED

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "all_pass": self.all_pass,
            "gating": self.gating,
            "rows": [row.to_dict() for row in self.rows],
        }


def run_all(
    mode: RunMode = RunMode.SCRIPTED,
    ids: list[str] | None = None,
    data_root: Path | None = None,
    report_dir: str | Path | None = None,
    backend_config: BackendConfig | None = None,
) -> ScenarioMatrix:
    """Run the selected scenarios (default: all six) in scenario-id order.

    A failing scenario renders as a Fail row and never aborts the matrix.
    """
    root = data_root or default_data_root()
    specs = list_scenarios(root)
    if ids is not None:
        known = {spec.scenario_id for spec in specs}
        unknown = [i for i in ids if i not in known]
        if unknown:
            raise KeyError(f"unknown scenario ids: {', '.join(unknown)}")
        specs = [spec for spec in specs if spec.scenario_id in ids]
    rows: list[ScenarioResult] = []
    for spec in specs:
        try:
            rows.append(run_scenario(spec, mode, root, report_dir, backend_config))
        except Exception as exc:  # noqa: BLE001 - isolate scenarios from each other
            rows.append(
                ScenarioResult(
                    scenario_id=spec.scenario_id,
                    interpreted_task=False,
                    executed_independently=False,
                    reported_compliance=Reported.INDETERMINATE,
                    oracle_compliance=spec.expected_compliance,
                    task_result="Fail",
                    note=f"{type(exc).__name__}: {exc}",
                )
            )
    return ScenarioMatrix(rows=rows, mode=mode)


def render_matrix_text(matrix: ScenarioMatrix) -> str:
    headers = (
        "Scenario",
        "Interpret Audit Task",
        "Execute Task Independently",
        "Compliance Status",
        "Task Result Evaluation",
    )
    table = [headers]
    for row in matrix.rows:
        record = row.to_dict()
        table.append(
            (
                f"Scenario {record['scenario']}",
                record["interpret_audit_task"],
                record["execute_task_independently"],
                record["compliance_status"],
                record["task_result"],
            )
        )
    widths = [max(len(line[col]) for line in table) for col in range(len(headers))]
    rendered = []
    for i, line in enumerate(table):
        rendered.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(line)).rstrip())
        if i == 0:
            rendered.append("  ".join("-" * w for w in widths))
    rendered.append("")
    rendered.append(f"mode={matrix.mode.value}  all_pass={matrix.all_pass}")
    return "\n".join(rendered)
