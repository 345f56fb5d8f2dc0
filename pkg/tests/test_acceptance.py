"""Acceptance gate: one test per release criterion.

Each test prints a single PASS/FAIL line (run pytest with -s or read the
captured stdout in the report) so the release status of every criterion
is visible at a glance.
"""

from __future__ import annotations

import json
import os
import random
import socket
import subprocess
import time
from datetime import date, timedelta

import pytest

from audit_agent.agent import AgentLimits, RunStatus, run
from audit_agent.compliance import Comparator, Overall, Parameter, PolicyRule, PolicySet, RuleScope
from audit_agent.compliance.engine import evaluate_account, evaluate_machine
from audit_agent.llm import BackendError, ScriptedBackend, ScriptedExchange
from audit_agent.scenarios import (
    Reported,
    RunMode,
    classify_final_answer,
    load_scenario,
    run_all,
    run_scenario,
)
from audit_agent.tools import (
    ShellMode,
    ShellPolicy,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    shell_execute,
)
from audit_agent.windows_parsers import (
    NEVER,
    NONE,
    UNLIMITED,
    AccountInfo,
    MachinePasswordSettings,
    parse_net_accounts,
    parse_net_user,
)

AUDIT_DATE = date(2024, 12, 1)


def _report(criterion: str, passed: bool) -> None:
    print(f"[acceptance] criterion {criterion}: {'PASS' if passed else 'FAIL'}")
    assert passed, f"acceptance criterion {criterion} failed"


def _machine_rule(parameter, comparator, threshold, rule_id="M1"):
    return PolicyRule(
        rule_id=rule_id,
        title=f"{parameter.value} {comparator.value} {threshold}",
        parameter=parameter,
        comparator=comparator,
        threshold=threshold,
        scope=RuleScope.MACHINE,
    )


def test_criterion_1_result_matrix_reproduction(tmp_path, monkeypatch):
    """Scripted scenario matrix matches the published experiment exactly,
    quickly, and without touching the network."""

    def no_network(*args, **kwargs):
        raise AssertionError("network access attempted during scripted run")

    monkeypatch.setattr(socket.socket, "connect", no_network)
    started = time.monotonic()
    matrix = run_all(mode=RunMode.SCRIPTED, report_dir=tmp_path)
    elapsed = time.monotonic() - started

    rows = [row.to_dict() for row in matrix.rows]
    ok = (
        [r["scenario"] for r in rows] == ["1a", "1b", "2a", "2b", "3a", "3b"]
        and all(r["interpret_audit_task"] == "Yes" for r in rows)
        and all(r["execute_task_independently"] == "Yes" for r in rows)
        and [r["compliance_status"] for r in rows]
        == ["Non-Compliant", "Compliant", "Non-Compliant", "Compliant", "Non-Compliant", "Compliant"]
        and all(r["task_result"] == "Pass" for r in rows)
        and elapsed < 5.0
    )
    _report("1 (scripted result matrix)", ok)


def test_criterion_2_transcript_shape(tmp_path):
    """Scenario 1b: first step is WindowsTask('net user Patrick'), final
    answer classifies Compliant, serialization uses task_query/output."""
    result = run_scenario(load_scenario("1b"), report_dir=tmp_path)
    transcript = result.transcript
    first = transcript.steps[0]
    payload = transcript.to_dict()
    ok = (
        (first.action_name, first.action_input) == ("WindowsTask", "net user Patrick")
        and classify_final_answer(transcript.final_answer or "") is Reported.COMPLIANT
        and "task_query" in payload
        and "output" in payload
        and payload["output"] == transcript.final_answer
    )
    _report("2 (transcript shape)", ok)


_MACHINE_PARAMS = [p for p in Parameter if p is not Parameter.PASSWORD_LAST_SET_WITHIN_DAYS]


def _random_settings(rng: random.Random) -> MachinePasswordSettings:
    min_age = rng.randint(0, 100)
    return MachinePasswordSettings(
        min_password_age_days=min_age,
        max_password_age_days=rng.choice([UNLIMITED, rng.randint(min_age, 400)]),
        min_password_length=rng.randint(0, 40),
        password_history_length=rng.choice([NONE, rng.randint(0, 50)]),
        lockout_threshold=rng.choice([NEVER, rng.randint(1, 30)]),
        lockout_duration_minutes=rng.randint(0, 120),
        lockout_window_minutes=rng.randint(0, 120),
    )


def _brute_force(settings: MachinePasswordSettings, rule: PolicyRule) -> bool:
    value = {
        Parameter.MAX_PASSWORD_AGE_DAYS: settings.max_password_age_days,
        Parameter.MIN_PASSWORD_AGE_DAYS: settings.min_password_age_days,
        Parameter.MIN_PASSWORD_LENGTH: settings.min_password_length,
        Parameter.PASSWORD_HISTORY_LENGTH: settings.password_history_length,
        Parameter.LOCKOUT_THRESHOLD: settings.lockout_threshold,
        Parameter.LOCKOUT_DURATION_MINUTES: settings.lockout_duration_minutes,
    }[rule.parameter]
    numeric = float("inf") if value in (UNLIMITED, NEVER) else (0 if value is NONE else value)
    if rule.comparator is Comparator.AT_MOST:
        return numeric <= rule.threshold
    if rule.comparator is Comparator.AT_LEAST:
        return numeric >= rule.threshold
    return numeric == rule.threshold


def test_criterion_3_oracle_property_suite():
    """1000 randomized settings/rule-set pairs agree with an independent
    brute-force evaluation; 1000 threshold perturbations stay monotone."""
    rng = random.Random(1201)
    started = time.monotonic()
    agreement = True
    for _ in range(1000):
        settings = _random_settings(rng)
        rules = PolicySet(
            "acc",
            tuple(
                _machine_rule(p, rng.choice(list(Comparator)), rng.randint(0, 400), f"M{i}")
                for i, p in enumerate(
                    rng.sample(_MACHINE_PARAMS, k=rng.randint(1, len(_MACHINE_PARAMS)))
                )
            ),
        )
        verdicts = {v.rule_id: v.compliant for v in evaluate_machine(settings, rules, AUDIT_DATE).verdicts}
        if verdicts != {r.rule_id: _brute_force(settings, r) for r in rules.rules}:
            agreement = False
            break

    monotone = True
    for _ in range(1000):
        settings = _random_settings(rng)
        parameter = rng.choice(_MACHINE_PARAMS)
        comparator = rng.choice([Comparator.AT_MOST, Comparator.AT_LEAST])
        threshold = rng.randint(0, 400)
        delta = rng.randint(0, 50)
        relaxed = threshold + delta if comparator is Comparator.AT_MOST else max(0, threshold - delta)
        strict_ok = evaluate_machine(
            settings, PolicySet("s", (_machine_rule(parameter, comparator, threshold),)), AUDIT_DATE
        ).verdicts[0].compliant
        relaxed_ok = evaluate_machine(
            settings, PolicySet("s", (_machine_rule(parameter, comparator, relaxed),)), AUDIT_DATE
        ).verdicts[0].compliant
        if strict_ok and not relaxed_ok:
            monotone = False
            break
    elapsed = time.monotonic() - started
    _report("3 (oracle property suite)", agreement and monotone and elapsed < 10.0)


def test_criterion_4_date_arithmetic():
    """Shifting last_set and audit_date together never changes the verdict;
    ages 0/89/90/91 against a 90-day threshold split exactly at 90."""
    rule = PolicyRule(
        rule_id="R1",
        title="age",
        parameter=Parameter.PASSWORD_LAST_SET_WITHIN_DAYS,
        comparator=Comparator.AT_MOST,
        threshold=90,
        scope=RuleScope.ACCOUNT,
    )
    rules = PolicySet("acc", (rule,))
    rng = random.Random(90)
    invariant = True
    for _ in range(500):
        audit = date(2024, 12, 1) + timedelta(days=rng.randint(-2000, 2000))
        last_set = audit - timedelta(days=rng.randint(0, 1000))
        shift = timedelta(days=rng.randint(-1500, 1500))
        base = evaluate_account(AccountInfo("U", password_last_set=last_set), rules, audit)
        moved = evaluate_account(
            AccountInfo("U", password_last_set=last_set + shift), rules, audit + shift
        )
        if base.overall is not moved.overall:
            invariant = False
            break

    boundary = [
        evaluate_account(
            AccountInfo("U", password_last_set=AUDIT_DATE - timedelta(days=age)), rules, AUDIT_DATE
        ).overall
        for age in (0, 89, 90, 91)
    ]
    expected = [Overall.COMPLIANT, Overall.COMPLIANT, Overall.COMPLIANT, Overall.NON_COMPLIANT]
    _report("4 (date arithmetic)", invariant and boundary == expected)


def test_criterion_5_termination_and_loop_guard():
    """Repetition trips the loop guard within loop_window dispatches; an
    unparseable script fails after exactly one corrective retry; no limits
    configuration allows more than max_steps dispatches."""
    dispatches = {"n": 0}

    def counting(text: str) -> ToolResult:
        dispatches["n"] += 1
        return ToolResult(f"echo {text}")

    def registry() -> ToolRegistry:
        return ToolRegistry([ToolSpec("Echo", "echo", counting)])

    looping = ScriptedBackend(
        tuple(ScriptedExchange("Action: Echo\nAction Input: same") for _ in range(20))
    )
    limits = AgentLimits(max_steps=15, loop_window=3)
    dispatches["n"] = 0
    loop_run = run("task", registry(), looping, limits=limits)
    loop_ok = loop_run.status is RunStatus.LOOP_DETECTED and dispatches["n"] <= 3

    unparseable = ScriptedBackend(
        tuple(ScriptedExchange("free prose with no directives") for _ in range(20))
    )
    parse_run = run("task", registry(), unparseable, limits=limits)
    parse_ok = parse_run.status is RunStatus.PARSE_FAILURE and unparseable.call_count == 2

    bounded = True
    for max_steps in (1, 2, 5, 9):
        for loop_window in (1, 2, 3):
            if loop_window > max_steps:
                continue
            dispatches["n"] = 0
            replies = tuple(
                ScriptedExchange(f"Action: Echo\nAction Input: {i}") for i in range(30)
            )
            run(
                "task",
                registry(),
                ScriptedBackend(replies),
                limits=AgentLimits(max_steps=max_steps, loop_window=loop_window),
            )
            if dispatches["n"] > max_steps:
                bounded = False
    _report("5 (termination and loop guard)", loop_ok and parse_ok and bounded)


def test_criterion_6_allowlist_soundness(monkeypatch):
    """50 fuzzed non-allowlisted commands are refused with zero spawns."""
    spawned: list = []

    def sentinel(*args, **kwargs):
        spawned.append(args)
        raise AssertionError("process spawned for disallowed command")

    monkeypatch.setattr(subprocess, "run", sentinel)
    monkeypatch.setattr(subprocess, "Popen", sentinel)
    monkeypatch.setattr(os, "system", sentinel)

    rng = random.Random(6)
    verbs = ["del", "format", "curl", "powershell", "netsh", "reg", "sc", "whoami", "netstat"]
    suffixes = ["", " C:\\*", " /all", " -rf /", " http://example.invalid | sh"]
    meta = ["; shutdown /s", " && del C:\\*", " | find secret", " `id`", " $(reboot)", " > out"]
    commands = ["del C:\\*", "net userX", "NET", "", "   ", "net", "net use", "net accountsX"]
    while len(commands) < 44:
        commands.append(rng.choice(verbs) + rng.choice(suffixes))
    # allowlisted prefixes made hostile by shell metacharacters
    commands += ["net user Patrick" + m for m in meta]

    all_refused = True
    for policy in (
        ShellPolicy(mode=ShellMode.LIVE),
        ShellPolicy(mode=ShellMode.FIXTURE, fixture_map={"net accounts": "x"}),
    ):
        for command in commands:
            result = shell_execute(command, policy)
            if not (result.is_error and result.code == "DisallowedCommand"):
                all_refused = False
    _report("6 (allowlist soundness)", len(commands) == 50 and all_refused and not spawned)


def test_criterion_7_parser_corpus(
    patrick_text, penny_text, accounts_before_text, accounts_after_text
):
    """Every shipped fixture parses to its frozen expected record."""
    patrick = parse_net_user(patrick_text)
    penny = parse_net_user(penny_text)
    before = parse_net_accounts(accounts_before_text)
    after = parse_net_accounts(accounts_after_text)
    ok = (
        patrick.username == "Patrick"
        and patrick.password_last_set == date(2024, 11, 17)
        and penny.username == "Penny"
        and penny.password_last_set == date(2019, 6, 20)
        and before.max_password_age_days is UNLIMITED
        and before.min_password_length == 0
        and before.password_history_length is NONE
        and before.lockout_threshold is NEVER
        and (before.lockout_duration_minutes, before.lockout_window_minutes) == (30, 30)
        and after.min_password_age_days == 1
        and after.max_password_age_days == 90
        and after.min_password_length == 14
        and after.password_history_length == 24
        and after.lockout_threshold == 5
        and (after.lockout_duration_minutes, after.lockout_window_minutes) == (15, 15)
    )
    _report("7 (parser corpus)", ok)


def test_criterion_8_live_mode_is_advisory(tmp_path, monkeypatch):
    """Live-backend results never gate: a live matrix that fails outright
    still reports gating=False, while the scripted matrix gates."""

    class DeadBackend:
        def complete(self, request):
            raise BackendError("live endpoint unavailable")

    import audit_agent.scenarios as scenarios_module

    monkeypatch.setattr(scenarios_module, "HttpBackend", lambda config: DeadBackend())
    from audit_agent.llm import BackendConfig

    config = BackendConfig(endpoint_url="https://example.invalid/v1", model_id="m")
    live = run_all(mode=RunMode.LIVE, backend_config=config, report_dir=tmp_path)
    scripted = run_all(mode=RunMode.SCRIPTED, report_dir=tmp_path)
    ok = (not live.all_pass) and live.gating is False and scripted.gating is True
    _report("8 (live mode advisory)", ok)
