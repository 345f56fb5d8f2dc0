"""Pydantic request/response models for the service API."""

from __future__ import annotations

import datetime as dt
from typing import Literal

from pydantic import BaseModel, Field


class StepModel(BaseModel):
    index: int
    thought: str | None = None
    action_name: str
    action_input: str
    observation: str
    duration_ms: int


class TranscriptModel(BaseModel):
    task_query: str
    output: str | None = None
    steps: list[StepModel] = Field(default_factory=list)
    status: str
    started_at: str
    ended_at: str
    note: str = ""


class AskRequest(BaseModel):
    prompt: str
    backend: Literal["scripted", "http"] = "scripted"
    script_path: str | None = None
    endpoint_url: str | None = None
    model_id: str = "gpt-4"
    fixtures: str | None = None
    state: Literal["before", "after"] = "before"
    policy: str | None = None
    report_dir: str | None = None
    date: dt.date | None = None
    max_steps: int = Field(default=15, ge=1)
    live_shell: bool = False


class ScenarioInfo(BaseModel):
    id: str
    prompt: str
    expected_compliance: str


class ScenarioRunRequest(BaseModel):
    ids: list[str] | None = None
    mode: Literal["scripted", "live"] = "scripted"
    report_dir: str | None = None
    endpoint_url: str | None = None
    model_id: str = "gpt-4"


class MatrixRowModel(BaseModel):
    scenario: str
    interpret_audit_task: str
    execute_task_independently: str
    compliance_status: str
    oracle_compliance: str
    task_result: str
    hedged: bool = False
    note: str = ""


class ScenarioRunResponse(BaseModel):
    mode: str
    all_pass: bool
    gating: bool
    rows: list[MatrixRowModel]


class CheckRequest(BaseModel):
    subject: str
    policy: str | None = None
    fixtures: str | None = None
    state: Literal["before", "after"] = "before"
    date: dt.date | None = None
    report_dir: str | None = None
    task_query: str = ""


class VerdictModel(BaseModel):
    rule_id: str
    observed: str
    expected: str
    compliant: bool
    gap: str | None = None


class ReportModel(BaseModel):
    schema_version: str
    subject: str
    audit_date: str
    task_query: str = ""
    overall: str
    verdicts: list[VerdictModel]
