"""HTTP endpoints for running audits, scenarios, and oracle checks."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..llm import BackendConfig
from ..scenarios import FixtureMissing, RunMode, ScriptMissing, list_scenarios, run_all
from ..workflows import ConfigError, run_ask, run_check
from ..windows_parsers import ParseError
from ..compliance import NoRulesExtracted
from .schemas import (
    AskRequest,
    CheckRequest,
    MatrixRowModel,
    ReportModel,
    ScenarioInfo,
    ScenarioRunRequest,
    ScenarioRunResponse,
    TranscriptModel,
)


def create_app() -> FastAPI:
    app = FastAPI(title="audit-agent", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/ask", response_model=TranscriptModel)
    def ask(request: AskRequest) -> TranscriptModel:
        try:
            transcript = run_ask(
                prompt=request.prompt,
                backend=request.backend,
                script_path=request.script_path,
                endpoint_url=request.endpoint_url,
                model_id=request.model_id,
                fixtures=request.fixtures,
                state=request.state,
                policy_path=request.policy,
                date_override=request.date,
                report_dir=request.report_dir,
                max_steps=request.max_steps,
                live_shell=request.live_shell,
            )
        except (ConfigError, FixtureMissing, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return TranscriptModel(**transcript.to_dict())

    @app.get("/scenarios", response_model=list[ScenarioInfo])
    def scenarios() -> list[ScenarioInfo]:
        return [
            ScenarioInfo(
                id=spec.scenario_id,
                prompt=spec.prompt,
                expected_compliance=spec.expected_compliance.value,
            )
            for spec in list_scenarios()
        ]

    @app.post("/scenarios/run", response_model=ScenarioRunResponse)
    def scenarios_run(request: ScenarioRunRequest) -> ScenarioRunResponse:
        backend_config = None
        if request.mode == "live":
            if not request.endpoint_url:
                raise HTTPException(status_code=400, detail="live mode requires endpoint_url")
            backend_config = BackendConfig(
                endpoint_url=request.endpoint_url, model_id=request.model_id
            )
        try:
            matrix = run_all(
                mode=RunMode(request.mode),
                ids=request.ids,
                report_dir=request.report_dir,
                backend_config=backend_config,
            )
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=str(exc.args[0])) from exc
        return ScenarioRunResponse(
            mode=matrix.mode.value,
            all_pass=matrix.all_pass,
            gating=matrix.gating,
            rows=[MatrixRowModel(**row.to_dict()) for row in matrix.rows],
        )

    @app.post("/check", response_model=ReportModel)
    def check(request: CheckRequest) -> ReportModel:
        try:
            report = run_check(
                subject=request.subject,
                policy_path=request.policy,
                fixtures=request.fixtures,
                state=request.state,
                audit_date=request.date,
                report_dir=request.report_dir,
                task_query=request.task_query,
            )
        except (FixtureMissing, ScriptMissing, FileNotFoundError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except (ParseError, NoRulesExtracted, ConfigError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return ReportModel(**report.to_dict())

    return app


app = create_app()
