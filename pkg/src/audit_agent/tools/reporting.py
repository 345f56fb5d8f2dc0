"""Audit report sinks: a file sink (reference) and best-effort SMTP delivery.

Every message opens with the binary answer line (COMPLIANT / NON-COMPLIANT)
followed by the gap list; full reports also get a JSON sidecar that parses
back into an equal ComplianceReport.
"""

from __future__ import annotations

import json
import os
import re
import smtplib
import time
import uuid
from dataclasses import dataclass
from email.message import EmailMessage
from pathlib import Path

from ..compliance import ComplianceReport, Overall
from .registry import ToolResult, ToolSpec


class SinkUnavailable(OSError):
    """The sink cannot accept messages (e.g. directory not writable)."""


@dataclass(frozen=True)
class DeliveryReceipt:
    sink_id: str
    location: str


def _slug(subject: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "-", subject).strip("-").lower()
    return slug or "report"


class FileSink:
    """Writes one message per report into a directory; filenames embed the
    subject and a timestamp so concurrent writes never collide."""

    sink_id = "file"

    def __init__(self, directory: str | Path):
        self._directory = Path(directory)

    def deliver(self, subject: str, body: str, sidecar: dict | None = None) -> DeliveryReceipt:
        directory = self._directory
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise SinkUnavailable(f"cannot create report directory {directory}: {exc}") from exc
        if not directory.is_dir() or not os.access(directory, os.W_OK):
            raise SinkUnavailable(f"report directory {directory} is not writable")
        stamp = time.strftime("%Y%m%dT%H%M%S")
        name = f"{_slug(subject)}-{stamp}-{uuid.uuid4().hex[:8]}"
        path = directory / f"{name}.txt"
        path.write_text(body, encoding="utf-8")
        if sidecar is not None:
            (directory / f"{name}.json").write_text(
                json.dumps(sidecar, indent=2), encoding="utf-8"
            )
        return DeliveryReceipt(sink_id=self.sink_id, location=str(path))


@dataclass(frozen=True)
class SmtpConfig:
    host: str
    port: int
    sender: str
    recipient: str


class SmtpSink:
    """Best-effort email delivery; never gates audit success."""

    sink_id = "smtp"

    def __init__(self, config: SmtpConfig):
        self._config = config

    def deliver(self, subject: str, body: str, sidecar: dict | None = None) -> DeliveryReceipt:
        config = self._config
        message = EmailMessage()
        message["Subject"] = subject
        message["From"] = config.sender
        message["To"] = config.recipient
        message.set_content(body)
        if sidecar is not None:
            message.add_attachment(
                json.dumps(sidecar, indent=2).encode("utf-8"),
                maintype="application",
                subtype="json",
                filename="report.json",
            )
        try:
            with smtplib.SMTP(config.host, config.port, timeout=10) as smtp:
                smtp.send_message(message)
        except OSError as exc:
            raise SinkUnavailable(f"SMTP delivery failed: {exc}") from exc
        return DeliveryReceipt(sink_id=self.sink_id, location=f"{config.host}:{config.port}")


def render_report_body(report: ComplianceReport) -> str:
    first = "COMPLIANT" if report.overall is Overall.COMPLIANT else "NON-COMPLIANT"
    lines = [first]
    lines.extend(f"- {gap}" for gap in report.gaps)
    lines.append("")
    lines.append(f"Subject: {report.subject}")
    lines.append(f"Audit date: {report.audit_date.isoformat()}")
    if report.task_query:
        lines.append(f"Task: {report.task_query}")
    return "\n".join(lines)


def emit_report(report: ComplianceReport, sink: FileSink | SmtpSink) -> DeliveryReceipt:
    """Deliver the report body plus its full JSON sidecar."""
    return sink.deliver(report.subject, render_report_body(report), report.to_dict())


def make_send_report_tool(
    sink: FileSink | SmtpSink,
    subject: str = "audit-report",
    name: str = "SendReport",
) -> ToolSpec:
    def handler(text: str) -> ToolResult:
        body = text.strip() or "(empty report)"
        try:
            receipt = sink.deliver(subject, body)
        except SinkUnavailable as exc:
            return ToolResult(output=str(exc), is_error=True, code="SinkUnavailable")
        return ToolResult(output=f"Report delivered to {receipt.location}")

    return ToolSpec(
        name=name,
        description=(
            "Sends the audit report. Input is the report body text; the first "
            "line must be COMPLIANT or NON-COMPLIANT, followed by any gaps."
        ),
        handler=handler,
    )
