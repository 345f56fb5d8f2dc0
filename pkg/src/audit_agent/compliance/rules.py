"""Policy rules, verdicts, and the compliance report with its JSON schema."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum

REPORT_SCHEMA_VERSION = "1"


class Parameter(str, Enum):
    MAX_PASSWORD_AGE_DAYS = "max_password_age_days"
    MIN_PASSWORD_AGE_DAYS = "min_password_age_days"
    MIN_PASSWORD_LENGTH = "min_password_length"
    PASSWORD_HISTORY_LENGTH = "password_history_length"
    LOCKOUT_THRESHOLD = "lockout_threshold"
    LOCKOUT_DURATION_MINUTES = "lockout_duration_minutes"
    PASSWORD_LAST_SET_WITHIN_DAYS = "password_last_set_within_days"


#: Human-readable names used in rendered rule lists and gap messages.
PARAMETER_LABELS = {
    Parameter.MAX_PASSWORD_AGE_DAYS: "maximum password age (days)",
    Parameter.MIN_PASSWORD_AGE_DAYS: "minimum password age (days)",
    Parameter.MIN_PASSWORD_LENGTH: "minimum password length",
    Parameter.PASSWORD_HISTORY_LENGTH: "password history length",
    Parameter.LOCKOUT_THRESHOLD: "lockout threshold",
    Parameter.LOCKOUT_DURATION_MINUTES: "lockout duration (minutes)",
    Parameter.PASSWORD_LAST_SET_WITHIN_DAYS: "days since password last set",
}


class Comparator(str, Enum):
    AT_MOST = "<="
    AT_LEAST = ">="
    EQUALS = "=="

    @property
    def phrase(self) -> str:
        return {"<=": "at most", ">=": "at least", "==": "exactly"}[self.value]


class RuleScope(str, Enum):
    ACCOUNT = "account"
    MACHINE = "machine"


class Overall(str, Enum):
    COMPLIANT = "compliant"
    NON_COMPLIANT = "non-compliant"


@dataclass(frozen=True)
class PolicyRule:
    rule_id: str
    title: str
    parameter: Parameter
    comparator: Comparator
    threshold: int
    scope: RuleScope

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        account_param = self.parameter is Parameter.PASSWORD_LAST_SET_WITHIN_DAYS
        if account_param != (self.scope is RuleScope.ACCOUNT):
            raise ValueError(
                f"parameter {self.parameter.value} is inconsistent with scope {self.scope.value}"
            )

    @property
    def expected_text(self) -> str:
        return f"{self.comparator.phrase} {self.threshold}"


@dataclass(frozen=True)
class PolicySet:
    source_id: str
    rules: tuple[PolicyRule, ...]

    def __post_init__(self) -> None:
        ids = [rule.rule_id for rule in self.rules]
        if len(ids) != len(set(ids)):
            raise ValueError("rule_ids must be unique within a PolicySet")

    def scoped(self, scope: RuleScope) -> tuple[PolicyRule, ...]:
        return tuple(rule for rule in self.rules if rule.scope is scope)


@dataclass(frozen=True)
class Verdict:
    rule_id: str
    observed: str
    expected: str
    compliant: bool
    gap: str | None = None

    def __post_init__(self) -> None:
        if self.compliant == (self.gap is not None):
            raise ValueError("gap must be present exactly when non-compliant")


@dataclass(frozen=True)
class ComplianceReport:
    subject: str
    audit_date: date
    verdicts: tuple[Verdict, ...]
    overall: Overall
    task_query: str = ""

    def __post_init__(self) -> None:
        all_ok = all(v.compliant for v in self.verdicts)
        if (self.overall is Overall.COMPLIANT) != all_ok:
            raise ValueError("overall must be the conjunction of the verdicts")

    @property
    def gaps(self) -> tuple[str, ...]:
        return tuple(v.gap for v in self.verdicts if v.gap is not None)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "subject": self.subject,
            "audit_date": self.audit_date.isoformat(),
            "task_query": self.task_query,
            "overall": self.overall.value,
            "verdicts": [
                {
                    "rule_id": v.rule_id,
                    "observed": v.observed,
                    "expected": v.expected,
                    "compliant": v.compliant,
                    "gap": v.gap,
                }
                for v in self.verdicts
            ],
        }


def build_report(
    subject: str,
    audit_date: date,
    verdicts: tuple[Verdict, ...],
    task_query: str = "",
) -> ComplianceReport:
    """Assemble a report, computing the overall answer as the conjunction."""
    overall = Overall.COMPLIANT if all(v.compliant for v in verdicts) else Overall.NON_COMPLIANT
    return ComplianceReport(subject, audit_date, verdicts, overall, task_query)


def report_from_dict(payload: dict) -> ComplianceReport:
    """Inverse of ComplianceReport.to_dict (round-trips exactly)."""
    verdicts = tuple(
        Verdict(
            rule_id=v["rule_id"],
            observed=v["observed"],
            expected=v["expected"],
            compliant=v["compliant"],
            gap=v.get("gap"),
        )
        for v in payload["verdicts"]
    )
    return ComplianceReport(
        subject=payload["subject"],
        audit_date=date.fromisoformat(payload["audit_date"]),
        verdicts=verdicts,
        overall=Overall(payload["overall"]),
        task_query=payload.get("task_query", ""),
    )
