"""Rule evaluation against parsed account and machine records."""

from __future__ import annotations

import math
from datetime import date

from ..windows_parsers import NEVER, NONE, UNLIMITED, AccountInfo, MachinePasswordSettings, _Marker
from .rules import (
    PARAMETER_LABELS,
    Comparator,
    ComplianceReport,
    Parameter,
    PolicyRule,
    PolicySet,
    RuleScope,
    Verdict,
    build_report,
)


class FutureDate(ValueError):
    """password_last_set is after the audit date: clock/fixture inconsistency."""


class UnknownParameter(ValueError):
    """A rule references a parameter with no corresponding settings field."""


_SETTINGS_FIELDS = {
    Parameter.MAX_PASSWORD_AGE_DAYS: "max_password_age_days",
    Parameter.MIN_PASSWORD_AGE_DAYS: "min_password_age_days",
    Parameter.MIN_PASSWORD_LENGTH: "min_password_length",
    Parameter.PASSWORD_HISTORY_LENGTH: "password_history_length",
    Parameter.LOCKOUT_THRESHOLD: "lockout_threshold",
    Parameter.LOCKOUT_DURATION_MINUTES: "lockout_duration_minutes",
}


def _satisfies(observed: float, comparator: Comparator, threshold: int) -> bool:
    if comparator is Comparator.AT_MOST:
        return observed <= threshold
    if comparator is Comparator.AT_LEAST:
        return observed >= threshold
    return observed == threshold


def _as_number(value: int | _Marker) -> float:
    # Unlimited/Never act as +infinity; "None" history means nothing is kept.
    if value is UNLIMITED or value is NEVER:
        return math.inf
    if value is NONE:
        return 0
    return value


def _verdict(rule: PolicyRule, observed_value: float, observed_text: str) -> Verdict:
    ok = _satisfies(observed_value, rule.comparator, rule.threshold)
    gap = None
    if not ok:
        label = PARAMETER_LABELS[rule.parameter]
        gap = f"{label} is {observed_text} but must be {rule.expected_text}"
    return Verdict(rule.rule_id, observed_text, rule.expected_text, ok, gap)


def evaluate_account(
    account: AccountInfo,
    rules: PolicySet,
    audit_date: date,
    task_query: str = "",
) -> ComplianceReport:
    """Evaluate the account-scope rules against one account as of audit_date."""
    verdicts: list[Verdict] = []
    for rule in rules.scoped(RuleScope.ACCOUNT):
        if rule.parameter is not Parameter.PASSWORD_LAST_SET_WITHIN_DAYS:
            raise UnknownParameter(f"no account field for parameter {rule.parameter.value}")
        last_set = account.password_last_set
        if last_set is None:
            label = PARAMETER_LABELS[rule.parameter]
            verdicts.append(
                Verdict(
                    rule.rule_id,
                    "value unavailable",
                    rule.expected_text,
                    False,
                    f"{label} is value unavailable but must be {rule.expected_text}",
                )
            )
            continue
        if last_set > audit_date:
            raise FutureDate(
                f"password_last_set {last_set.isoformat()} is after audit date {audit_date.isoformat()}"
            )
        age_days = (audit_date - last_set).days
        verdicts.append(_verdict(rule, age_days, str(age_days)))
    return build_report(account.username, audit_date, tuple(verdicts), task_query)


def evaluate_machine(
    settings: MachinePasswordSettings,
    rules: PolicySet,
    audit_date: date | None = None,
    subject: str = "machine",
    task_query: str = "",
) -> ComplianceReport:
    """Evaluate the machine-scope rules against the machine-wide settings."""
    verdicts: list[Verdict] = []
    for rule in rules.scoped(RuleScope.MACHINE):
        field_name = _SETTINGS_FIELDS.get(rule.parameter)
        if field_name is None:
            raise UnknownParameter(f"no settings field for parameter {rule.parameter.value}")
        value = getattr(settings, field_name)
        verdicts.append(_verdict(rule, _as_number(value), str(value)))
    return build_report(subject, audit_date or date.today(), tuple(verdicts), task_query)
