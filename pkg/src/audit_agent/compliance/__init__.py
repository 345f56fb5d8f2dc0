"""Deterministic password-policy model and evaluator (the audit ground truth)."""

from .engine import FutureDate, UnknownParameter, evaluate_account, evaluate_machine
from .policy_text import NoRulesExtracted, parse_policy_text
from .rules import (
    Comparator,
    ComplianceReport,
    Overall,
    Parameter,
    PolicyRule,
    PolicySet,
    RuleScope,
    Verdict,
    build_report,
    report_from_dict,
)

__all__ = [
    "Comparator",
    "ComplianceReport",
    "FutureDate",
    "NoRulesExtracted",
    "Overall",
    "Parameter",
    "PolicyRule",
    "PolicySet",
    "RuleScope",
    "UnknownParameter",
    "Verdict",
    "build_report",
    "evaluate_account",
    "evaluate_machine",
    "parse_policy_text",
    "report_from_dict",
]
