"""Rule extraction from password-policy documents (pre-extracted text).

Two passes over the document:

1. Canonical lines::

       rule <id>: <parameter> <= <integer> [scope=account|machine]

   The scope suffix is optional; it defaults to the parameter's natural
   scope and must agree with it when given.

2. Prose lines matched against a pattern table of CIS-style phrasings,
   e.g. "Ensure maximum password age is set to 90 or fewer days" or
   "minimum password length is set to 14 or more characters".

Duplicates by (parameter, comparator) keep the first occurrence.
"""

from __future__ import annotations

import re

from .rules import Comparator, Parameter, PolicyRule, PolicySet, RuleScope


class NoRulesExtracted(ValueError):
    """Zero rules parsed: wrong or garbled policy document."""


_CANONICAL_RE = re.compile(
    r"^\s*rule\s+(?P<id>\S+)\s*:\s*(?P<param>\w+)\s*(?P<cmp><=|>=|==)\s*(?P<n>\d+)"
    r"(?:\s*\[scope=(?P<scope>\w+)\])?\s*$",
    re.IGNORECASE,
)

# Phrase → parameter; checked in order, first hit wins.
_PARAMETER_PHRASES: list[tuple[str, Parameter]] = [
    ("maximum password age", Parameter.MAX_PASSWORD_AGE_DAYS),
    ("minimum password age", Parameter.MIN_PASSWORD_AGE_DAYS),
    ("minimum password length", Parameter.MIN_PASSWORD_LENGTH),
    ("password history", Parameter.PASSWORD_HISTORY_LENGTH),
    ("lockout threshold", Parameter.LOCKOUT_THRESHOLD),
    ("lockout duration", Parameter.LOCKOUT_DURATION_MINUTES),
    ("passwords are changed", Parameter.PASSWORD_LAST_SET_WITHIN_DAYS),
    ("password is changed", Parameter.PASSWORD_LAST_SET_WITHIN_DAYS),
    ("change password", Parameter.PASSWORD_LAST_SET_WITHIN_DAYS),
    ("password last set", Parameter.PASSWORD_LAST_SET_WITHIN_DAYS),
]

# Comparator cue → comparator; checked in order, first hit wins.
_COMPARATOR_PATTERNS: list[tuple[re.Pattern[str], Comparator]] = [
    (re.compile(r"(\d+)\s+or\s+fewer", re.IGNORECASE), Comparator.AT_MOST),
    (re.compile(r"(\d+)\s+or\s+less", re.IGNORECASE), Comparator.AT_MOST),
    (re.compile(r"(\d+)\s+or\s+more", re.IGNORECASE), Comparator.AT_LEAST),
    (re.compile(r"at\s+least\s+(\d+)", re.IGNORECASE), Comparator.AT_LEAST),
    (re.compile(r"no\s+more\s+than\s+(\d+)", re.IGNORECASE), Comparator.AT_MOST),
    (re.compile(r"exactly\s+(\d+)", re.IGNORECASE), Comparator.EQUALS),
    (re.compile(r"within\s+(?:the\s+past\s+)?(\d+)", re.IGNORECASE), Comparator.AT_MOST),
]

_NUMBERING_RE = re.compile(r"^\s*(\d+(?:\.\d+)+)\b")


def _natural_scope(parameter: Parameter) -> RuleScope:
    if parameter is Parameter.PASSWORD_LAST_SET_WITHIN_DAYS:
        return RuleScope.ACCOUNT
    return RuleScope.MACHINE


def _parse_canonical(line: str) -> PolicyRule | None:
    match = _CANONICAL_RE.match(line)
    if match is None:
        return None
    try:
        parameter = Parameter(match["param"].lower())
    except ValueError:
        return None
    scope = _natural_scope(parameter)
    if match["scope"] and match["scope"].lower() != scope.value:
        return None
    return PolicyRule(
        rule_id=match["id"],
        title=line.strip(),
        parameter=parameter,
        comparator=Comparator(match["cmp"]),
        threshold=int(match["n"]),
        scope=scope,
    )


def _parse_prose(line: str, fallback_id: str) -> PolicyRule | None:
    lowered = line.lower()
    parameter = next((p for phrase, p in _PARAMETER_PHRASES if phrase in lowered), None)
    if parameter is None:
        return None
    for pattern, comparator in _COMPARATOR_PATTERNS:
        match = pattern.search(line)
        if match:
            numbering = _NUMBERING_RE.match(line)
            return PolicyRule(
                rule_id=numbering.group(1) if numbering else fallback_id,
                title=line.strip(),
                parameter=parameter,
                comparator=comparator,
                threshold=int(match.group(1)),
                scope=_natural_scope(parameter),
            )
    return None


def parse_policy_text(text: str, source_id: str) -> PolicySet:
    """Extract machine-checkable rules from policy document text."""
    rules: list[PolicyRule] = []
    seen_keys: set[tuple[Parameter, Comparator]] = set()
    seen_ids: set[str] = set()
    for line in text.splitlines():
        if not line.strip():
            continue
        rule = _parse_canonical(line) or _parse_prose(line, fallback_id=f"P{len(rules) + 1}")
        if rule is None:
            continue
        key = (rule.parameter, rule.comparator)
        if key in seen_keys or rule.rule_id in seen_ids:
            continue
        seen_keys.add(key)
        seen_ids.add(rule.rule_id)
        rules.append(rule)
    if not rules:
        raise NoRulesExtracted(f"no policy rules extracted from {source_id!r}")
    return PolicySet(source_id=source_id, rules=tuple(rules))
