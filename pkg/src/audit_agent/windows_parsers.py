"""Parsers turning `net user` / `net accounts` text output into structured records.

Both commands print label/value lines; real output varies by Windows
version, so unknown labels are ignored and whitespace runs are tolerated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum


class ParseError(ValueError):
    """Command output could not be converted to a record."""


class MissingUserName(ParseError):
    """`net user` output lacks a "User name" line."""


class UnparseableDate(ParseError):
    """A date-valued field did not match the configured date format."""


class MissingField(ParseError):
    """`net accounts` output lacks a required setting line."""


class _Marker:
    """Singleton for the special words Windows prints instead of numbers."""

    __slots__ = ("_label",)

    def __init__(self, label: str) -> None:
        self._label = label

    def __repr__(self) -> str:
        return self._label

    def __str__(self) -> str:
        return self._label


#: Maximum password age is not enforced.
UNLIMITED = _Marker("Unlimited")
#: Password/lockout never expires or never triggers.
NEVER = _Marker("Never")
#: No password history is maintained.
NONE = _Marker("None")

_MARKERS = {"unlimited": UNLIMITED, "never": NEVER, "none": NONE}


class DateOrder(Enum):
    DAY_MONTH_YEAR = "dmy"
    MONTH_DAY_YEAR = "mdy"
    YEAR_MONTH_DAY = "ymd"


@dataclass(frozen=True)
class DateFormatConfig:
    """Locale-dependent layout of dates in `net user` output.

    Defaults to day-first with "/" separators (e.g. 17/11/2024).
    """

    order: DateOrder = DateOrder.DAY_MONTH_YEAR
    separator: str = "/"

    def parse(self, token: str) -> date:
        parts = token.split(self.separator)
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise UnparseableDate(f"{token!r} does not match {self.order.value} date format")
        a, b, c = (int(p) for p in parts)
        try:
            if self.order is DateOrder.DAY_MONTH_YEAR:
                return date(c, b, a)
            if self.order is DateOrder.MONTH_DAY_YEAR:
                return date(c, a, b)
            return date(a, b, c)
        except ValueError as exc:
            raise UnparseableDate(f"{token!r}: {exc}") from exc

    def format(self, value: date) -> str:
        if self.order is DateOrder.DAY_MONTH_YEAR:
            parts = (value.day, value.month, value.year)
        elif self.order is DateOrder.MONTH_DAY_YEAR:
            parts = (value.month, value.day, value.year)
        else:
            parts = (value.year, value.month, value.day)
        first, second, third = parts
        return f"{first:02d}{self.separator}{second:02d}{self.separator}{third:04d}"


@dataclass(frozen=True)
class AccountInfo:
    """Per-account password state as reported by `net user <name>`."""

    username: str
    password_last_set: date | None = None
    password_expires: date | _Marker | None = None
    password_changeable: date | None = None
    password_required: bool = True
    account_active: bool = True
    last_logon: date | _Marker | None = None

    def __post_init__(self) -> None:
        if not self.username:
            raise ValueError("username must be non-empty")
        if (
            isinstance(self.password_last_set, date)
            and isinstance(self.password_changeable, date)
            and self.password_last_set > self.password_changeable
        ):
            raise ValueError("password_last_set must not be after password_changeable")


@dataclass(frozen=True)
class MachinePasswordSettings:
    """Machine-wide password and lockout settings from `net accounts`."""

    min_password_age_days: int
    max_password_age_days: int | _Marker
    min_password_length: int
    password_history_length: int | _Marker
    lockout_threshold: int | _Marker
    lockout_duration_minutes: int
    lockout_window_minutes: int

    def __post_init__(self) -> None:
        if (
            isinstance(self.max_password_age_days, int)
            and self.min_password_age_days > self.max_password_age_days
        ):
            raise ValueError("min_password_age_days must not exceed max_password_age_days")


_NET_USER_LABELS = {
    "user name": "username",
    "account active": "account_active",
    "password last set": "password_last_set",
    "password expires": "password_expires",
    "password changeable": "password_changeable",
    "password required": "password_required",
    "last logon": "last_logon",
}

_DATE_FIELDS = {"password_last_set", "password_expires", "password_changeable", "last_logon"}
_BOOL_FIELDS = {"account_active", "password_required"}
# Fields where "Never" is meaningful rather than "no value".
_NEVER_FIELDS = {"password_expires", "last_logon"}


def _match_label(line: str, labels: dict[str, str]) -> tuple[str, str] | None:
    lowered = line.lower()
    for label, field_name in labels.items():
        if lowered.startswith(label):
            rest = line[len(label):]
            if rest == "" or rest[0].isspace():
                return field_name, rest.strip()
    return None


def parse_net_user(text: str, fmt: DateFormatConfig | None = None) -> AccountInfo:
    """Parse `net user <name>` output; unknown labels are ignored."""
    fmt = fmt or DateFormatConfig()
    found: dict[str, object] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        match = _match_label(line, _NET_USER_LABELS)
        if match is None:
            continue
        field_name, value = match
        if field_name in found:
            continue
        if field_name == "username":
            if value:
                found[field_name] = value
            continue
        if field_name in _BOOL_FIELDS:
            found[field_name] = value.lower() in ("yes", "true")
            continue
        # Date fields; values may carry a trailing time which is ignored.
        if not value:
            found[field_name] = None
        elif value.lower() == "never":
            found[field_name] = NEVER if field_name in _NEVER_FIELDS else None
        else:
            found[field_name] = fmt.parse(value.split()[0])
    if "username" not in found:
        raise MissingUserName("no 'User name' line found")
    return AccountInfo(**found)  # type: ignore[arg-type]


def render_account_info(info: AccountInfo, fmt: DateFormatConfig | None = None) -> str:
    """Render an AccountInfo back into the `net user` label/value layout."""
    fmt = fmt or DateFormatConfig()

    def show(value: object) -> str:
        if isinstance(value, date):
            return fmt.format(value)
        if isinstance(value, bool):
            return "Yes" if value else "No"
        return str(value)

    lines = [f"{'User name':<29}{info.username}"]
    for label, field_name in _NET_USER_LABELS.items():
        if field_name == "username":
            continue
        value = getattr(info, field_name)
        if value is None:
            continue
        lines.append(f"{label.capitalize():<29}{show(value)}")
    lines.append("The command completed successfully.")
    return "\n".join(lines)


_NET_ACCOUNTS_LABELS = {
    "minimum password age (days)": "min_password_age_days",
    "maximum password age (days)": "max_password_age_days",
    "minimum password length": "min_password_length",
    "length of password history maintained": "password_history_length",
    "lockout threshold": "lockout_threshold",
    "lockout duration (minutes)": "lockout_duration_minutes",
    "lockout observation window (minutes)": "lockout_window_minutes",
}

# Which special markers each field may legally carry.
_ALLOWED_MARKERS = {
    "max_password_age_days": {UNLIMITED},
    "password_history_length": {NONE},
    "lockout_threshold": {NEVER},
}


def parse_net_accounts(text: str) -> MachinePasswordSettings:
    """Parse `net accounts` output; all seven policy settings are required."""
    found: dict[str, object] = {}
    for line in text.splitlines():
        if ":" not in line:
            continue
        label, _, value = line.partition(":")
        label = re.sub(r"\s+", " ", label).strip().lower()
        field_name = _NET_ACCOUNTS_LABELS.get(label)
        if field_name is None or field_name in found:
            continue
        value = value.strip()
        marker = _MARKERS.get(value.lower())
        if marker is not None:
            if marker not in _ALLOWED_MARKERS.get(field_name, set()):
                raise ParseError(f"unexpected value {value!r} for {label!r}")
            found[field_name] = marker
        elif re.fullmatch(r"\d+", value):
            found[field_name] = int(value)
        else:
            raise ParseError(f"unexpected value {value!r} for {label!r}")
    missing = [name for name in _NET_ACCOUNTS_LABELS.values() if name not in found]
    if missing:
        raise MissingField(f"missing settings: {', '.join(sorted(missing))}")
    return MachinePasswordSettings(**found)  # type: ignore[arg-type]
