from __future__ import annotations

from pathlib import Path

import pytest

from audit_agent.scenarios import default_data_root
from audit_agent.tools import read_policy_document


@pytest.fixture(scope="session")
def data_root() -> Path:
    return default_data_root()


@pytest.fixture(scope="session")
def fixtures_dir(data_root: Path) -> Path:
    return data_root / "fixtures"


@pytest.fixture(scope="session")
def policy_path(data_root: Path) -> Path:
    return data_root / "policy" / "cis_password_policy.txt"


@pytest.fixture(scope="session")
def policy_set(policy_path: Path):
    return read_policy_document(policy_path)


@pytest.fixture(scope="session")
def patrick_text(fixtures_dir: Path) -> str:
    return (fixtures_dir / "net_user_patrick.txt").read_text()


@pytest.fixture(scope="session")
def penny_text(fixtures_dir: Path) -> str:
    return (fixtures_dir / "net_user_penny.txt").read_text()


@pytest.fixture(scope="session")
def accounts_before_text(fixtures_dir: Path) -> str:
    return (fixtures_dir / "net_accounts_before.txt").read_text()


@pytest.fixture(scope="session")
def accounts_after_text(fixtures_dir: Path) -> str:
    return (fixtures_dir / "net_accounts_after.txt").read_text()
