"""Shared fixtures: repo paths and session-scoped parses of the fixture DDPs."""

from __future__ import annotations

from pathlib import Path

import pytest

from ddpaudit.model import Platform
from ddpaudit.parsing import default_manifest, parse_ddp

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ddp_trees() -> dict[str, Path]:
    return {name: FIXTURES / "ddps" / name for name in ("tiktok", "instagram", "youtube")}


def _parse(name: str):
    platform = Platform(name)
    return parse_ddp(FIXTURES / "ddps" / name, default_manifest(platform), f"fixture-{name}")


@pytest.fixture(scope="session")
def tiktok_result():
    return _parse("tiktok")


@pytest.fixture(scope="session")
def instagram_result():
    return _parse("instagram")


@pytest.fixture(scope="session")
def youtube_result():
    return _parse("youtube")


@pytest.fixture(scope="session")
def platform_results(tiktok_result, instagram_result, youtube_result):
    return {
        "tiktok": tiktok_result,
        "instagram": instagram_result,
        "youtube": youtube_result,
    }
