from pathlib import Path

import pytest

from xlap.providers import fixture_bundle

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
PROVIDERS = FIXTURES / "providers"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def providers_dir() -> Path:
    return PROVIDERS


@pytest.fixture
def bundle(tmp_path):
    return fixture_bundle(PROVIDERS, tmp_path / "cache")


@pytest.fixture
def make_bundle(tmp_path):
    def factory(**kwargs):
        return fixture_bundle(PROVIDERS, tmp_path / "cache", **kwargs)

    return factory
