from pathlib import Path

import pytest

from kblinker.indexing import IndexConfig, build_indices, load_acronym_seeds
from kblinker.kb import load_kb

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture_kb(name: str, language: str = "en"):
    with (FIXTURES / name).open("r", encoding="utf-8") as fh:
        return load_kb(fh, language=language, name=name.rsplit(".", 1)[0])


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def rio_kb():
    return load_fixture_kb("rio.kb")


@pytest.fixture(scope="session")
def rio_bundle(rio_kb):
    return build_indices(rio_kb, IndexConfig())


@pytest.fixture(scope="session")
def psg_kb():
    return load_fixture_kb("psg.kb")


@pytest.fixture(scope="session")
def psg_bundle(psg_kb):
    seeds = load_acronym_seeds(FIXTURES / "acronyms.tsv")
    return build_indices(psg_kb, IndexConfig(acronym_seeds=seeds))


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[ACCEPTANCE] {status} {name}", flush=True)
