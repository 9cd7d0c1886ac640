import io
from pathlib import Path

import pytest

from respkit import cli, load_model
from respkit.dsl import parse_answers, parse_requirements

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
GOLDEN = CORPUS / "golden"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def resp_path() -> Path:
    return CORPUS / "evacuation.resp"


@pytest.fixture(scope="session")
def answers_path() -> Path:
    return CORPUS / "evacuation.answers"


@pytest.fixture(scope="session")
def reqs_path() -> Path:
    return CORPUS / "evacuation.reqs"


@pytest.fixture(scope="session")
def evacuation(resp_path):
    return load_model(resp_path)


@pytest.fixture(scope="session")
def evacuation_answers(answers_path):
    return parse_answers(answers_path.read_text(encoding="utf-8"),
                         str(answers_path))


@pytest.fixture(scope="session")
def evacuation_reqs(reqs_path):
    return parse_requirements(reqs_path.read_text(encoding="utf-8"),
                              str(reqs_path))


@pytest.fixture()
def run_cli():
    """Invoke the CLI in-process, capturing streams."""

    def invoke(*argv: str):
        stdout, stderr = io.StringIO(), io.StringIO()
        status = cli.run(list(argv), stdout=stdout, stderr=stderr)
        return status, stdout.getvalue(), stderr.getvalue()

    return invoke


# ---------------------------------------------------------------------------
# Acceptance summary: one pass/fail line per criterion.
# ---------------------------------------------------------------------------

_acceptance_results: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or item.module.__name__ != "test_acceptance":
        return
    label = (item.function.__doc__ or item.name).strip().splitlines()[0]
    _acceptance_results.append((item.name, label, report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for _, label, outcome in sorted(_acceptance_results, key=lambda r: r[1]):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}: {label}")
