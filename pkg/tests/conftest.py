from pathlib import Path

import hypothesis
import pytest

from pprog.frontend import load

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

hypothesis.settings.register_profile("default", deadline=None, max_examples=100)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

_acceptance = {}


def program_source(name: str) -> str:
    return (PROGRAMS / f"{name}.pp").read_text()


@pytest.fixture
def coins():
    return load(program_source("coins_acyclic"))


@pytest.fixture
def order_effects():
    return load(program_source("order_effects"))


@pytest.fixture
def bell():
    return load(program_source("bell_no_signal"))


@pytest.fixture
def bell_signal():
    return load(program_source("bell_signal"))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "acceptance":
            number, title = value
            _acceptance[number] = (title, report.passed)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            item.user_properties.append(("acceptance", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}")
