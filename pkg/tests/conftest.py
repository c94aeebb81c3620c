import pytest

from kgbeams.core import HG, LG, derive_parameters


def reference(mode=HG(0, 0), **kwargs):
    """The reference beam: m0=1, w0=2, k3=1 in natural units, L=1."""
    return derive_parameters(1.0, 2.0, 1.0, mode, **kwargs)


@pytest.fixture
def fundamental():
    return reference()


@pytest.fixture
def hg12():
    return reference(HG(1, 2))


@pytest.fixture
def lg10():
    return reference(LG(1, 0))


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, summary: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {summary}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
