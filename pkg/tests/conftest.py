import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from revkit import gallery, postulate_report  # noqa: E402


@pytest.fixture(scope="session")
def l_ex():
    return gallery.load("L_Ex")


@pytest.fixture(scope="session")
def l_ex_report(l_ex):
    return postulate_report(l_ex.logic, l_ex.operator, "full", ["G1", "G2", "G3", "G4", "G5", "G6"])


@pytest.fixture(scope="session")
def ex1012():
    return gallery.load("ex10_12")


@pytest.fixture(scope="session")
def four():
    return gallery.load("B_four")


@pytest.fixture(scope="session")
def pl2():
    return gallery.load("PL_2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[k])
    for line in mod.DETAILS:
        terminalreporter.write_line(line)
