import pathlib

import pytest

from loopmatch import Interpreter, show

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture
def interp():
    return Interpreter()


@pytest.fixture
def bare():
    return Interpreter(prelude=False)


@pytest.fixture
def ev(interp):
    """Evaluate source text in a prelude session and return the last value, printed."""
    def run(text, take=None):
        values = interp.run(text)
        return show(values[-1], take)
    return run


def load_corpus(interp, name):
    return interp.run((CORPUS / name).read_text(encoding="utf-8"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
