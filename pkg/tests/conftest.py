import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))  # for the oracle module

from ghilb.algebra import Ring  # noqa: E402
from ghilb.cli import build_module, parse_input, parse_polynomial  # noqa: E402
from ghilb.ideals import Ideal  # noqa: E402

JOBS = HERE / "jobs"
GOLDEN = HERE / "golden"


def poly(ring, text):
    return parse_polynomial(text, ring, homogeneous=False)


def ideal(ring, *texts):
    return Ideal(ring, [poly(ring, t) for t in texts])


def load_job(name):
    return parse_input((JOBS / name).read_text())


@pytest.fixture
def xy():
    return Ring(["x", "y"])


@pytest.fixture(scope="session")
def job_a():
    return load_job("example_a.json")


@pytest.fixture(scope="session")
def job_b():
    return load_job("example_b.json")


@pytest.fixture(scope="session")
def module_a(job_a):
    return build_module(job_a)


@pytest.fixture(scope="session")
def module_b(job_b):
    return build_module(job_b)


def job_text(**kw):
    return json.dumps(kw)


# -- acceptance report -----------------------------------------------------------

ACCEPTANCE_LINES = []


@pytest.fixture
def accept():
    """record(number, ok, text): one line per criterion, shown in the terminal summary."""

    def record(number, ok, text):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
