from pathlib import Path

import pytest

from chainbn.core import ChainOfLoops

SPECS = Path(__file__).resolve().parent.parent / "specs"


def generic_chain(g: int) -> ChainOfLoops:
    """``l_i = 1``, ``n_i = 2g - 2 + i``: torsion ``2g - 1 + i`` exceeds ``2g - 2``."""
    return ChainOfLoops.from_lengths([1] * g, [2 * g - 2 + i for i in range(1, g + 1)])


@pytest.fixture
def g2():
    return ChainOfLoops.from_lengths([1, 1], [2, 2])


@pytest.fixture
def specs_dir():
    return SPECS


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
