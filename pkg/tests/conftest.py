import random

import pytest

from prelie_ainfty.scalars import GF, QQ, ZZ

FIELDS = [QQ, GF(2), GF(3)]
ALL_RINGS = [QQ, GF(2), GF(3), ZZ]


@pytest.fixture
def rng():
    return random.Random(20261019)


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
