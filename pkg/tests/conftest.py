import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from goldens import COUNT_C, COUNT_LIFTED, COUNT_SOURCE  # noqa: E402

from kanlift.corpus import corpus  # noqa: E402
from kanlift.frontend import parse_c, parse_lustre  # noqa: E402

CORPUS_SIZE = 200


@pytest.fixture(scope="session")
def count_lifted():
    return parse_lustre(COUNT_LIFTED)


@pytest.fixture(scope="session")
def count_source():
    return parse_lustre(COUNT_SOURCE)


@pytest.fixture(scope="session")
def count_c():
    from kanlift.vertical import compile

    return compile(parse_lustre(COUNT_LIFTED))


@pytest.fixture(scope="session")
def count_c_parsed():
    return parse_c(COUNT_C)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(40, seed=11)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
