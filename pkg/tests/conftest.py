import sys

import numpy as np
import pytest

from frontforge import presets


@pytest.fixture(scope="session")
def cosh():
    return presets.cosh_example()


@pytest.fixture(scope="session")
def cosh_surface(cosh):
    return cosh.surface()


@pytest.fixture(scope="session")
def translation():
    return presets.translation_example()


@pytest.fixture(scope="session")
def translation_surface(translation):
    return translation.surface()


@pytest.fixture(scope="session")
def swallowtail():
    return presets.swallowtail()


@pytest.fixture(scope="session")
def swallowtail_surface(swallowtail):
    return swallowtail.surface()


@pytest.fixture(scope="session")
def generic_edge():
    return presets.generic_edge()


@pytest.fixture(scope="session")
def generic_surface(generic_edge):
    return generic_edge.surface()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
