from __future__ import annotations

import pytest

from multisymplectic.g2 import G2Space
from multisymplectic.linalg import Subspace

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def g2() -> G2Space:
    return G2Space.standard()


@pytest.fixture(scope="session")
def e():
    """Standard basis of Q^7, 1-based: ``e[1]`` is e1."""
    basis = Subspace.full(7).basis
    return {i + 1: b for i, b in enumerate(basis)}


def span(*rows, n: int = 7) -> Subspace:
    return Subspace.span(rows, n)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
