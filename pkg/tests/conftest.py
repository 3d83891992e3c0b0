from __future__ import annotations

from pathlib import Path

import pytest

from newtonpuiseux import OperatorSpec, parse_equation, parse_series
from newtonpuiseux.scalars import ExactField

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

WORKED_EQ = (FIXTURES / "sec23.eq").read_text().strip()
WORKED_SOL = (FIXTURES / "sec23.sol").read_text().strip()
FIG_EQ = (FIXTURES / "fig1.eq").read_text().strip()

DIFF = OperatorSpec.differential()
Q11 = ExactField(11)


def pts(cloud):
    """Cloud keys as a set of (str(iota), j) for readable comparisons."""
    return {(str(i), j) for i, j in cloud}


@pytest.fixture
def worked():
    return parse_equation(WORKED_EQ, DIFF, Q11), parse_series(WORKED_SOL, Q11)


@pytest.fixture
def fig():
    return parse_equation(FIG_EQ, DIFF)
