"""Shared fixtures: the worked-example curves and a pool of programmatic reals."""

from fractions import Fraction
from pathlib import Path

import pytest

from diocurve.polycurve import Curve, parse_curve
from diocurve.reals import DyadicSeries, geometric_dyadic, parse_real

DATA = Path(__file__).parent / "data"


def load_curve(name: str) -> Curve:
    return parse_curve((DATA / f"{name}.curve").read_text())


def curve_path(name: str) -> str:
    return str(DATA / f"{name}.curve")


@pytest.fixture(scope="session")
def v2():
    return load_curve("v2")


@pytest.fixture(scope="session")
def v3():
    return load_curve("v3")


@pytest.fixture(scope="session")
def v4():
    return load_curve("v4")


@pytest.fixture(scope="session")
def line():
    return load_curve("line")


@pytest.fixture(scope="session")
def c0():
    return load_curve("c0")


@pytest.fixture(scope="session")
def c1():
    return load_curve("c1")


@pytest.fixture(scope="session")
def c2():
    return load_curve("c2")


@pytest.fixture(scope="session")
def c3():
    return load_curve("c3")


@pytest.fixture(scope="session")
def ca():
    return load_curve("ca")


@pytest.fixture(scope="session")
def cb():
    return load_curve("cb")


# ratio-8 schedule: lambda_1 = 7, so records align with q = 2^(2 b_n) on
# the parabola and 2^(3 b_n) on the cubic
@pytest.fixture(scope="session")
def dy():
    return parse_real("dyadic:2,16,128,1024")


# doubling schedule: lambda_1 = 1, no certificate passes anywhere
@pytest.fixture(scope="session")
def doubling():
    return geometric_dyadic(1, 2, 24)


# sqrt(2) - 1; bounded partial quotients, usable wherever comparisons
# stay strict (certificates), not in record scans on k >= 2 where the
# quadratic relation makes distinct q share an error exactly
@pytest.fixture(scope="session")
def sqrt2m1():
    return parse_real("cf:0;2,...")


@pytest.fixture(scope="session")
def golden():
    return parse_real("cf:1;1,...")


def exact_value(real: DyadicSeries) -> Fraction:
    """The exact rational value of a finite dyadic series."""
    assert not real.extendable
    return sum(Fraction(1, 2**b) for b in real.exponents)
