from fractions import Fraction as F

import pytest

from randop.operators import Affine, Constant, DiagonalMap, Harmonic, RandomOperator, RankOneMap
from randop.prob_core import make_space
from randop.spaces import C00, basis

S23_MASSES = [("a", F(1, 2)), ("b", F(3, 10)), ("c", F(1, 5))]


def make_s1():
    space = make_space([("a", F(3, 5)), ("b", F(2, 5))])
    return RandomOperator.from_map(space, C00, C00, {"a": DiagonalMap(Constant(1)), "b": DiagonalMap(Constant(2))})


def make_s2():
    space = make_space(S23_MASSES)
    maps = {
        "a": DiagonalMap(Constant(1)),
        "b": DiagonalMap(Harmonic(2, -1)),
        "c": DiagonalMap(Affine(1, 0)),
    }
    return RandomOperator.from_map(space, C00, C00, maps)


def make_s3(corrupted=False):
    space = make_space(S23_MASSES)
    maps = {
        "a": DiagonalMap(Constant(1)),
        "b": DiagonalMap(Constant(1)),
        "c": RankOneMap(Affine(1, 0), basis(1)),
    }
    corruption = (space.event({"c"}), basis(2)) if corrupted else None
    return RandomOperator.from_map(space, C00, C00, maps, corruption)


def make_s4():
    space = make_space([("a", F(7, 10)), ("b", F(3, 10))])
    return RandomOperator.from_map(space, C00, C00, {"a": DiagonalMap(Constant(1)), "b": DiagonalMap(Affine(1, 0))})


@pytest.fixture
def s1():
    return make_s1()


@pytest.fixture
def s2():
    return make_s2()


@pytest.fixture
def s3():
    return make_s3()


@pytest.fixture
def s4():
    return make_s4()


# acceptance summary: one line per criterion ---------------------------------------

_AC_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "ac(n, text): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("ac")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n, text = marker.args
    prev = _AC_RESULTS.get(n, (text, True))
    if rep.when == "setup" and rep.passed:
        _AC_RESULTS.setdefault(n, (text, True))
        return
    _AC_RESULTS[n] = (text, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_AC_RESULTS):
        text, ok = _AC_RESULTS[n]
        terminalreporter.write_line(f"AC{n} {'PASS' if ok else 'FAIL'}: {text}")
