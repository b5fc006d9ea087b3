import random

import pytest
from hypothesis import HealthCheck, settings

from mixvol import MonomialConfiguration, MonomialSet, convex_hull
from mixvol._exact import exponent_vectors

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines collected by the acceptance tests, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    def log(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_tuple(rng, n, coord, max_pts=5):
    return [
        convex_hull([tuple(rng.randint(0, coord) for _ in range(n)) for _ in range(rng.randint(1, max_pts))])
        for _ in range(n)
    ]


def random_configuration(rng, nvars=3, s=2, max_degree=3, max_monomials=4):
    sets = []
    for _ in range(s):
        d = rng.randint(1, max_degree)
        pool = exponent_vectors(nvars, d)
        sets.append(MonomialSet.of(rng.sample(pool, rng.randint(1, min(max_monomials, len(pool))))))
    return MonomialConfiguration.from_sets(sets, num_vars=nvars)


@pytest.fixture
def rng():
    return random.Random(20261015)
