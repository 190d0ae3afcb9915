import random

import pytest

from diffpoly.core import PopulationVector


@pytest.fixture
def rho3():
    return PopulationVector(["0", "2/7", "5/7"])


def random_population(rnd: random.Random, n: int, bound: int = 50) -> PopulationVector:
    vals = [rnd.randrange(0, bound) for _ in range(n)]
    if sum(vals) == 0:
        vals[0] = 1
    return PopulationVector.normalized(vals)


def random_sorted_population(rnd: random.Random, n: int,
                             lo: int = 1, hi: int = 10 ** 6) -> PopulationVector:
    return PopulationVector.normalized(sorted(rnd.sample(range(lo, hi), n)))
