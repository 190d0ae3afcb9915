import random
from fractions import Fraction
from itertools import permutations

import pytest

from diffpoly.core import (
    PairOp,
    PopulationVector,
    complete,
    cycle,
    helium_p5,
    path,
    uniform_vector,
)
from diffpoly.enumeration import PolytopeConfig
from diffpoly.optimize import (
    Objective,
    energy,
    exponential_populations,
    gardner_limit,
    monotone_extremal_check,
    optimize_over,
)

from conftest import random_population, random_sorted_population


def pv(*comps):
    return PopulationVector(comps)


class TestObjective:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Objective((0, 1, 2))

    def test_rejects_ties(self):
        with pytest.raises(ValueError):
            Objective((1, 1, 2))


class TestEnergy:
    def test_uniform_state(self):
        assert energy((1, 2, 3), uniform_vector(3)) == 2

    def test_direct_value(self, rho3):
        assert energy((1, 2, 3), rho3) == Fraction(19, 7)

    def test_dimension_mismatch(self, rho3):
        with pytest.raises(ValueError):
            energy((1, 2), rho3)

    def test_gardner_is_rearrangement_minimum(self):
        rnd = random.Random(40)
        for n in (3, 4, 5):
            rho = random_population(rnd, n)
            w = tuple(rnd.sample(range(1, 60), n))
            brute = min(
                sum(a * b for a, b in zip(w, perm)) for perm in permutations(rho)
            )
            assert gardner_limit(w, rho) == brute

    def test_gardner_trivial_cases(self, rho3):
        assert gardner_limit((1, 2, 3), rho3) == energy((1, 2, 3), pv("5/7", "2/7", "0"))
        u = uniform_vector(4)
        assert gardner_limit((1, 2, 3, 4), u) == energy((1, 2, 3, 4), u)


class TestExponentialPopulations:
    def test_exact_normalization_and_order(self):
        rho = exponential_populations(4)
        assert sum(rho) == 1
        assert list(rho) == sorted(rho)

    def test_matches_float_ratio(self):
        import math

        rho = exponential_populations(4)
        total = sum(math.e ** i for i in range(1, 5))
        for i, c in enumerate(rho, start=1):
            assert abs(float(c) - math.e ** i / total) < 1e-12

    def test_deterministic(self):
        assert exponential_populations(4) == exponential_populations(4)

    def test_minimum_digits(self):
        with pytest.raises(ValueError):
            exponential_populations(4, digits=10)


class TestOptimizeOver:
    def test_uniform_start_recovers_nothing(self):
        report = optimize_over(complete(3), uniform_vector(3), (1, 2, 3))
        assert report.recovered_fraction == 0
        assert report.optimal_energy == report.initial_energy

    def test_stopping_state_recovers_nothing(self):
        # anti-sorted populations against increasing weights: already optimal
        rho = pv("6/10", "3/10", "1/10")
        report = optimize_over(complete(3), rho, (1, 2, 3))
        assert report.recovered_fraction == 0

    def test_ordered_path_optimum_is_uniform(self):
        rnd = random.Random(41)
        rho = random_sorted_population(rnd, 4)
        for method in ("enumerate", "structured"):
            report = optimize_over(path(4), rho, (1, 2, 3, 4), method=method)
            assert [v.point for v in report.optimal_vertices] == [uniform_vector(4)]

    def test_methods_agree_on_the_complete_graph(self):
        rnd = random.Random(42)
        rho = random_sorted_population(rnd, 4)
        w = (3, 5, 7, 11)
        a = optimize_over(complete(4), rho, w, method="enumerate",
                          config=PolytopeConfig(use_blocks=False, classify=False))
        b = optimize_over(complete(4), rho, w, method="structured")
        assert a.optimal_energy == b.optimal_energy
        assert [v.point for v in a.optimal_vertices] == [v.point for v in b.optimal_vertices]

    def test_energy_ordering_invariant(self):
        rnd = random.Random(43)
        for _ in range(20):
            n = rnd.randrange(2, 5)
            rho = random_population(rnd, n)
            w = tuple(rnd.sample(range(1, 40), n))
            report = optimize_over(complete(n), rho, w,
                                   config=PolytopeConfig(use_blocks=False, classify=False))
            assert report.gardner_energy <= report.optimal_energy <= report.initial_energy
            assert 0 <= report.recovered_fraction <= 1

    def test_truncated_run_is_flagged(self, rho3):
        report = optimize_over(path(3), rho3, (1, 2, 3),
                               config=PolytopeConfig(max_depth=1, use_blocks=False,
                                                     classify=False))
        assert report.lower_bound_only
        assert report.completeness == "depth-bounded"

    def test_helium_report_is_certified_complete(self):
        rnd = random.Random(44)
        rho = random_sorted_population(rnd, 5)
        w = (1, 2, 3, 4, 5)
        report = optimize_over(helium_p5(), rho, w)
        assert report.completeness == "proven"
        assert not report.lower_bound_only
        assert report.gardner_energy <= report.optimal_energy < report.initial_energy

    def test_structured_needs_known_graph(self, rho3):
        with pytest.raises(ValueError):
            optimize_over(helium_p5(), uniform_vector(5), (1, 2, 3, 4, 5),
                          method="structured")

    def test_interior_samples_never_beat_the_optimum(self):
        rnd = random.Random(45)
        rho = random_sorted_population(rnd, 4)
        w = (1, 2, 3, 4)
        report = optimize_over(cycle(4), rho, w)
        points = [v.point for v in report.optimal_vertices]
        from diffpoly.enumeration import polytope

        verts = polytope(cycle(4), rho, PolytopeConfig(classify=False)).points()
        for _ in range(100):
            weights = [rnd.randrange(0, 10) for _ in verts]
            if sum(weights) == 0:
                weights[0] = 1
            total = sum(weights)
            mix = PopulationVector(
                sum(Fraction(wi, total) * v[t] for wi, v in zip(weights, verts))
                for t in range(4)
            )
            assert energy(w, mix) >= report.optimal_energy

    def test_json_fields(self, rho3):
        report = optimize_over(complete(3), rho3, (1, 2, 3))
        data = report.to_json()
        assert data["recovered_fraction"].count("/") == 1
        assert set(data["display"]) == {
            "initial_energy", "optimal_energy", "gardner_energy", "recovered_fraction",
        }
        assert data["optimal_vertices"][0]["sequence"] is not None


class TestMonotoneCheck:
    def test_reference_sequence(self, rho3):
        seq = [PairOp.of(2, 3), PairOp.of(1, 3), PairOp.of(1, 2)]
        # prefix energies with w=(1,2,3): 19/7 > 5/2 > 2 > 15/8
        energies = [Fraction(19, 7), Fraction(5, 2), Fraction(2), Fraction(15, 8)]
        state = rho3
        got = [energy((1, 2, 3), state)]
        for op in seq:
            state = op.apply(state)
            got.append(energy((1, 2, 3), state))
        assert got == energies
        assert monotone_extremal_check(seq, (1, 2, 3), rho3)

    def test_empty_sequence(self, rho3):
        assert monotone_extremal_check([], (1, 2, 3), rho3)

    def test_energy_raising_op_detected(self):
        rho = pv("6/10", "3/10", "1/10")  # anti-sorted: averaging raises f
        assert not monotone_extremal_check([PairOp.of(1, 3)], (1, 2, 3), rho)
