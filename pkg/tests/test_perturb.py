from fractions import Fraction as F

import pytest

from flowcoef.errors import NoValidDirection, UnsupportedK
from flowcoef.evaluator import g_max_exhaustive, g_max_fixed, profile_slope, profiles_matching
from flowcoef.perturb import (build_cdd, build_shf, delta_star, epsilon_star, epsilon_star_search,
                              h_slope, max_valid_epsilon, max_valid_epsilon_profiles, optimum)
from flowcoef.samples import enumerate_profiles, enumerate_samples, parse_classes, stats
from flowcoef.space import expand, expand_direction
import oracles

PERTURBED = [3, 4, 5, 7, 8, 9]


def test_optimal_values():
    for k, v in oracles.OPTIMA.items():
        assert optimum(k) == v


@pytest.mark.parametrize("k", PERTURBED)
def test_direction_step_and_point(k):
    d = delta_star(k)
    assert (d.xbar, d.ybar, d.abar, d.bbar) == tuple(F(v) for v in oracles.DELTA_STAR[k])
    assert epsilon_star(k) == oracles.EPS_STAR[k]
    p = build_cdd(k).cdd
    assert (p.x, p.y, p.a, p.b) == oracles.CDD[k]


@pytest.mark.parametrize("k", PERTURBED)
def test_step_is_the_linear_meeting_point(k):
    s = epsilon_star_search(k)
    assert s.linear_candidate == s.epsilon


@pytest.mark.parametrize("k", PERTURBED)
def test_max_sets(k):
    got = build_cdd(k).report.profiles
    want = profiles_matching(k, parse_classes(" | ".join(oracles.MAX_SETS[k]), k))
    assert got == want


@pytest.mark.parametrize("k", [2, 6, 10])
def test_no_single_direction_when_two_sizes_tie(k):
    if k == 2:
        with pytest.raises(ValueError):
            delta_star(k)
    else:
        with pytest.raises(NoValidDirection):
            delta_star(k)


def test_out_of_range():
    with pytest.raises(UnsupportedK):
        build_cdd(11)


@pytest.mark.parametrize("k", [3, 4])
def test_validity_bound_from_samples(k):
    assert max_valid_epsilon(k) == oracles.MAX_VALID_EPS[k]
    assert max_valid_epsilon_profiles(k) == oracles.MAX_VALID_EPS[k]


def test_validity_bound_k5_frozen():
    assert max_valid_epsilon(5) == oracles.MAX_VALID_EPS_DERIVED[5]


@pytest.mark.parametrize("k", [3, 4, 5])
def test_h_formula_matches_direct_difference(k):
    # below the validity bound no partial sum changes sign, so the value is
    # exactly linear in the step: compare with a plain difference quotient
    p, d = build_shf(k), delta_star(k)
    eps = F(1, 10 ** 4)
    base, step = expand(p).layers, expand(p.shifted(d, eps)).layers
    for s in enumerate_samples(k):
        diff = (oracles.g(step, s.elements) - oracles.g(base, s.elements)) / eps
        assert diff == h_slope(stats(s), d), str(s)


@pytest.mark.parametrize("k", [5, 7, 8, 9])
def test_h_formula_matches_one_sided_derivative(k):
    p, d = build_shf(k), delta_star(k)
    for pr in enumerate_profiles(k):
        assert h_slope(pr.stats(), d) == profile_slope(p, d, pr)


@pytest.mark.parametrize("k", [3, 4])
def test_exhaustive_confirms_improved_point(k):
    rep = g_max_exhaustive(expand(build_cdd(k).cdd))
    assert rep.value == oracles.OPTIMA[k]
    top, achievers = oracles.brute_max(expand(build_cdd(k).cdd).layers)
    assert rep.value == top and rep.count == len(achievers)
