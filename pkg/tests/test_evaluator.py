import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcoef.evaluator import (g_fixed, g_max_exhaustive, g_max_fixed, g_sample, in_s_dagger,
                                profile_in_dagger, shf_value_closed)
from flowcoef.perturb import build_shf
from flowcoef.samples import enumerate_profiles, enumerate_samples, profile_of, stats, type_of
from flowcoef.space import (Permutation, apply_permutation, combine, expand, random_fixed_point,
                            random_member)
import oracles

seeds = st.integers(0, 10 ** 6)


@given(st.integers(2, 3), seeds)
@settings(max_examples=25, deadline=None)
def test_exhaustive_max_matches_brute_force(k, seed):
    c = random_member(k, random.Random(seed))
    rep = g_max_exhaustive(c, threads=2)
    top, achievers = oracles.brute_max(c.layers)
    assert rep.value == top
    assert rep.count == len(achievers)


@given(st.integers(2, 4), seeds, seeds, st.fractions(0, 1))
@settings(max_examples=25, deadline=None)
def test_maximum_is_convex(k, s1, s2, t):
    c1 = random_member(k, random.Random(s1))
    c2 = random_member(k, random.Random(s2))
    mid = combine(t, c1, 1 - t, c2)
    lhs = g_max_exhaustive(mid, levels=1).value
    rhs = t * g_max_exhaustive(c1, levels=1).value + (1 - t) * g_max_exhaustive(c2, levels=1).value
    assert lhs <= rhs


@given(st.integers(2, 4), seeds)
@settings(max_examples=25, deadline=None)
def test_maximum_is_relabeling_invariant(k, seed):
    rng = random.Random(seed)
    c = random_member(k, rng)
    moved = apply_permutation(Permutation.random(k, rng), c)
    a, b = g_max_exhaustive(c), g_max_exhaustive(moved)
    assert a.value == b.value and a.count == b.count
    assert [x.key for x in a.achievers] == [x.key for x in b.achievers]


@pytest.mark.parametrize("k", [3, 4])
def test_value_depends_only_on_type_at_fixed_points(k):
    c = expand(build_shf(k))
    seen = {}
    for s in enumerate_samples(k):
        v = g_sample(c, s)
        assert seen.setdefault(type_of(s), v) == v


@pytest.mark.parametrize("k", [3, 4, 5])
def test_closed_value_at_homogeneous_point(k):
    c = expand(build_shf(k))
    for s in enumerate_samples(k):
        st_ = stats(s)
        assert g_sample(c, s) == shf_value_closed(k, st_.alpha, st_.beta)


def test_closed_value_domain():
    with pytest.raises(ValueError):
        shf_value_closed(4, 2, 5)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_profile_value_equals_sample_value(k):
    rng = random.Random(k)
    p = random_fixed_point(k, rng)
    c = expand(p)
    for pr in enumerate_profiles(k):
        s = pr.representative()
        assert g_fixed(p, pr) == oracles.g(c.layers, s.elements)
        assert profile_in_dagger(p, pr) == in_s_dagger(c, s)


@given(st.integers(1, 5), seeds)
@settings(max_examples=20, deadline=None)
def test_profile_path_equals_exhaustive(k, seed):
    p = random_fixed_point(k, random.Random(seed))
    a, b = g_max_fixed(p), g_max_exhaustive(expand(p))
    assert len(a.levels) == len(b.levels)
    for x, y in zip(a.levels, b.levels):
        assert (x.value, x.count, x.achievers, x.profiles) == (y.value, y.count, y.achievers, y.profiles)


def test_homogeneous_maxima():
    for k, v in oracles.HOMOGENEOUS_MAX.items():
        assert g_max_fixed(build_shf(k), levels=1).value == v


def test_max_set_k3_homogeneous():
    rep = g_max_fixed(build_shf(3))
    assert rep.summary() == ["S_3(2,2)"]
    assert rep.second().value == 1
    assert rep.summary(1) == ["S_3(3,3)"]


def test_profile_of_round_trip_k4():
    for s in enumerate_samples(4):
        assert profile_of(profile_of(s).representative()) == profile_of(s)
