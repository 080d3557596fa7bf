from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcoef.errors import EnumerationTooLarge, UnsupportedK
from flowcoef.samples import (ClassSelector, Sample, TypeDescriptor, enumerate_profiles,
                              enumerate_samples, parse_classes, profile_of, sample_count_total,
                              sample_from_index, sample_index, stats, type_of)
import oracles


def test_literal_round_trip():
    s = Sample.parse(4, "(1,1);(2,3);(1,4)")
    assert str(s) == "(1,1);(2,3);(1,4)"
    assert s.elements == ((0, 0), (1, 2), (0, 3))
    for bad in ("(1,1);(2,1)", "(5,1)", "", "(1,1)x"):
        with pytest.raises(ValueError):
            Sample.parse(4, bad)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(k):
    got = [s.elements for s in enumerate_samples(k)]
    want = [tuple(sorted(s, key=lambda e: e[1])) for s in oracles.all_samples(k)]
    assert sorted(got) == sorted(want)
    assert len(got) == len(set(got)) == sample_count_total(k) == (k + 1) ** k - 1


@given(st.integers(1, 6).flatmap(lambda k: st.tuples(st.just(k), st.integers(1, (k + 1) ** k - 1))))
@settings(max_examples=200, deadline=None)
def test_index_round_trip(arg):
    k, t = arg
    assert sample_index(sample_from_index(k, t)) == t


@pytest.mark.parametrize("k", [2, 3, 4])
def test_stats_match_reference(k):
    for s in enumerate_samples(k):
        st_ = stats(s)
        assert (st_.alpha, st_.beta, st_.gamma, st_.delta) == oracles.sample_stats(k, s.elements)


def test_profile_counts():
    for k, n in oracles.PROFILE_COUNTS.items():
        assert len(enumerate_profiles(k)) == n


@pytest.mark.parametrize("k", range(1, 13))
def test_profile_sample_counts_partition_everything(k):
    assert sum(p.sample_count() for p in enumerate_profiles(k)) == sample_count_total(k)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_profile_counts_match_direct_grouping(k):
    seen = Counter(profile_of(s) for s in enumerate_samples(k))
    assert set(seen) == set(enumerate_profiles(k))
    for p, n in seen.items():
        assert p.sample_count() == n
        assert profile_of(p.representative()) == p


def test_profile_outside_range():
    with pytest.raises(UnsupportedK):
        enumerate_profiles(13)


def test_cap_env(monkeypatch):
    monkeypatch.setenv("MULTIFLOW_MAX_K", "3")
    with pytest.raises(EnumerationTooLarge):
        next(enumerate_samples(4))
    monkeypatch.setenv("MULTIFLOW_MAX_K", "4")
    assert next(enumerate_samples(4))


def test_type_literal_and_selector():
    t = TypeDescriptor.parse("{[2,1],[2,1],[0,1],[0,1]}", 4)
    assert (t.gamma, t.alpha) == (2, 4)
    sel = ClassSelector.parse("S_4(3,3)")
    assert (sel.alpha, sel.beta, sel.gamma) == (3, 3, None)
    assert [s.label() for s in parse_classes("S(2,2) | S(3,3,0)")] == ["S(2,2)", "S(3,3,0)"]
    s = Sample.of(4, [(1, 1), (2, 2), (1, 3), (2, 4)])
    assert type_of(s) == t
    assert ClassSelector(type=t).matches_sample(s)
