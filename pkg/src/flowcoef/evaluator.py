"""Exact evaluation of the minimax objective.

Two paths: an exhaustive one over every sample (any tuple, small k, backed by
the compiled kernel) and a profile path for fixed points (k up to 12).
Both return a :class:`MaxReport` with identical structure so they can be
compared field by field.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from . import kernels
from .exact import to_pair
from .samples import (ClassKey, ClassSelector, Profile, Sample, TypeDescriptor, check_cap,
                      enumerate_profiles, profile_of, sample_from_index, shf_closed_value, stats,
                      type_of)
from .space import CoefficientTuple, FixedDirection, FixedPointParams


@dataclass(frozen=True, order=True)
class Achiever:
    key: ClassKey
    types: tuple[TypeDescriptor, ...]
    complete: bool  # every sample of the class attains the value

    def to_json(self) -> dict:
        return {"class": self.key.as_list(), "complete": self.complete,
                "types": [str(t) for t in self.types]}


@dataclass(frozen=True)
class Level:
    value: Fraction
    achievers: tuple[Achiever, ...]
    count: int
    profiles: frozenset = field(default=frozenset(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {"value": to_pair(self.value), "count": self.count,
                "achievers": [a.to_json() for a in self.achievers]}


@dataclass(frozen=True)
class MaxReport:
    k: int
    method: str
    levels: tuple[Level, ...]

    @property
    def value(self) -> Fraction:
        return self.levels[0].value

    @property
    def achievers(self) -> tuple[Achiever, ...]:
        return self.levels[0].achievers

    @property
    def count(self) -> int:
        return self.levels[0].count

    @property
    def profiles(self) -> frozenset:
        return self.levels[0].profiles

    def second(self) -> Level | None:
        return self.levels[1] if len(self.levels) > 1 else None

    def summary(self, level: int = 0) -> list[str]:
        return summarize(self.k, self.levels[level].profiles)

    def to_json(self) -> dict:
        return {"k": self.k, "method": self.method, "value": to_pair(self.value),
                "count": self.count, "max_set": self.summary(),
                "levels": [lv.to_json() for lv in self.levels]}


# -- pointwise -------------------------------------------------------------------

def g_component(c: CoefficientTuple, s: Sample, ell: int) -> Fraction:
    """Partial sum of layer ``ell`` (1-based) over the sample's pairs."""
    layer = c.layers[ell - 1]
    return sum((layer[i][j] for i, j in s.elements), Fraction(0))


def g_components(c: CoefficientTuple, s: Sample) -> list[Fraction]:
    return [g_component(c, s, l) for l in range(1, c.k + 1)]


def g_sample(c: CoefficientTuple, s: Sample) -> Fraction:
    return sum((abs(v) for v in g_components(c, s)), Fraction(0))


def in_s_dagger(c: CoefficientTuple, s: Sample) -> bool:
    """Strictly positive partial sums on indices touched by ``s``, strictly
    negative elsewhere."""
    mult = stats(s).mult
    return all((v > 0) if m else (v < 0) for v, m in zip(g_components(c, s), mult))


def shf_value_closed(k: int, alpha: int, beta: int) -> Fraction:
    if not (1 <= alpha <= beta <= min(2 * alpha, k)):
        raise ValueError(f"no sample has alpha={alpha}, beta={beta} for k={k}")
    return shf_closed_value(k, alpha, beta)


def index_values(p, profile: Profile) -> list[tuple[Fraction, int]]:
    """(partial sum, multiplicity) for each index of a profile.

    ``p`` is anything with ``x, y, a, b`` attributes, or a FixedDirection.
    """
    x, y, a, b = _xyab(p)
    seen: dict[tuple[int, int], tuple[Fraction, int]] = {}
    out = []
    for dg, col, r in profile.index_data():
        m = col + r
        if (dg, m) not in seen:
            seen[dg, m] = (dg * x + (profile.gamma - dg) * y + m * a + (profile.n - m) * b,
                           2 * dg + m)
        out.append(seen[dg, m])
    return out


def _xyab(p):
    if isinstance(p, FixedDirection):
        return p.xbar, p.ybar, p.abar, p.bbar
    return p.x, p.y, p.a, p.b


def g_fixed(p: FixedPointParams, profile: Profile) -> Fraction:
    if p.k != profile.k:
        raise ValueError("k differs")
    return sum((abs(v) for v, _ in index_values(p, profile)), Fraction(0))


def profile_in_dagger(p: FixedPointParams, profile: Profile) -> bool:
    return all((v > 0) if m else (v < 0) for v, m in index_values(p, profile))


def profile_slope(p: FixedPointParams, d: FixedDirection, profile: Profile) -> Fraction:
    """One-sided derivative of the profile value at ``p`` along ``d``."""
    total = Fraction(0)
    for (v, _), (dv, _) in zip(index_values(p, profile), index_values(d, profile)):
        total += dv if v > 0 else (-dv if v < 0 else abs(dv))
    return total


# -- profile path ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _profile_arrays(k: int):
    profs = enumerate_profiles(k)
    dg = np.array([[d for d, _, _ in p.index_data()] for p in profs], dtype=np.int64)
    m = np.array([[c + r for _, c, r in p.index_data()] for p in profs], dtype=np.int64)
    gamma = np.array([p.gamma for p in profs], dtype=np.int64)[:, None]
    n = np.array([p.n for p in profs], dtype=np.int64)[:, None]
    keys = [p.key for p in profs]
    return profs, dg, m, gamma, n, keys


def _scaled(values):
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return den, [int(v * den) for v in values]


def profile_values(p: FixedPointParams) -> tuple[list[Profile], np.ndarray, int]:
    """Scaled integer value for every profile and the common denominator."""
    profs, dg, m, gamma, n, _ = _profile_arrays(p.k)
    den, (X, Y, A, B) = _scaled(p.values())
    bound = p.k * (abs(X) + p.k * (abs(Y) + abs(A) + abs(B)))
    if bound >= kernels.INT64_LIMIT:
        dg, m, gamma, n = (arr.astype(object) for arr in (dg, m, gamma, n))
    v = dg * X + (gamma - dg) * Y + m * A + (n - m) * B
    return list(profs), np.abs(v).sum(axis=1), den


def _achievers_from_profiles(k: int, chosen: list[Profile], all_keys) -> tuple[Achiever, ...]:
    totals: dict[ClassKey, int] = {}
    for key in all_keys:
        totals[key] = totals.get(key, 0) + 1
    by_key: dict[ClassKey, list[Profile]] = {}
    for pr in chosen:
        by_key.setdefault(pr.key, []).append(pr)
    return tuple(sorted(
        Achiever(key, tuple(sorted({pr.type() for pr in prs})), len(prs) == totals[key])
        for key, prs in by_key.items()))


def g_max_fixed(p: FixedPointParams, levels: int | None = 2) -> MaxReport:
    """Maximum over all samples of the expanded fixed point, via profiles."""
    profs, vals, den = profile_values(p)
    keys = _profile_arrays(p.k)[5]
    distinct = sorted(set(vals.tolist()), reverse=True)
    if levels is not None:
        distinct = distinct[:levels]
    out = []
    for v in distinct:
        chosen = [pr for pr, pv in zip(profs, vals.tolist()) if pv == v]
        out.append(Level(Fraction(int(v), den), _achievers_from_profiles(p.k, chosen, keys),
                         sum(pr.sample_count() for pr in chosen), frozenset(chosen)))
    return MaxReport(p.k, "profile", tuple(out))


# -- exhaustive path ---------------------------------------------------------------

@lru_cache(maxsize=8)
def _codes(k: int, threads: int, backend):
    codes = kernels.sample_codes(k, threads=threads, backend=backend)
    uniq, counts = np.unique(codes, return_counts=True)
    return codes, dict(zip(uniq.tolist(), counts.tolist()))


def default_threads() -> int:
    return os.cpu_count() or 1


def g_max_exhaustive(c: CoefficientTuple, levels: int | None = 2, threads: int | None = None,
                     backend: str | None = None) -> MaxReport:
    k = c.k
    check_cap(k)
    threads = threads or default_threads()
    den, flat = _scaled(c.flat())
    scaled = np.array(flat, dtype=object).reshape(k, k, k)
    vals = kernels.sample_values(scaled, threads=threads, backend=backend)
    codes, totals = _codes(k, threads, backend)
    distinct = np.unique(vals)[::-1]
    if levels is not None:
        distinct = distinct[:levels]
    out = []
    for v in distinct:
        idx = np.flatnonzero(vals == v)
        got: dict[int, list[Sample]] = {}
        for t in idx.tolist():
            got.setdefault(int(codes[t]), []).append(sample_from_index(k, t + 1))
        achievers = []
        profs = set()
        for code, samples in got.items():
            key = ClassKey(*kernels.decode_code(code))
            achievers.append(Achiever(key, tuple(sorted({type_of(s) for s in samples})),
                                      len(samples) == totals[code]))
            profs.update(profile_of(s) for s in samples)
        out.append(Level(Fraction(int(v), den), tuple(sorted(achievers)), len(idx),
                         frozenset(profs)))
    return MaxReport(k, "exhaustive", tuple(out))


# -- describing sets of profiles -----------------------------------------------------

def profiles_matching(k: int, selectors: list[ClassSelector]) -> frozenset:
    return frozenset(pr for pr in enumerate_profiles(k)
                     if any(sel.matches_profile(pr) for sel in selectors))


def summarize(k: int, chosen) -> list[str]:
    """Compact labels for a set of profiles, coarsest first: S(a,b) when the
    whole (alpha, beta) class is included, then S(a,b,g), S(a,b,g,d), and
    explicit types for the remainder."""
    chosen = set(chosen)
    if not chosen:
        return []
    allp = enumerate_profiles(k)
    labels = []
    left = set(chosen)
    for depth in (2, 3, 4):
        groups: dict[tuple, list[Profile]] = {}
        for pr in allp:
            groups.setdefault(tuple(pr.key.as_list()[:depth]), []).append(pr)
        for key in sorted(groups):
            members = groups[key]
            if all(pr in chosen for pr in members) and any(pr in left for pr in members):
                labels.append(f"S_{k}(" + ",".join(map(str, key)) + ")")
                left.difference_update(members)
    # leftovers: group by type, only valid if every profile of that type is chosen
    for typ in sorted({pr.type() for pr in left}):
        labels.append(f"T{typ}")
    return labels
