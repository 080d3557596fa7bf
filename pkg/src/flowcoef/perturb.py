"""The homogeneous starting point, the descent direction that lowers every
maximizing sample at the same rate, the step size where the falling maximum
meets the rising runner-up, and the resulting improved fixed point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalInconsistency, NoValidDirection, UnsupportedK
from .evaluator import MaxReport, g_components, g_max_fixed, index_values
from .exact import to_pair
from .samples import (Profile, SampleStats, check_cap, classify, enumerate_profiles,
                      enumerate_samples)
from .space import FixedDirection, FixedPointParams, expand, expand_direction

SUPPORTED_K = range(1, 11)
SHF_OPTIMAL = (1, 2, 6, 10)


def build_shf(k: int) -> FixedPointParams:
    if k < 1:
        raise ValueError("k must be positive")
    kk = Fraction(1, k * k)
    return FixedPointParams(k, Fraction(2, k) - kk, -kk, Fraction(1, k) - kk, -kk)


def maximizing_d(k: int) -> tuple[int, ...]:
    """Sample size d such that S_k(d,d) is maximizing at the homogeneous point."""
    if k < 3:
        raise ValueError("defined for k >= 3")
    l, r = divmod(k, 4)
    return {0: (3 * l,), 1: (3 * l + 1,), 2: (3 * l + 1, 3 * l + 2), 3: (3 * l + 2,)}[r]


def delta_star(k: int) -> FixedDirection:
    ds = maximizing_d(k)
    if len(ds) != 1:
        raise NoValidDirection(f"k={k}: two maximizing sizes {ds}, no single descent direction")
    d = ds[0]
    ratio = Fraction(k * k, 2 * d) - k + 1   # abar = ratio * bbar
    if ratio == 0:
        raise NoValidDirection(f"k={k}: degenerate direction")
    for abar in (Fraction(1), Fraction(-1)):
        bbar = abar / ratio
        if 2 * abar + (2 * d - k - 2) * bbar < 0:
            return FixedDirection.from_ab(k, abar, bbar)
    raise NoValidDirection(f"k={k}: neither sign decreases the maximizing class")


# -- linearized change -------------------------------------------------------------

@dataclass(frozen=True)
class HCoefficients:
    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction

    def slope(self, d: FixedDirection) -> Fraction:
        return self.A * d.xbar + self.B * d.ybar + self.C * d.abar + self.D * d.bbar


def h_coefficients(st: SampleStats, cls: str, k: int) -> HCoefficients:
    a, b, g, dl = st.alpha, st.beta, st.gamma, st.delta
    if cls == "I":
        return HCoefficients(Fraction(g), Fraction(g * (2 * b - k - 1)), Fraction(2 * (a - g)),
                             Fraction((a - g) * (2 * b - k - 2)))
    if cls == "II":
        return HCoefficients(Fraction(g), Fraction(g * (k - 2 * dl - 1)), Fraction(2 * (k - g - dl)),
                             Fraction(k * k - (2 * dl + g + 2) * k + 2 * g * dl + 2 * g + 2 * dl))
    raise ValueError(f"unknown class {cls!r}")


def h_value(st: SampleStats, cls: str, d: FixedDirection, eps) -> Fraction:
    return Fraction(eps) * h_coefficients(st, cls, d.k).slope(d)


def h_slope(st: SampleStats, d: FixedDirection) -> Fraction:
    return h_coefficients(st, classify(st, d, d.k), d.k).slope(d)


# -- validity of a step -------------------------------------------------------------

def max_valid_epsilon(k: int) -> Fraction | None:
    """Largest step keeping every partial sum of every sample on its side of 0.

    None means no partial sum ever changes sign.
    """
    check_cap(k, default=5, what="validity scan")
    base = expand(build_shf(k))
    step = expand_direction(delta_star(k))
    best = None
    for s in enumerate_samples(k):
        for g, dg in zip(g_components(base, s), g_components(step, s)):
            if g != 0 and dg != 0 and (g > 0) != (dg > 0):
                bound = -g / dg
                if best is None or bound < best:
                    best = bound
    return best


def max_valid_epsilon_profiles(k: int) -> Fraction | None:
    """Same bound computed over profiles; usable for every supported k."""
    p, d = build_shf(k), delta_star(k)
    best = None
    for pr in enumerate_profiles(k):
        for (g, _), (dg, _) in zip(index_values(p, pr), index_values(d, pr)):
            if g != 0 and dg != 0 and (g > 0) != (dg > 0):
                bound = -g / dg
                if best is None or bound < best:
                    best = bound
    return best


# -- step size ---------------------------------------------------------------------

@dataclass(frozen=True)
class StepSearch:
    epsilon: Fraction
    linear_candidate: Fraction | None
    method: str
    top_value: Fraction
    top_slope: Fraction
    meeting: tuple[Profile, ...]


def _terms(p: FixedPointParams, d: FixedDirection, pr: Profile) -> list[tuple[Fraction, Fraction]]:
    return [(v, dv) for (v, _), (dv, _) in zip(index_values(p, pr), index_values(d, pr))]


def _first_meeting(p: FixedPointParams, d: FixedDirection, pr: Profile, top: Fraction,
                   top_slope: Fraction, terms=None) -> Fraction | None:
    """First eps > 0 where the profile's exact piecewise-linear value reaches
    the line top + eps*top_slope."""
    if terms is None:
        terms = _terms(p, d, pr)
    cuts = sorted({-v / dv for v, dv in terms if dv != 0 and -v / dv > 0})
    lo = Fraction(0)
    for hi in cuts + [None]:
        mid = lo + 1 if hi is None else (lo + hi) / 2
        # on (lo, hi) every term has a fixed sign; f is linear there
        const = -top
        slope = -top_slope
        for v, dv in terms:
            sign = 1 if v + mid * dv > 0 else -1
            const += sign * v
            slope += sign * dv
        f_lo = const + slope * lo
        if f_lo >= 0:
            return lo if lo > 0 else None
        if slope > 0:
            root = -const / slope
            if hi is None or root <= hi:
                return root
        if hi is None:
            return None
        lo = hi
    return None


@lru_cache(maxsize=None)
def epsilon_star_search(k: int) -> StepSearch:
    d = delta_star(k)
    p = build_shf(k)
    profs = enumerate_profiles(k)
    terms = {pr: _terms(p, d, pr) for pr in profs}
    vals = {pr: sum(abs(v) for v, _ in terms[pr]) for pr in profs}
    top = max(vals.values())
    tops = [pr for pr in profs if vals[pr] == top]
    slopes = {pr: h_slope(pr.stats(), d) for pr in profs}
    top_slopes = {slopes[pr] for pr in tops}
    if len(top_slopes) != 1 or next(iter(top_slopes)) >= 0:
        raise InternalInconsistency(f"k={k}: maximizing profiles do not decrease uniformly")
    top_slope = top_slopes.pop()

    linear = None
    for pr in profs:
        if vals[pr] < top and slopes[pr] > top_slope:
            cand = (top - vals[pr]) / (slopes[pr] - top_slope)
            if cand > 0 and (linear is None or cand < linear):
                linear = cand

    # exact: first contact of any other profile with the falling line. A
    # profile rises at most sum|dv| per unit step, which bounds its contact
    # point from below and lets the scan stop early.
    def lower(pr):
        rise = sum(abs(dv) for _, dv in terms[pr]) - top_slope
        return (top - vals[pr]) / rise if rise > 0 else None

    bounds = ((lower(pr), pr) for pr in profs if pr not in tops)
    order = sorted(((lb, pr) for lb, pr in bounds if lb is not None), key=lambda t: t[0])
    exact = None
    hits: list[Profile] = []
    for lb, pr in order:
        if exact is not None and lb > exact:
            break
        e = _first_meeting(p, d, pr, top, top_slope, terms[pr])
        if e is None:
            continue
        if exact is None or e < exact:
            exact, hits = e, [pr]
        elif e == exact:
            hits.append(pr)
    if exact is None:
        raise InternalInconsistency(f"k={k}: the maximum never meets another sample")
    # maximizing profiles must stay on their line up to the contact point
    for pr in tops:
        for v, dv in terms[pr]:
            if v != 0 and (v > 0) != (v + exact * dv > 0) and v + exact * dv != 0:
                raise InternalInconsistency(f"k={k}: a maximizing sample changes slope early")
    method = "linear, confirmed" if linear == exact else "piecewise-exact"
    return StepSearch(exact, linear, method, top, top_slope, tuple(sorted(hits)))


def epsilon_star(k: int) -> Fraction:
    eps = epsilon_star_search(k).epsilon
    rep = g_max_fixed(build_shf(k).shifted(delta_star(k), eps), levels=1)
    srch = epsilon_star_search(k)
    if rep.value != srch.top_value + eps * srch.top_slope:
        raise InternalInconsistency(f"k={k}: direct evaluation disagrees at the step")
    return eps


# -- result ------------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbResult:
    k: int
    shf: FixedPointParams
    delta_star: FixedDirection | None
    epsilon_star: Fraction
    cdd: FixedPointParams
    optimum: Fraction
    report: MaxReport
    shf_optimal: bool

    @property
    def max_set(self) -> list[str]:
        return self.report.summary()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "shf_optimal": self.shf_optimal,
            "delta_star": self.delta_star.to_json() if self.delta_star else None,
            "epsilon_star": to_pair(self.epsilon_star),
            "cdd": {key: to_pair(getattr(self.cdd, key)) for key in ("x", "y", "a", "b")},
            "optimum": to_pair(self.optimum),
            "max_set": self.max_set,
        }


@lru_cache(maxsize=None)
def build_cdd(k: int) -> PerturbResult:
    if k not in SUPPORTED_K:
        raise UnsupportedK(f"k={k}: the optimum is only known for 1 <= k <= 10")
    shf = build_shf(k)
    if k in SHF_OPTIMAL:
        rep = g_max_fixed(shf)
        return PerturbResult(k, shf, None, Fraction(0), shf, rep.value, rep, True)
    d = delta_star(k)
    eps = epsilon_star(k)
    cdd = shf.shifted(d, eps)
    rep = g_max_fixed(cdd)
    return PerturbResult(k, shf, d, eps, cdd, rep.value, rep, False)


def optimum(k: int) -> Fraction:
    return build_cdd(k).optimum


def optimal_point(k: int) -> FixedPointParams:
    return build_cdd(k).cdd

