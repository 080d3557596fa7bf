"""Optimality certificates for the improved fixed points, the kernel
arguments for uniqueness, infeasibility of improving directions where the
homogeneous point is already optimal, and the large-k trend table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm

import numpy as np

from . import kernels
from .errors import CertificateFailure, NotInDagger, UnsupportedK, WitnessInvalid
from .evaluator import (g_max_fixed, in_s_dagger, index_values, profile_in_dagger,
                        profile_values)
from .exact import fourier_motzkin, in_row_space, kernel_basis, positive_combination, q, to_pair
from .perturb import build_cdd, build_shf, h_coefficients, maximizing_d
from .samples import (ClassSelector, Sample, SampleStats, check_cap, enumerate_profiles,
                      sample_from_index, stats, type_of)
from .space import (CoefficientTuple, FixedDirection, FixedPointParams, expand,
                    expand_direction, flat_index, tangent_system)

NINE_EIGHTHS = Fraction(9, 8)

# classes and the integer weights quoted alongside them
CERTIFICATE_CLASSES = {
    3: (((2, 2, 0), (2, 2, 2), (3, 3, 0)), (1, 2, 1)),
    4: (((2, 2, 2), (3, 3, 0), (3, 3, 3)), (2, 3, 2)),
    5: (((3, 3, 3), (4, 4, 0), (4, 4, 4)), (1, 2, 1)),
    7: (((4, 4, 4), (5, 5, 0), (5, 5, 5)), (3, 5, 2)),
    8: (((5, 5, 5), (6, 6, 0), (6, 6, 6)), (12, 21, 5)),
    9: (((6, 6, 6), (7, 7, 0), (7, 7, 7)), (15, 28, 3)),
}
FULL_SCOPE_MAX_K = 5

UNIQUENESS_CLASSES = {
    3: ("S(2,2)", "S(3,3,0)"),
    4: ("S(3,3,0)", "S(3,3,1)", "S(4,4,0)"),
}


# -- class members -------------------------------------------------------------------

def class_samples(k: int, selector: ClassSelector) -> list[Sample]:
    """Every sample in a class, filtered through the compiled class codes."""
    check_cap(k)
    codes = kernels.sample_codes(k)
    mask = np.ones(len(codes), dtype=bool)
    for shift, want in ((24, selector.alpha), (16, selector.beta), (8, selector.gamma),
                        (0, selector.delta)):
        if want is not None:
            mask &= ((codes >> shift) & 0xFF) == want
    out = [sample_from_index(k, int(t) + 1) for t in np.flatnonzero(mask)]
    if selector.type is not None:
        out = [s for s in out if type_of(s) == selector.type]
    return out


def sign_pattern(s: Sample) -> list[int]:
    return [1 if m else -1 for m in stats(s).mult]


# -- class functionals -----------------------------------------------------------------

@dataclass(frozen=True)
class ClassFunctional:
    k: int
    selector: ClassSelector
    size: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, delta_flat) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, delta_flat) if c and v), Fraction(0))

    def label(self) -> str:
        return self.selector.label(self.k)


def sample_functional(s: Sample) -> list[int]:
    """Linearized change of the sample's value, valid near any point where
    the sample has the strict sign pattern."""
    k = s.k
    vec = [0] * k ** 3
    signs = sign_pattern(s)
    for i, j in s.elements:
        for l in range(k):
            vec[flat_index(k, l, i, j)] += signs[l]
    return vec


def class_functional(k: int, selector: ClassSelector, anchor: FixedPointParams) -> ClassFunctional:
    members = class_samples(k, selector)
    point = expand(anchor)
    total = [0] * k ** 3
    for s in members:
        if not in_s_dagger(point, s):
            raise NotInDagger(f"{selector.label(k)}: sample {s} breaks the strict sign pattern")
        for idx, v in enumerate(sample_functional(s)):
            if v:
                total[idx] += v
    return ClassFunctional(k, selector, len(members), tuple(Fraction(v) for v in total))


def aggregate_directions(k: int) -> tuple[FixedDirection, FixedDirection]:
    """Fixed directions on which (sum of own-diagonal entries, sum of
    other-diagonal entries) equal (1, 0) and (0, 1)."""
    if k < 3:
        raise UnsupportedK("aggregate directions need k >= 3")
    a1 = Fraction(-1, k * (k - 1))
    e1 = FixedDirection.from_ab(k, a1, -a1 / (k - 2))
    e2 = FixedDirection.from_ab(k, 0, Fraction(-1, k * (k - 1) * (k - 2)))
    return e1, e2


def aggregate_functionals(k: int) -> tuple[list[int], list[int]]:
    n = k ** 3
    own, other = [0] * n, [0] * n
    for l in range(k):
        for i in range(k):
            (own if i == l else other)[flat_index(k, l, i, i)] = 1
    return own, other


def _direction_flat(d: FixedDirection) -> tuple[Fraction, ...]:
    return expand_direction(d).flat()


@dataclass(frozen=True)
class HVector:
    A: Fraction
    B: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return self.A, self.B

    def scaled(self, lam) -> "HVector":
        lam = q(lam)
        return HVector(self.A * lam, self.B * lam)

    def to_json(self) -> list:
        return [to_pair(self.A), to_pair(self.B)]


def extract_h_vector(f: ClassFunctional) -> HVector:
    e1, e2 = aggregate_directions(f.k)
    h = HVector(f(_direction_flat(e1)), f(_direction_flat(e2)))
    own, other = aggregate_functionals(f.k)
    residual = [c - h.A * u - h.B * v for c, u, v in zip(f.coeffs, own, other)]
    if not in_row_space(residual, tangent_system(f.k)):
        raise CertificateFailure(f"{f.label()}: functional does not reduce to the two aggregates")
    return h


def profile_class_h(k: int, selector: ClassSelector, anchor: FixedPointParams) -> tuple[HVector, int]:
    """Class sum of linearized changes on the two aggregate directions,
    counted through profiles (no sample enumeration)."""
    e1, e2 = aggregate_directions(k)
    A = B = Fraction(0)
    size = 0
    for pr in enumerate_profiles(k):
        if not selector.matches_profile(pr):
            continue
        if not profile_in_dagger(anchor, pr):
            raise NotInDagger(f"{selector.label(k)}: profile {pr.label()} breaks the sign pattern")
        cnt = pr.sample_count()
        size += cnt
        mult = [m for _, m in index_values(anchor, pr)]
        for which, d in ((0, e1), (1, e2)):
            val = sum(((v if m else -v) for (v, _), m in zip(index_values(d, pr), mult)),
                      Fraction(0))
            if which == 0:
                A += cnt * val
            else:
                B += cnt * val
    return HVector(A, B), size


def normalization(key: tuple[int, int, int]) -> int:
    a, b, g = key
    return (a - 1) ** (a - 1) if g == 0 and a == b and a >= 2 else 1


def h_vector_closed_full_diagonal(k: int, d: int) -> HVector:
    return HVector(Fraction(comb(k - 1, d - 1)), Fraction(comb(k - 2, d - 2) - comb(k - 2, d - 1)))


def h_vector_closed_no_diagonal(k: int, d: int) -> HVector:
    """Counting formula for the all-off-diagonal class, already divided by
    (d-1)^(d-1). Kept for comparison only; the class sum is authoritative."""
    base = comb(k - 3, d - 2) - comb(k - 3, d - 3)
    return HVector(Fraction(base - 2 * comb(k - 2, d - 2)), Fraction(base))


# -- optimality certificate -------------------------------------------------------------

@dataclass
class ClassCertificate:
    label: str
    size: int
    in_dagger: bool
    maximizing: bool
    raw: HVector
    divisor: int
    h: HVector

    def to_json(self) -> dict:
        return {"class": self.label, "size": self.size, "in_dagger": self.in_dagger,
                "maximizing": self.maximizing, "raw_h": self.raw.to_json(),
                "divisor": self.divisor, "h": self.h.to_json()}


@dataclass
class OptimalityCertificate:
    k: int
    scope: str
    optimum: Fraction
    classes: list[ClassCertificate]
    weights: tuple[Fraction, ...] | None
    quoted_weights: tuple[int, ...]
    quoted_balance: bool
    functional_vanishes: bool
    identities: dict[str, bool] = field(default_factory=dict)
    transcript: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.weights is not None and self.functional_vanishes
                and all(c.in_dagger and c.maximizing for c in self.classes))

    def to_json(self) -> dict:
        return {
            "k": self.k, "scope": self.scope, "optimum": to_pair(self.optimum),
            "passed": self.passed,
            "classes": [c.to_json() for c in self.classes],
            "weights": [to_pair(w) for w in self.weights] if self.weights else None,
            "quoted_weights": list(self.quoted_weights),
            "quoted_weights_balance": self.quoted_balance,
            "functional_vanishes": self.functional_vanishes,
            "identities": dict(sorted(self.identities.items())),
        }


def _weighted(vectors, weights):
    return tuple(sum((w * v for w, v in zip(weights, col)), Fraction(0)) for col in zip(*vectors))


def verify_optimality(k: int, scope: str | None = None) -> OptimalityCertificate:
    if k not in CERTIFICATE_CLASSES:
        raise UnsupportedK(f"no certificate for k={k}; use verify_shf_optimal for 6 and 10")
    keys, quoted = CERTIFICATE_CLASSES[k]
    scope = scope or ("full" if k <= FULL_SCOPE_MAX_K else "fixed-subspace")
    res = build_cdd(k)
    anchor = res.cdd
    top = res.report.profiles
    log = [f"k={k}: anchor x={anchor.x} y={anchor.y} a={anchor.a} b={anchor.b}, "
           f"maximum {res.optimum}", f"scope: {scope}"]
    certs, functionals = [], []
    for key in keys:
        sel = ClassSelector(*key)
        members = [pr for pr in enumerate_profiles(k) if sel.matches_profile(pr)]
        maximizing = bool(members) and all(pr in top for pr in members)
        if scope == "full":
            f = class_functional(k, sel, anchor)
            raw = extract_h_vector(f)
            functionals.append((f, normalization(key)))
            size = f.size
        else:
            raw, size = profile_class_h(k, sel, anchor)
        div = normalization(key)
        c = ClassCertificate(sel.label(k), size, True, maximizing, raw, div, raw.scaled(Fraction(1, div)))
        certs.append(c)
        log.append(f"{c.label}: {size} samples, strict sign pattern ok, "
                   f"{'maximizing' if maximizing else 'NOT maximizing'}, "
                   f"raw H=[{raw.A}, {raw.B}], /{div} -> [{c.h.A}, {c.h.B}]")
    hs = [c.h.as_tuple() for c in certs]
    weights = positive_combination(hs)
    quoted_balance = not any(_weighted(hs, quoted))
    if weights is None:
        log.append("no strictly positive combination of the H-vectors vanishes")
        vanishes = False
    else:
        log.append("positive weights " + ", ".join(str(w) for w in weights)
                   + f"; quoted {quoted} " + ("balance" if quoted_balance else "do NOT balance"))
        if scope == "full":
            combo = [sum((w / div * f.coeffs[i] for w, (f, div) in zip(weights, functionals)),
                         Fraction(0)) for i in range(k ** 3)]
            vanishes = in_row_space(combo, tangent_system(k))
            log.append("weighted functional lies in the row space of the tangent constraints: "
                       + str(vanishes))
        else:
            total = _weighted([c.raw.scaled(Fraction(1, c.divisor)).as_tuple() for c in certs], weights)
            vanishes = not any(total)
            log.append("weighted sum vanishes on both aggregate directions: " + str(vanishes))
    cert = OptimalityCertificate(k, scope, res.optimum, certs, weights, quoted, quoted_balance,
                                 vanishes, transcript=log)
    if scope == "full":
        cert.identities.update(_extra_identities(k, anchor, log))
    if not cert.passed:
        raise CertificateFailure(f"k={k}: certificate failed\n" + "\n".join(log))
    return cert


def _extra_identities(k: int, anchor: FixedPointParams, log: list[str]) -> dict[str, bool]:
    out = {}
    tangent = tangent_system(k)
    if k == 3:
        f = {g: class_functional(3, ClassSelector(2, 2, g), anchor) for g in (0, 1, 2)}
        diff = [a - b - c for a, b, c in zip(f[1].coeffs, f[0].coeffs, f[2].coeffs)]
        out["S_3(2,2,1) = S_3(2,2,0) + S_3(2,2,2) on directions"] = in_row_space(diff, tangent)
    if k == 4:
        parts = [((3, 3, 0), Fraction(1, 8)), ((3, 3, 1), Fraction(1, 4)),
                 ((3, 3, 3), Fraction(2)), ((4, 4, 0), Fraction(1, 9))]
        fs = [(class_functional(4, ClassSelector(*key), anchor), w) for key, w in parts]
        combo = [sum((w * f.coeffs[i] for f, w in fs), Fraction(0)) for i in range(64)]
        out["S_4: 1/8(3,3,0) + 1/4(3,3,1) + 2(3,3,3) + 1/9(4,4,0) vanishes"] = in_row_space(combo, tangent)
        own, other = aggregate_functionals(4)
        f331 = fs[1][0]
        out["S_4(3,3,1) = -4 own + 4 other"] = in_row_space(
            [c + 4 * u - 4 * v for c, u, v in zip(f331.coeffs, own, other)], tangent)
    for name, ok in out.items():
        log.append(f"identity {name}: {ok}")
    return out


# -- k = 6, 10 ------------------------------------------------------------------------

@dataclass
class ShfOptimalityReport:
    k: int
    rows: list[tuple[Fraction, Fraction, str]]
    labels: list[str]
    feasible: bool
    conflicts: list[tuple[int, ...]]
    steps: list[str]
    grid_size: int
    improving: int
    optimum: Fraction

    @property
    def passed(self) -> bool:
        return not self.feasible and self.improving == 0

    def to_json(self) -> dict:
        return {"k": self.k, "system": self.labels, "feasible": self.feasible,
                "conflicts": [[i + 1 for i in c] for c in self.conflicts],
                "grid_directions": self.grid_size, "improving_directions": self.improving,
                "optimum": to_pair(self.optimum), "passed": self.passed}


def _slope_form(k: int, st) -> tuple[Fraction, Fraction]:
    """Slope of a class-I sample as a linear form in (abar, bbar)."""
    h = h_coefficients(st, "I", k)
    d1 = FixedDirection.from_ab(k, 1, 0)
    d2 = FixedDirection.from_ab(k, 0, 1)
    return h.slope(d1), h.slope(d2)


def _primitive(a: Fraction, b: Fraction) -> tuple[int, int]:
    den = lcm(a.denominator, b.denominator)
    ia, ib = int(a * den), int(b * den)
    g = gcd(ia, ib) or 1
    return ia // g, ib // g


def _fmt_row(a: int, b: int, rel: str) -> str:
    parts = []
    for c, name in ((a, "a"), (b, "b")):
        if c == 0:
            continue
        sgn = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sgn}{mag}{name}")
    s = "".join(parts).lstrip("+")
    return f"{s} {rel} 0"


def improvement_system(k: int) -> list[tuple[Fraction, Fraction, str]]:
    """Conditions on (abar, bbar) for a fixed direction to lower every
    maximizing sample of the homogeneous point: for each maximizing size d,
    the classes with no diagonal and with all-diagonal elements must fall
    (the slope is affine in the diagonal count, so the extremes suffice)."""
    rows = []
    ds = maximizing_d(k)
    for gamma_of in (lambda d: 0, lambda d: d):
        for d in ds:
            g = gamma_of(d)
            st = SampleStats(d, d, g, 0, ())
            a, b = _slope_form(k, st)
            if g == 0:
                rows.append((a, b, "<"))
            else:
                rows.append((-a, -b, ">"))
    return rows


def verify_shf_optimal(k: int, grid: int = 32) -> ShfOptimalityReport:
    if k not in (6, 10):
        raise UnsupportedK("only k = 6 and k = 10 have the homogeneous point optimal among k >= 3")
    rows = improvement_system(k)
    labels = [_fmt_row(*_primitive(a, b), rel) for a, b, rel in rows]
    # every row as "form > 0"
    strict = [(-a, -b) if rel == "<" else (a, b) for a, b, rel in rows]
    fm = fourier_motzkin(strict, labels)
    shf = build_shf(k)
    top = g_max_fixed(shf, levels=1)
    opt = top.value
    profs = enumerate_profiles(k)
    top_idx = np.array([i for i, pr in enumerate(profs) if pr in top.profiles])
    improving = 0
    count = 0
    half = grid // 2
    # max-norm at most 1/1000
    for i in range(-half, grid - half):
        for j in range(-half, grid - half):
            if i == 0 and j == 0:
                continue
            count += 1
            d = FixedDirection.from_ab(k, Fraction(i, half * 1000), Fraction(j, half * 1000))
            _, vals, den = profile_values(shf.shifted(d, 1))
            # improving means every maximizing sample falls strictly
            if all(Fraction(int(v), den) < opt for v in vals[top_idx].tolist()):
                improving += 1
    conflicts = [tuple(sorted(c)) for c in fm.conflicts]
    return ShfOptimalityReport(k, rows, labels, fm.feasible, conflicts, fm.steps, count,
                               improving, opt)


# -- uniqueness -----------------------------------------------------------------------

def uniqueness_system(k: int, classes) -> list[list[int]]:
    anchor = expand(build_cdd(k).cdd)
    rows = []
    for text in classes:
        sel = ClassSelector.parse(text, k)
        for s in class_samples(k, sel):
            if not in_s_dagger(anchor, s):
                raise NotInDagger(f"{text}: sample {s} breaks the strict sign pattern")
            rows.append(sample_functional(s))
    return rows


def uniqueness_kernel(k: int, classes=None) -> int:
    """Dimension of the directions that keep every listed sample's value
    unchanged to first order while staying tangent to the space."""
    if classes is None:
        if k not in UNIQUENESS_CLASSES:
            raise UnsupportedK("uniqueness systems are given for k = 3 and k = 4")
        classes = UNIQUENESS_CLASSES[k]
    rows = uniqueness_system(k, classes) + tangent_system(k).to_rows()
    return len(kernel_basis(rows))


@dataclass(frozen=True)
class Witness:
    delta: Fraction
    params: FixedPointParams
    optimum: Fraction
    max_set: tuple[str, ...]

    def coefficients(self) -> CoefficientTuple:
        return expand(self.params)

    def to_json(self) -> dict:
        d = self.params.to_json()
        d.pop("k")
        return {"delta": to_pair(self.delta), "params": d, "optimum": to_pair(self.optimum),
                "max_set": list(self.max_set)}


def witness_limit_k10() -> Fraction:
    """Largest delta for which the k=10 witness keeps the maximum unchanged."""
    from .perturb import _first_meeting
    shf = build_shf(10)
    top = g_max_fixed(shf, levels=1)
    d = FixedDirection.from_ab(10, -2, 1)
    limits = [_first_meeting(shf, d, pr, top.value, Fraction(0))
              for pr in enumerate_profiles(10) if pr not in top.profiles]
    return min(e for e in limits if e is not None)


def nonuniqueness_witness_k10(delta) -> Witness:
    delta = q(delta)
    if delta < 0 or delta > Fraction(1, 1000):
        raise ValueError("delta must lie in (0, 1/1000]")
    shf = build_shf(10)
    params = shf.shifted(FixedDirection.from_ab(10, -2 * delta, delta), 1)
    if params == shf:
        raise WitnessInvalid("delta = 0 reproduces the homogeneous point")
    rep = g_max_fixed(params, levels=1)
    target = g_max_fixed(shf, levels=1).value
    if rep.value != target:
        raise WitnessInvalid(f"witness maximum {rep.value} differs from {target}")
    return Witness(delta, params, rep.value, tuple(rep.summary()))


# -- trend ---------------------------------------------------------------------------

def closed_form_shf_max(k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be positive")
    l, r = divmod(k, 4)
    if r == 0:
        return NINE_EIGHTHS
    if r == 1:
        return Fraction(18 * l * l + 9 * l + 1, 16 * l * l + 8 * l + 1)
    if r == 2:
        return Fraction(9 * l * l + 9 * l + 2, 8 * l * l + 8 * l + 2)
    return Fraction(18 * l * l + 27 * l + 10, 16 * l * l + 24 * l + 9)


@dataclass(frozen=True)
class TrendRow:
    k: int
    value: Fraction
    gap: Fraction
    source: str


def asymptotic_table(k_max: int) -> list[TrendRow]:
    if not 1 <= k_max <= 64:
        raise ValueError("k_max must be in 1..64")
    rows = []
    for k in range(1, k_max + 1):
        closed = closed_form_shf_max(k)
        if k <= 12:
            value = g_max_fixed(build_shf(k), levels=1).value
            if value != closed:
                raise CertificateFailure(f"k={k}: profile maximum {value} != closed form {closed}")
            source = "profiles"
        else:
            value, source = closed, "closed form"
        rows.append(TrendRow(k, value, NINE_EIGHTHS - value, source))
    return rows


def gaps_monotone(rows: list[TrendRow]) -> dict[int, bool]:
    """Per residue class mod 4, whether the gap to 9/8 never increases."""
    out = {}
    for r in range(4):
        gaps = [row.gap for row in rows if row.k % 4 == r]
        out[r] = all(x >= y for x, y in zip(gaps, gaps[1:]))
    return out
