"""Samples (sets of sender/receiver pairs with distinct receivers), their
statistics and types, and profiles, the type-level abstraction used to
evaluate fixed points without enumerating samples.
"""
from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Iterator, Sequence

from .errors import EnumerationTooLarge, UnsupportedK

DEFAULT_SAMPLE_CAP = 7
PROFILE_CAP = 12


def enumeration_cap(default: int = DEFAULT_SAMPLE_CAP) -> int:
    raw = os.environ.get("MULTIFLOW_MAX_K")
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"MULTIFLOW_MAX_K must be an integer, got {raw!r}") from None


def check_cap(k: int, default: int = DEFAULT_SAMPLE_CAP, what: str = "sample enumeration") -> None:
    cap = enumeration_cap(default)
    if k > cap:
        raise EnumerationTooLarge(
            f"{what} for k={k} exceeds the cap k <= {cap} (set MULTIFLOW_MAX_K to override)")


# -- samples ---------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Sample:
    """``elements`` holds 0-based (row, col) pairs sorted by column."""
    k: int
    elements: tuple[tuple[int, int], ...]

    def __post_init__(self):
        els = tuple(sorted((int(i), int(j)) for i, j in self.elements))
        els = tuple(sorted(els, key=lambda e: e[1]))
        object.__setattr__(self, "elements", els)
        if not els:
            raise ValueError("a sample is nonempty")
        cols = [j for _, j in els]
        if len(set(cols)) != len(cols):
            raise ValueError("sample columns must be distinct")
        for i, j in els:
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise ValueError(f"pair ({i + 1},{j + 1}) outside [{self.k}]x[{self.k}]")

    @classmethod
    def of(cls, k: int, pairs: Sequence[tuple[int, int]]) -> "Sample":
        """Build from 1-based pairs."""
        return cls(k, tuple((i - 1, j - 1) for i, j in pairs))

    @classmethod
    def parse(cls, k: int, literal: str) -> "Sample":
        """Parse ``"(1,1);(2,3)"`` (1-based)."""
        pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", literal)
        stripped = re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)|[;\s{}]", "", literal)
        if not pairs or stripped:
            raise ValueError(f"cannot parse sample literal {literal!r}")
        return cls.of(k, [(int(i), int(j)) for i, j in pairs])

    def pairs(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in self.elements]

    def __str__(self) -> str:
        return ";".join(f"({i},{j})" for i, j in self.pairs())


def sample_from_index(k: int, t: int) -> Sample:
    """Inverse of the odometer order: digit of column 1 is most significant,
    digit 0 means the column is absent and digit r means row r."""
    digits = []
    for _ in range(k):
        t, d = divmod(t, k + 1)
        digits.append(d)
    digits.reverse()
    return Sample(k, tuple((d - 1, j) for j, d in enumerate(digits) if d))


def sample_index(s: Sample) -> int:
    digits = [0] * s.k
    for i, j in s.elements:
        digits[j] = i + 1
    t = 0
    for d in digits:
        t = t * (s.k + 1) + d
    return t


def sample_count_total(k: int) -> int:
    return (k + 1) ** k - 1


def enumerate_samples(k: int, first_digits: range | None = None) -> Iterator[Sample]:
    """Every sample exactly once in odometer order.

    ``first_digits`` restricts the digit of column 1, which is how the stream
    is sharded.
    """
    if k < 1:
        raise ValueError("k must be positive")
    check_cap(k)
    lead = first_digits if first_digits is not None else range(k + 1)
    for d0 in lead:
        for rest in product(range(k + 1), repeat=k - 1):
            digits = (d0,) + rest
            if not any(digits):
                continue
            yield Sample(k, tuple((d - 1, j) for j, d in enumerate(digits) if d))


# -- statistics ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ClassKey:
    alpha: int
    beta: int
    gamma: int
    delta: int

    def label(self, k: int | None = None) -> str:
        sub = f"_{k}" if k is not None else ""
        return f"S{sub}({self.alpha},{self.beta},{self.gamma},{self.delta})"

    def as_list(self) -> list[int]:
        return [self.alpha, self.beta, self.gamma, self.delta]


@dataclass(frozen=True)
class SampleStats:
    alpha: int
    beta: int
    gamma: int
    delta: int
    mult: tuple[int, ...]

    @property
    def key(self) -> ClassKey:
        return ClassKey(self.alpha, self.beta, self.gamma, self.delta)


def _stats_from_mult(alpha: int, gamma: int, mult: Sequence[int]) -> SampleStats:
    return SampleStats(alpha, sum(1 for m in mult if m > 0), gamma,
                       sum(1 for m in mult if m == 1), tuple(mult))


def stats(s: Sample) -> SampleStats:
    mult = [0] * s.k
    gamma = 0
    for i, j in s.elements:
        mult[i] += 1
        mult[j] += 1
        gamma += i == j
    return _stats_from_mult(len(s.elements), gamma, mult)


@dataclass(frozen=True, order=True)
class TypeDescriptor:
    """Multiset of (diagonal, off-diagonal) multiplicity pairs, one per index."""
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted((tuple(p) for p in self.pairs), reverse=True)))
        for dg, nd in self.pairs:
            if dg not in (0, 2) or nd < 0:
                raise ValueError(f"bad type pair [{dg},{nd}]")

    @classmethod
    def parse(cls, literal: str, k: int | None = None) -> "TypeDescriptor":
        found = re.findall(r"\[\s*(\d+)\s*,\s*(\d+)\s*\]", literal)
        if not found:
            raise ValueError(f"cannot parse type literal {literal!r}")
        pairs = [(int(a), int(b)) for a, b in found]
        if k is not None:
            if len(pairs) > k:
                raise ValueError("more type entries than indices")
            pairs += [(0, 0)] * (k - len(pairs))
        return cls(tuple(pairs))

    @property
    def gamma(self) -> int:
        return sum(dg for dg, _ in self.pairs) // 2

    @property
    def alpha(self) -> int:
        return self.gamma + sum(nd for _, nd in self.pairs) // 2

    def __str__(self) -> str:
        return "{" + ",".join(f"[{dg},{nd}]" for dg, nd in self.pairs) + "}"


def type_of(s: Sample) -> TypeDescriptor:
    dg = [0] * s.k
    nd = [0] * s.k
    for i, j in s.elements:
        if i == j:
            dg[i] += 2
        else:
            nd[i] += 1
            nd[j] += 1
    return TypeDescriptor(tuple(zip(dg, nd)))


# -- profiles --------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Profile:
    """Type-level description of a sample.

    Indices fall in three groups: those holding a diagonal element, those that
    are the column of an off-diagonal element, and the rest. Each group is
    recorded as the sorted multiset of row counts, i.e. how many off-diagonal
    elements use the index as their row.
    """
    k: int
    gamma: int
    n: int
    diag_rows: tuple[int, ...]
    col_rows: tuple[int, ...]
    free_rows: tuple[int, ...]

    def __post_init__(self):
        for name in ("diag_rows", "col_rows", "free_rows"):
            object.__setattr__(self, name, tuple(sorted(getattr(self, name), reverse=True)))
        if len(self.diag_rows) != self.gamma or len(self.col_rows) != self.n:
            raise ValueError("group sizes disagree with gamma and n")
        if self.gamma + self.n + len(self.free_rows) != self.k:
            raise ValueError("groups must cover all k indices")
        if sum(self.diag_rows) + sum(self.col_rows) + sum(self.free_rows) != self.n:
            raise ValueError("row counts must sum to n")
        if any(r > self.n - 1 for r in self.col_rows) or any(r < 0 for r in self.indices_rows()):
            raise ValueError("row count of a column index must be at most n - 1")
        if self.gamma + self.n == 0:
            raise ValueError("a profile describes a nonempty sample")

    def indices_rows(self) -> tuple[int, ...]:
        return self.diag_rows + self.col_rows + self.free_rows

    def index_data(self) -> list[tuple[int, int, int]]:
        """(is_diag, is_col, row_count) per index in canonical order."""
        return ([(1, 0, r) for r in self.diag_rows] + [(0, 1, r) for r in self.col_rows]
                + [(0, 0, r) for r in self.free_rows])

    def categories(self) -> dict[tuple[int, int, int], int]:
        return dict(sorted(Counter(self.index_data()).items()))

    @property
    def alpha(self) -> int:
        return self.gamma + self.n

    def stats(self) -> SampleStats:
        mult = [2 * dg + col + r for dg, col, r in self.index_data()]
        return _stats_from_mult(self.alpha, self.gamma, mult)

    @property
    def key(self) -> ClassKey:
        return self.stats().key

    def type(self) -> TypeDescriptor:
        return TypeDescriptor(tuple((2 * dg, col + r) for dg, col, r in self.index_data()))

    def sample_count(self) -> int:
        """Number of samples with this profile."""
        data = self.index_data()
        labelings = factorial(self.k)
        for c in Counter(data).values():
            labelings //= factorial(c)
        denom = 1
        for r in self.indices_rows():
            denom *= factorial(r)
        groups = sorted(Counter(r for r in self.col_rows if r >= 1).items())
        total = 0
        for picks in product(*(range(m + 1) for _, m in groups)):
            removed = sum(picks)
            term = factorial(self.n - removed)
            for (r, m), j in zip(groups, picks):
                term *= comb(m, j) * r ** j
            total += (-1) ** removed * term
        return labelings * (total // denom)

    def representative(self) -> Sample:
        """One concrete sample with this profile."""
        data = self.index_data()
        cols = [v for v, (_, col, _) in enumerate(data) if col]
        rows = [v for v, (_, _, r) in enumerate(data) for _ in range(r)]
        match = _assign_rows(cols, rows)
        if match is None:
            raise ValueError("profile is not realizable")
        els = [(v, v) for v, (dg, _, _) in enumerate(data) if dg]
        els += [(r, c) for c, r in zip(cols, match)]
        return Sample(self.k, tuple(els))

    def label(self) -> str:
        return (f"P(g={self.gamma},n={self.n},D={list(self.diag_rows)},"
                f"C={list(self.col_rows)},F={list(self.free_rows)})")

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "n": self.n, "diag_rows": list(self.diag_rows),
                "col_rows": list(self.col_rows), "free_rows": list(self.free_rows)}


def _assign_rows(cols: list[int], rows: list[int]) -> list[int] | None:
    """Give every column a row from the multiset, never its own index."""
    out: list[int] = [-1] * len(cols)
    remaining = Counter(rows)

    def go(pos: int) -> bool:
        if pos == len(cols):
            return True
        # most constrained choices first keeps the search tiny
        for r in sorted(remaining, key=lambda v: -remaining[v]):
            if remaining[r] and r != cols[pos]:
                remaining[r] -= 1
                out[pos] = r
                if go(pos + 1):
                    return True
                remaining[r] += 1
        return False

    return out if go(0) else None


def profile_of(s: Sample) -> Profile:
    k = s.k
    is_diag = [0] * k
    is_col = [0] * k
    rows = [0] * k
    for i, j in s.elements:
        if i == j:
            is_diag[i] = 1
        else:
            is_col[j] = 1
            rows[i] += 1
    gamma = sum(is_diag)
    return Profile(k, gamma, len(s.elements) - gamma,
                   tuple(rows[v] for v in range(k) if is_diag[v]),
                   tuple(rows[v] for v in range(k) if is_col[v]),
                   tuple(rows[v] for v in range(k) if not is_diag[v] and not is_col[v]))


def bounded_partitions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of ``parts`` entries in [0, cap] summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total > parts * cap:
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in bounded_partitions(total - first, parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _profiles(k: int) -> tuple[Profile, ...]:
    out = []
    for gamma in range(k + 1):
        for n in range(k - gamma + 1):
            if gamma + n == 0:
                continue
            free = k - gamma - n
            for t_diag in range(n + 1):
                for t_col in range(n - t_diag + 1):
                    t_free = n - t_diag - t_col
                    for dr in bounded_partitions(t_diag, gamma, n):
                        for cr in bounded_partitions(t_col, n, max(n - 1, 0)):
                            for fr in bounded_partitions(t_free, free, n):
                                out.append(Profile(k, gamma, n, dr, cr, fr))
    return tuple(out)


def enumerate_profiles(k: int) -> tuple[Profile, ...]:
    if not 1 <= k <= PROFILE_CAP:
        raise UnsupportedK(f"profiles are supported for 1 <= k <= {PROFILE_CAP}")
    return _profiles(k)


# -- discriminant, class ----------------------------------------------------------

def discriminant(st: SampleStats, d) -> Fraction:
    return d.abar + st.gamma * d.ybar + (st.alpha - st.gamma - 1) * d.bbar


def classify(st: SampleStats, d, k: int) -> str:
    if st.alpha == k and st.beta == k and st.delta != 0 and discriminant(st, d) < 0:
        return "II"
    return "I"


# -- class selectors ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassSelector:
    """``S(alpha,beta[,gamma[,delta]])`` or a full type literal."""
    alpha: int | None = None
    beta: int | None = None
    gamma: int | None = None
    delta: int | None = None
    type: TypeDescriptor | None = None

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "ClassSelector":
        text = text.strip()
        m = re.fullmatch(r"S(?:_?\d+)?\(\s*(\d+(?:\s*,\s*\d+){1,3})\s*\)", text)
        if m:
            nums = [int(v) for v in m.group(1).split(",")]
            nums += [None] * (4 - len(nums))
            return cls(*nums)
        return cls(type=TypeDescriptor.parse(text, k))

    def matches(self, st: SampleStats, typ: TypeDescriptor | None = None) -> bool:
        if self.type is not None:
            return typ == self.type
        return all(want is None or want == got for want, got in
                   ((self.alpha, st.alpha), (self.beta, st.beta),
                    (self.gamma, st.gamma), (self.delta, st.delta)))

    def matches_profile(self, p: Profile) -> bool:
        return self.matches(p.stats(), p.type() if self.type is not None else None)

    def matches_sample(self, s: Sample) -> bool:
        return self.matches(stats(s), type_of(s) if self.type is not None else None)

    def label(self, k: int | None = None) -> str:
        if self.type is not None:
            return f"T{self.type}"
        nums = [v for v in (self.alpha, self.beta, self.gamma, self.delta) if v is not None]
        sub = f"_{k}" if k is not None else ""
        return f"S{sub}(" + ",".join(str(v) for v in nums) + ")"


def parse_classes(text: str, k: int | None = None) -> list[ClassSelector]:
    """Split ``"S(2,2) | S(3,3,0)"`` style unions."""
    return [ClassSelector.parse(part, k) for part in re.split(r"\s*(?:\||∪|\bu\b)\s*", text) if part]


def samples_in_class(k: int, selector: ClassSelector) -> list[Sample]:
    return [s for s in enumerate_samples(k) if selector.matches_sample(s)]


def profiles_in_class(k: int, selector: ClassSelector) -> list[Profile]:
    return [p for p in enumerate_profiles(k) if selector.matches_profile(p)]


def shf_closed_value(k: int, alpha: int, beta: int) -> Fraction:
    return Fraction(3 * k * alpha - 2 * beta * alpha, k * k)
