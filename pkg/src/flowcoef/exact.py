"""Exact rational arithmetic helpers and small dense linear algebra over Q.

Everything here works on :class:`fractions.Fraction`; there is no tolerance
anywhere. Matrices are small (a few hundred columns at most), so plain
Gaussian elimination on Python lists is adequate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rational = Fraction


def q(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``[p, q]`` pairs."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        num, den = value
        return Fraction(int(num), int(den))
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an exact value")
    return Fraction(value)


def to_pair(value: Fraction) -> list[int]:
    value = q(value)
    return [value.numerator, value.denominator]


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    return den


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        entries = tuple(q(v) for r in rows for v in r)
        return cls(len(rows), cols, entries)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
                     for i in range(self.rows))


def _as_rows(m) -> tuple[list[list[Fraction]], int]:
    if isinstance(m, RationalMatrix):
        return m.to_rows(), m.cols
    rows = [[q(v) for v in r] for r in m]
    cols = len(rows[0]) if rows else 0
    return rows, cols


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivots on the first nonzero entry."""
    rows, ncols = _as_rows(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f != 0:
                ri = rows[i]
                for j in nz:
                    ri[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def kernel_basis(m) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space, one vector per free column."""
    red, pivots = rref(m)
    ncols = m.cols if isinstance(m, RationalMatrix) else (len(m[0]) if len(m) else 0)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[free]
        basis.append(tuple(vec))
    return basis


def in_row_space(functional: Sequence, constraints) -> bool:
    """True iff ``functional`` is a rational combination of constraint rows."""
    rows, ncols = _as_rows(constraints)
    if len(functional) != ncols and rows:
        raise DimensionMismatch(
            f"functional has length {len(functional)}, constraints have {ncols} columns")
    f = [q(v) for v in functional]
    if not any(f):
        return True
    if not rows:
        return False
    return rank(rows + [f]) == rank(rows)


def solve_particular(m, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = rhs`` or None if inconsistent."""
    rows, ncols = _as_rows(m)
    if len(rhs) != len(rows):
        raise DimensionMismatch("rhs length differs from row count")
    aug = [r + [q(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


# -- strict homogeneous systems -------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    """``coeffs . v > 0`` with the set of source rows it was derived from."""
    coeffs: tuple[Fraction, ...]
    sources: frozenset[int]


@dataclass
class EliminationResult:
    feasible: bool
    point: tuple[Fraction, ...] | None
    conflicts: list[frozenset[int]]
    steps: list[str]

    @property
    def contradiction(self) -> frozenset[int] | None:
        return self.conflicts[0] if self.conflicts else None


def fourier_motzkin(rows: Sequence[Sequence], labels: Sequence[str] | None = None) -> EliminationResult:
    """Decide ``{row . v > 0}`` exactly by Fourier-Motzkin elimination.

    Every derived row keeps the set of input rows it combines, and all
    derivations are kept (the systems here are tiny). When the system is
    infeasible, ``conflicts`` lists the inclusion-minimal source sets that
    produce ``0 > 0``, smallest first. When it is feasible, ``point`` is a
    rational solution obtained by back substitution.
    """
    system = [Inequality(tuple(q(c) for c in r), frozenset([i])) for i, r in enumerate(rows)]
    nvars = len(system[0].coeffs) if system else 0
    if labels is None:
        labels = [f"row{i + 1}" for i in range(len(system))]
    steps: list[str] = []
    levels: list[list[Inequality]] = []
    zero_sets = [r.sources for r in system if not any(r.coeffs)]
    current = _dedupe([r for r in system if any(r.coeffs)])
    for var in range(nvars - 1, -1, -1):
        levels.append(current)
        pos = [r for r in current if r.coeffs[var] > 0]
        neg = [r for r in current if r.coeffs[var] < 0]
        rest = [r for r in current if r.coeffs[var] == 0]
        combined = []
        for p in pos:
            for n in neg:
                cp, cn = p.coeffs[var], -n.coeffs[var]
                coeffs = tuple(cn * a + cp * b for a, b in zip(p.coeffs, n.coeffs))
                combined.append(Inequality(coeffs, p.sources | n.sources))
        steps.append(f"eliminate v{var + 1}: {len(pos)} positive x {len(neg)} negative "
                     f"-> {len(combined)} combined, {len(rest)} carried")
        zero_sets += [r.sources for r in combined if not any(r.coeffs)]
        current = _dedupe(rest + [r for r in combined if any(r.coeffs)])
    if zero_sets:
        minimal = sorted({s for s in zero_sets if not any(t < s for t in zero_sets)},
                         key=lambda s: (len(s), sorted(s)))
        for conflict in minimal:
            steps.append("0 > 0 derived from " + ", ".join(labels[i] for i in sorted(conflict)))
        return EliminationResult(False, None, minimal, steps)
    point: list[Fraction] = []
    for var, level in zip(range(nvars), reversed(levels)):
        lo, hi = None, None
        for r in level:
            c = r.coeffs[var]
            if c == 0:
                continue
            rest_val = sum((a * b for a, b in zip(r.coeffs[:var], point)), Fraction(0))
            bound = -rest_val / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = hi - 1
        elif hi is None:
            val = lo + 1
        else:
            val = (lo + hi) / 2
        point.append(val)
    return EliminationResult(True, tuple(point), [], steps)


def _dedupe(rows: list[Inequality]) -> list[Inequality]:
    """Drop exact repeats (same direction, same sources)."""
    seen: dict[tuple, Inequality] = {}
    for r in rows:
        scale = next((abs(c) for c in r.coeffs if c), Fraction(1))
        key = (tuple(c / scale for c in r.coeffs), r.sources)
        seen.setdefault(key, r)
    return list(seen.values())


def positive_combination(vs: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """Strictly positive weights ``w`` with ``sum w_i v_i = 0`` (first weight 1)."""
    if not 2 <= len(vs) <= 4:
        raise ValueError("positive_combination expects between 2 and 4 vectors")
    vecs = [tuple(q(c) for c in v) for v in vs]
    if any(len(v) != 2 for v in vecs):
        raise DimensionMismatch("positive_combination works on 2-vectors")
    n = len(vecs)
    matrix = [[vecs[i][r] for i in range(n)] for r in range(2)]
    basis = kernel_basis(matrix)
    if not basis:
        return None
    if len(basis) == 1:
        w = basis[0]
        if all(c > 0 for c in w) or all(c < 0 for c in w):
            return tuple(c / w[0] for c in w)
        return None
    # weights are N t with N the kernel basis; need every component > 0
    rows = [[b[i] for b in basis] for i in range(n)]
    res = fourier_motzkin(rows)
    if not res.feasible:
        return None
    w = tuple(sum((r * t for r, t in zip(row, res.point)), Fraction(0)) for row in rows)
    return tuple(c / w[0] for c in w)
