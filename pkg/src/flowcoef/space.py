"""Coefficient tuples, the fixed-point parametrization and the relabeling action.

Storage is 0-based: ``layers[l][i][j]`` is the coefficient of the elementary
flow from sender ``i`` to receiver ``j`` inside commodity ``l``. Serialized
forms and human-facing constructors are 1-based.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotInSpace
from .exact import RationalMatrix, q, to_pair

Layers = tuple[tuple[tuple[Fraction, ...], ...], ...]


def _freeze(layers: Sequence) -> Layers:
    return tuple(tuple(tuple(q(v) for v in row) for row in layer) for layer in layers)


def _check_shape(k: int, layers: Layers) -> None:
    if k < 1:
        raise ValueError("k must be positive")
    if len(layers) != k or any(len(layer) != k or any(len(r) != k for r in layer)
                               for layer in layers):
        raise DimensionMismatch(f"expected {k} layers of {k}x{k} entries")


def _layer_violations(k: int, layers: Layers, total: Fraction | None):
    """Yield (layer, kind, index) for every failed sum condition."""
    for l, layer in enumerate(layers):
        for i in range(k):
            if (total is None or i != l) and sum(layer[i]) != 0:
                yield l, "row", i
        for j in range(k):
            if (total is None or j != l) and sum(layer[i][j] for i in range(k)) != 0:
                yield l, "column", j
        if total is not None and sum(sum(r) for r in layer) != total:
            yield l, "total", None


@dataclass(frozen=True)
class CoefficientTuple:
    k: int
    layers: Layers

    def __post_init__(self):
        object.__setattr__(self, "layers", _freeze(self.layers))
        _check_shape(self.k, self.layers)

    def entry(self, l: int, i: int, j: int) -> Fraction:
        """1-based accessor."""
        return self.layers[l - 1][i - 1][j - 1]

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(v for layer in self.layers for row in layer for v in row)

    @classmethod
    def from_flat(cls, k: int, values: Sequence) -> "CoefficientTuple":
        if len(values) != k ** 3:
            raise DimensionMismatch(f"expected {k ** 3} values")
        it = iter(values)
        return cls(k, tuple(tuple(tuple(next(it) for _ in range(k)) for _ in range(k))
                            for _ in range(k)))

    def __add__(self, other):
        if isinstance(other, GeneralDirection):
            other_layers = other.layers
        elif isinstance(other, CoefficientTuple):
            other_layers = other.layers
        else:
            return NotImplemented
        if other.k != self.k:
            raise DimensionMismatch("k differs")
        return CoefficientTuple(self.k, _combine(self.layers, other_layers, 1, 1))

    def violations(self) -> list[tuple[int, str, int | None]]:
        return list(_layer_violations(self.k, self.layers, Fraction(1)))

    def to_json(self) -> dict:
        return {"k": self.k,
                "layers": [[[to_pair(v) for v in row] for row in layer] for layer in self.layers]}

    @classmethod
    def from_json(cls, doc) -> "CoefficientTuple":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(int(doc["k"]), doc["layers"])

    def pretty(self) -> str:
        out = []
        for l, layer in enumerate(self.layers, 1):
            out.append(f"layer {l}:")
            for row in layer:
                out.append("  " + "  ".join(f"{str(v):>7}" for v in row))
        return "\n".join(out)


def _combine(a: Layers, b: Layers, u, v) -> Layers:
    return tuple(tuple(tuple(u * x + v * y for x, y in zip(ra, rb)) for ra, rb in zip(la, lb))
                 for la, lb in zip(a, b))


@dataclass(frozen=True)
class GeneralDirection:
    """A tangent vector of the space: every row and column sum is zero."""
    k: int
    layers: Layers

    def __post_init__(self):
        object.__setattr__(self, "layers", _freeze(self.layers))
        _check_shape(self.k, self.layers)
        bad = next(_layer_violations(self.k, self.layers, None), None)
        if bad is not None:
            l, kind, idx = bad
            raise NotInSpace(f"direction layer {l + 1} has nonzero {kind} sum at {idx + 1}")

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(v for layer in self.layers for row in layer for v in row)

    def scaled(self, lam) -> "GeneralDirection":
        lam = q(lam)
        return GeneralDirection(self.k, tuple(tuple(tuple(lam * v for v in r) for r in layer)
                                              for layer in self.layers))


def validate_membership(c: CoefficientTuple) -> bool:
    return next(_layer_violations(c.k, c.layers, Fraction(1)), None) is None


# -- fixed points ----------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointParams:
    """Relabeling-invariant tuple: diagonal-own ``x``, diagonal-other ``y``,
    touching-own ``a`` and everything else ``b``.

    Parameters with no entries to sit on (``b`` for k <= 2, ``y`` and ``a``
    for k = 1) are stored as 0.
    """
    k: int
    x: Fraction
    y: Fraction
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        for name in ("x", "y", "a", "b"):
            object.__setattr__(self, name, q(getattr(self, name)))
        if self.k <= 2:
            object.__setattr__(self, "b", Fraction(0))
        if self.k == 1:
            object.__setattr__(self, "y", Fraction(0))
            object.__setattr__(self, "a", Fraction(0))
        if self.x + (self.k - 1) * self.a != 1:
            raise NotInSpace(f"x + (k-1)a = {self.x + (self.k - 1) * self.a}, expected 1")
        if self.k >= 2 and self.y + self.a + (self.k - 2) * self.b != 0:
            raise NotInSpace("y + a + (k-2)b must vanish")

    @classmethod
    def from_ab(cls, k: int, a, b) -> "FixedPointParams":
        a, b = q(a), q(b)
        return cls(k, 1 - (k - 1) * a, -a - (k - 2) * b, a, b)

    def shifted(self, d: "FixedDirection", eps) -> "FixedPointParams":
        if d.k != self.k:
            raise DimensionMismatch("k differs")
        eps = q(eps)
        return FixedPointParams(self.k, self.x + eps * d.xbar, self.y + eps * d.ybar,
                                self.a + eps * d.abar, self.b + eps * d.bbar)

    def values(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.x, self.y, self.a, self.b

    def to_json(self) -> dict:
        return {"k": self.k, "x": to_pair(self.x), "y": to_pair(self.y),
                "a": to_pair(self.a), "b": to_pair(self.b)}

    @classmethod
    def from_json(cls, doc) -> "FixedPointParams":
        return cls(int(doc["k"]), q(doc["x"]), q(doc["y"]), q(doc["a"]), q(doc["b"]))


@dataclass(frozen=True)
class FixedDirection:
    k: int
    xbar: Fraction
    ybar: Fraction
    abar: Fraction
    bbar: Fraction

    def __post_init__(self):
        for name in ("xbar", "ybar", "abar", "bbar"):
            object.__setattr__(self, name, q(getattr(self, name)))
        if self.k <= 2:
            object.__setattr__(self, "bbar", Fraction(0))
        if self.xbar + (self.k - 1) * self.abar != 0:
            raise NotInSpace("xbar + (k-1)abar must vanish")
        if self.k >= 2 and self.ybar + self.abar + (self.k - 2) * self.bbar != 0:
            raise NotInSpace("ybar + abar + (k-2)bbar must vanish")

    @classmethod
    def from_ab(cls, k: int, abar, bbar) -> "FixedDirection":
        abar, bbar = q(abar), q(bbar)
        return cls(k, -(k - 1) * abar, -abar - (k - 2) * bbar, abar, bbar)

    def scaled(self, lam) -> "FixedDirection":
        lam = q(lam)
        return FixedDirection(self.k, lam * self.xbar, lam * self.ybar, lam * self.abar, lam * self.bbar)

    def to_json(self) -> dict:
        return {"xbar": to_pair(self.xbar), "ybar": to_pair(self.ybar),
                "abar": to_pair(self.abar), "bbar": to_pair(self.bbar)}


def _fixed_layers(k: int, x, y, a, b) -> Layers:
    def entry(l, i, j):
        if i == j:
            return x if i == l else y
        if i == l or j == l:
            return a
        return b
    return tuple(tuple(tuple(entry(l, i, j) for j in range(k)) for i in range(k)) for l in range(k))


def expand(p: FixedPointParams) -> CoefficientTuple:
    return CoefficientTuple(p.k, _fixed_layers(p.k, p.x, p.y, p.a, p.b))


def expand_direction(d: FixedDirection) -> GeneralDirection:
    return GeneralDirection(d.k, _fixed_layers(d.k, d.xbar, d.ybar, d.abar, d.bbar))


# -- relabeling ------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """``image[i]`` is where 0-based index ``i`` goes."""
    k: int
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))
        if len(self.image) != self.k or sorted(self.image) != list(range(self.k)):
            raise ValueError("image is not a permutation of range(k)")

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(k, tuple(range(k)))

    @classmethod
    def from_cycles(cls, k: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Cycles in 1-based notation, e.g. ``[(1, 2, 3)]`` maps 1->2->3->1."""
        image = list(range(k))
        for cyc in cycles:
            cyc = [c - 1 for c in cyc]
            for pos, src in enumerate(cyc):
                image[src] = cyc[(pos + 1) % len(cyc)]
        return cls(k, tuple(image))

    @classmethod
    def random(cls, k: int, rng: random.Random) -> "Permutation":
        image = list(range(k))
        rng.shuffle(image)
        return cls(k, tuple(image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, v in enumerate(self.image):
            inv[v] = i
        return Permutation(self.k, tuple(inv))

    def __call__(self, i: int) -> int:
        return self.image[i]


def apply_permutation(sigma: Permutation, c: CoefficientTuple) -> CoefficientTuple:
    if sigma.k != c.k:
        raise DimensionMismatch("permutation and tuple sizes differ")
    inv = sigma.inverse().image
    k = c.k
    L = c.layers
    return CoefficientTuple(k, tuple(
        tuple(tuple(L[inv[l]][inv[i]][inv[j]] for j in range(k)) for i in range(k))
        for l in range(k)))


def adjacent_transpositions(k: int) -> list[Permutation]:
    return [Permutation.from_cycles(k, [(i, i + 1)]) for i in range(1, k)]


def is_fixed_point(c: CoefficientTuple) -> bool:
    return all(apply_permutation(t, c) == c for t in adjacent_transpositions(c.k))


def symmetrize(c: CoefficientTuple) -> FixedPointParams:
    """Average over the relabeling group, computed as means over entry orbits."""
    k = c.k
    sums = [Fraction(0)] * 4
    counts = [0] * 4
    for l in range(k):
        for i in range(k):
            for j in range(k):
                if i == j:
                    slot = 0 if i == l else 1
                elif i == l or j == l:
                    slot = 2
                else:
                    slot = 3
                sums[slot] += c.layers[l][i][j]
                counts[slot] += 1
    x, y, a, b = (s / n if n else Fraction(0) for s, n in zip(sums, counts))
    return FixedPointParams(k, x, y, a, b)


def scale(c: CoefficientTuple, lam) -> Layers:
    lam = q(lam)
    return tuple(tuple(tuple(lam * v for v in row) for row in layer) for layer in c.layers)


def combine(u, c1: CoefficientTuple, v, c2: CoefficientTuple) -> CoefficientTuple:
    """``u*c1 + v*c2``; lies in the space whenever ``u + v = 1``."""
    return CoefficientTuple(c1.k, _combine(c1.layers, c2.layers, q(u), q(v)))


# -- constraint matrices -----------------------------------------------------------

def flat_index(k: int, l: int, i: int, j: int) -> int:
    return (l * k + i) * k + j


@lru_cache(maxsize=None)
def membership_system(k: int) -> tuple[RationalMatrix, tuple[Fraction, ...]]:
    """All 2k-1 conditions per layer as rows over the k^3 flattened entries."""
    rows, rhs = [], []
    n = k ** 3
    for l in range(k):
        for i in range(k):
            if i != l:
                r = [0] * n
                for j in range(k):
                    r[flat_index(k, l, i, j)] = 1
                rows.append(r)
                rhs.append(0)
        for j in range(k):
            if j != l:
                r = [0] * n
                for i in range(k):
                    r[flat_index(k, l, i, j)] = 1
                rows.append(r)
                rhs.append(0)
        r = [0] * n
        for i in range(k):
            for j in range(k):
                r[flat_index(k, l, i, j)] = 1
        rows.append(r)
        rhs.append(1)
    return RationalMatrix.from_rows(rows, n), tuple(Fraction(v) for v in rhs)


@lru_cache(maxsize=None)
def tangent_system(k: int) -> RationalMatrix:
    """Every row and column sum of every layer is zero.

    Its null space is the direction space of the affine membership set; the
    two systems have the same row space.
    """
    rows = []
    n = k ** 3
    for l in range(k):
        for i in range(k):
            r = [0] * n
            for j in range(k):
                r[flat_index(k, l, i, j)] = 1
            rows.append(r)
        for j in range(k):
            r = [0] * n
            for i in range(k):
                r[flat_index(k, l, i, j)] = 1
            rows.append(r)
    return RationalMatrix.from_rows(rows, n)


def random_member(k: int, rng: random.Random, spread: int = 5) -> CoefficientTuple:
    """A random point of the space: a random fixed point plus a random
    tangent built from 2x2 "rectangle" moves, which keep every row and
    column sum."""
    base = random_fixed_point(k, rng, spread)
    layers = [[list(r) for r in layer] for layer in expand(base).layers]
    if k >= 2:
        for l in range(k):
            for _ in range(2 * k):
                i1, i2 = rng.sample(range(k), 2)
                j1, j2 = rng.sample(range(k), 2)
                t = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
                layers[l][i1][j1] += t
                layers[l][i2][j2] += t
                layers[l][i1][j2] -= t
                layers[l][i2][j1] -= t
    return CoefficientTuple(k, layers)


def random_fixed_point(k: int, rng: random.Random, spread: int = 5) -> FixedPointParams:
    a = Fraction(rng.randint(-spread, spread), rng.randint(1, spread * 4))
    b = Fraction(rng.randint(-spread, spread), rng.randint(1, spread * 4))
    return FixedPointParams.from_ab(k, a, b)
