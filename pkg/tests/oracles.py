"""Independent reference computations and frozen expected values.

Nothing here imports the package's evaluation code: samples are built with
itertools, partial sums with plain loops, membership from the raw sums.
"""
from fractions import Fraction as F
from itertools import product

# optimum per k, 1..10
OPTIMA = {1: F(1), 2: F(1), 3: F(12, 11), 4: F(12, 11), 5: F(10, 9), 6: F(10, 9),
          7: F(10, 9), 8: F(75, 67), 9: F(231, 206), 10: F(28, 25)}
RATES = {k: 1 / v for k, v in OPTIMA.items()}

EPS_STAR = {3: F(1, 198), 4: F(1, 176), 5: F(7, 2700), 7: F(11, 5292), 8: F(5, 4288),
            9: F(31, 66744)}

# (xbar, ybar, abar, bbar)
DELTA_STAR = {3: (-2, -5, 1, 4), 4: (3, -5, -1, 3), 5: (4, F(-17, 7), -1, F(8, 7)),
              7: (6, F(-39, 11), -1, F(10, 11)), 8: (7, F(-13, 5), -1, F(3, 5)),
              9: (8, F(-67, 31), -1, F(14, 31))}

# (x, y, a, b) of the improved point
CDD = {3: (F(12, 22), F(-3, 22), F(5, 22), F(-2, 22)),
       4: (F(5, 11), F(-1, 11), F(2, 11), F(-1, 22)),
       5: (F(40, 108), F(-5, 108), F(17, 108), F(-4, 108)),
       7: (F(30, 108), F(-3, 108), F(13, 108), F(-2, 108)),
       8: (F(65, 268), F(-5, 268), F(29, 268), F(-4, 268)),
       9: (F(176, 824), F(-11, 824), F(81, 824), F(-10, 824))}

# maximizing set at the improved point, as class selectors / type literals
MAX_SETS = {
    3: ["S(2,2)", "S(3,3,0)"],
    4: ["S(2,2,2)", "S(3,3)", "S(4,4,0)", "{[2,1],[2,1],[0,1],[0,1]}", "{[2,2],[2,0],[0,1],[0,1]}"],
    5: ["S(3,3,3)", "S(4,4)"],
    7: ["S(4,4,4)", "S(5,5)", "S(6,6,0)"],
    8: ["S(5,5,5)", "S(6,6)"],
    9: ["S(6,6,6)", "S(7,7)"],
}

# (selector, value at the homogeneous point, slope per unit step, class)
TABLE_3 = [("S(1,1,1)", F(7, 9), 8, "I"), ("S(1,2,0)", F(5, 9), -2, "I"),
           ("S(2,2)", F(10, 9), -4, "I"), ("S(2,3,0)", F(6, 9), 12, "I"),
           ("S(2,3,1)", F(6, 9), -6, "I"), ("S(3,3,0)", F(1), 18, "I"),
           ("S(3,3,1)", F(1), 0, "I"), ("S(3,3,3)", F(1), -36, "I"),
           ("S(3,3,2)", F(1), 0, "II")]
TABLE_4 = [("S(1,1,1)", F(5, 8), 18, "I"), ("S(1,2,0)", F(1, 2), -8, "I"),
           ("S(2,2,0)", F(1), -16, "I"), ("S(2,2,1)", F(1), 0, "I"),
           ("S(2,2,2)", F(1), 16, "I"), ("S(2,3)", F(3, 4), -4, "I"),
           ("S(2,4,0)", F(1, 2), 8, "I"), ("S(3,3)", F(9, 8), -6, "I"),
           ("S(3,4,0)", F(3, 4), 12, "I"), ("S(3,4,1)", F(3, 4), -4, "I"),
           ("S(3,4,2)", F(3, 4), -20, "I"), ("S(4,4,0)", F(1), 16, "I"),
           ("S(4,4,1)", F(1), 0, "I"), ("{[2,0],[2,0],[0,2],[0,2]}", F(1), -16, "I"),
           ("{[2,1],[2,0],[0,1],[0,2]}", F(1), 0, "II"), ("S(4,4,4)", F(1), -48, "I"),
           ("{[2,1],[2,1],[0,1],[0,1]}", F(1), 16, "II"),
           ("{[2,2],[2,0],[0,1],[0,1]}", F(1), 16, "II"), ("S(4,4,3)", F(1), 0, "II")]

MAX_VALID_EPS = {3: F(1, 36), 4: F(1, 176)}
# computed once by direct scan over all samples, then frozen
MAX_VALID_EPS_DERIVED = {5: F(7, 1450)}

H_VECTORS = {
    3: {(2, 2, 0): (-3, 1), (2, 2, 2): (2, 0), (3, 3, 0): (-1, -1)},
    4: {(2, 2, 2): (3, -1), (3, 3, 0): (-4, 0), (3, 3, 3): (3, 1)},
}

PROFILE_COUNTS = {1: 1, 2: 5, 3: 15, 4: 40, 5: 92, 6: 199, 7: 400, 8: 773, 9: 1433,
                  10: 2584, 11: 4532, 12: 7789}

HOMOGENEOUS_MAX = {3: F(10, 9), 4: F(9, 8), 5: F(28, 25), 6: F(10, 9), 7: F(55, 49),
                   8: F(9, 8), 9: F(91, 81), 10: F(28, 25), 11: F(136, 121), 12: F(9, 8)}


# -- brute force ------------------------------------------------------------------

def all_samples(k):
    """Sets of 0-based (row, col) with distinct columns, each column either
    absent or assigned any row."""
    out = []
    for choice in product([None] + list(range(k)), repeat=k):
        s = tuple((r, j) for j, r in enumerate(choice) if r is not None)
        if s:
            out.append(s)
    return out


def partial_sums(layers, s):
    return [sum((layer[i][j] for i, j in s), F(0)) for layer in layers]


def g(layers, s):
    return sum(abs(v) for v in partial_sums(layers, s))


def brute_max(layers):
    k = len(layers)
    vals = {s: g(layers, s) for s in all_samples(k)}
    top = max(vals.values())
    return top, sorted(s for s, v in vals.items() if v == top)


def in_space(layers):
    k = len(layers)
    for l, layer in enumerate(layers):
        for i in range(k):
            if i != l and sum(layer[i]) != 0:
                return False
        for j in range(k):
            if j != l and sum(layer[i][j] for i in range(k)) != 0:
                return False
        if sum(sum(r) for r in layer) != 1:
            return False
    return True


def homogeneous_layers(k, x, y, a, b):
    return [[[(x if i == l else y) if i == j else (a if l in (i, j) else b)
              for j in range(k)] for i in range(k)] for l in range(k)]


def relabel(layers, perm):
    """perm[i] is the new name of index i."""
    k = len(layers)
    out = [[[None] * k for _ in range(k)] for _ in range(k)]
    for l in range(k):
        for i in range(k):
            for j in range(k):
                out[perm[l]][perm[i]][perm[j]] = layers[l][i][j]
    return out


def sample_stats(k, s):
    mult = [0] * k
    for i, j in s:
        mult[i] += 1
        mult[j] += 1
    alpha = len(s)
    beta = sum(1 for m in mult if m)
    gamma = sum(1 for i, j in s if i == j)
    delta = sum(1 for m in mult if m == 1)
    return alpha, beta, gamma, delta

