"""Networks with unit capacities, path systems, and the multi-flow obtained
from a coefficient tuple by mixing one unit flow per sender/receiver pair.

Orientation: a flow's excess (inflow minus outflow) is positive at the
receiver.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConservationViolation, InvalidNetwork, UnsupportedK
from .exact import q, to_pair
from .samples import Sample


@dataclass(frozen=True)
class Network:
    k: int
    nodes: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    senders: tuple[str, ...]
    receivers: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", tuple((t, h) for t, h in self.arcs))
        object.__setattr__(self, "senders", tuple(self.senders))
        object.__setattr__(self, "receivers", tuple(self.receivers))
        if self.k < 1:
            raise InvalidNetwork("k must be positive")
        names = set(self.nodes)
        if len(names) != len(self.nodes):
            raise InvalidNetwork("duplicate node names")
        for t, h in self.arcs:
            if t not in names or h not in names:
                raise InvalidNetwork(f"arc ({t}, {h}) has an unknown endpoint")
        if len(self.senders) != self.k or len(self.receivers) != self.k:
            raise InvalidNetwork("need exactly k senders and k receivers")
        for v in self.senders + self.receivers:
            if v not in names:
                raise InvalidNetwork(f"terminal {v} is not a node")


@dataclass(frozen=True)
class PathSystem:
    """``paths[(i, j)]`` (0-based) is the arc-index sequence from sender i to receiver j."""
    k: int
    paths: dict

    def path(self, i: int, j: int) -> tuple[int, ...]:
        return tuple(self.paths[(i, j)])


def path_issue(n: Network, p: PathSystem) -> str | None:
    """First reason the path system fails, or None."""
    for i in range(n.k):
        for j in range(n.k):
            if (i, j) not in p.paths:
                return f"missing path for pair ({i + 1},{j + 1})"
            seq = p.path(i, j)
            if not seq:
                return f"empty path for pair ({i + 1},{j + 1})"
            at = n.senders[i]
            for a in seq:
                if not 0 <= a < len(n.arcs):
                    return f"pair ({i + 1},{j + 1}) uses unknown arc {a}"
                t, h = n.arcs[a]
                if t != at:
                    return f"pair ({i + 1},{j + 1}) is not connected at arc {a}"
                at = h
            if at != n.receivers[j]:
                return f"pair ({i + 1},{j + 1}) does not end at receiver {j + 1}"
    for j in range(n.k):
        owner: dict[int, int] = {}
        for i in range(n.k):
            for a in set(p.path(i, j)):
                if a in owner:
                    return f"receiver {j + 1}: arc {a} shared by senders {owner[a] + 1} and {i + 1}"
                owner[a] = i
    return None


def validate_strongly_reachable(n: Network, p: PathSystem) -> bool:
    return path_issue(n, p) is None


# -- flows ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Flow:
    values: tuple[Fraction, ...]
    source: str
    sink: str

    def __add__(self, other: "Flow") -> "Flow":
        if (self.source, self.sink) != (other.source, other.sink):
            raise ValueError("flows with different endpoints cannot be added")
        return Flow(tuple(a + b for a, b in zip(self.values, other.values)), self.source, self.sink)

    def scaled(self, lam) -> "Flow":
        lam = q(lam)
        return Flow(tuple(lam * v for v in self.values), self.source, self.sink)


def excess(f: Flow, n: Network, node: str) -> Fraction:
    total = Fraction(0)
    for (t, h), v in zip(n.arcs, f.values):
        if h == node:
            total += v
        if t == node:
            total -= v
    return total


def flow_value(f: Flow, n: Network) -> Fraction:
    return abs(excess(f, n, f.sink))


def concatenate(n: Network, f: Flow, g: Flow) -> Flow:
    """Join an s-t flow with a t-u flow of the same value into an s-u flow."""
    if f.sink != g.source:
        raise ValueError("the first flow must end where the second starts")
    if excess(f, n, f.sink) != -excess(g, n, g.source):
        raise ValueError("flows of different value cannot be joined")
    return Flow(tuple(a + b for a, b in zip(f.values, g.values)), f.source, g.sink)


def elementary_flow(n: Network, p: PathSystem, i: int, j: int) -> Flow:
    """Unit flow along the path from sender i to receiver j (0-based)."""
    vals = [Fraction(0)] * len(n.arcs)
    for a in p.path(i, j):
        vals[a] += 1
    return Flow(tuple(vals), n.senders[i], n.receivers[j])


@dataclass(frozen=True)
class MultiFlow:
    flows: tuple[Flow, ...]

    def load(self, arc: int) -> Fraction:
        return sum((abs(f.values[arc]) for f in self.flows), Fraction(0))


def assemble(layers: Sequence, n: Network, p: PathSystem) -> MultiFlow:
    """Commodity l is the mix of unit pair flows weighted by layer l."""
    k = n.k
    if len(layers) != k or any(len(layer) != k or any(len(r) != k for r in layer) for layer in layers):
        raise ValueError(f"expected {k} layers of {k}x{k} coefficients")
    base = {(i, j): elementary_flow(n, p, i, j) for i in range(k) for j in range(k)}
    flows = []
    for l, layer in enumerate(layers):
        vals = [Fraction(0)] * len(n.arcs)
        for (i, j), f in base.items():
            c = q(layer[i][j])
            if c:
                for a in p.path(i, j):
                    vals[a] += c
        flows.append(Flow(tuple(vals), n.senders[l], n.receivers[l]))
    return MultiFlow(tuple(flows))


def check_conservation_and_rate(mf: MultiFlow, n: Network) -> list[Fraction]:
    """Per-commodity rates after confirming conservation away from the endpoints."""
    rates = []
    for l, f in enumerate(mf.flows):
        for v in n.nodes:
            if v in (f.source, f.sink):
                continue
            e = excess(f, n, v)
            if e != 0:
                raise ConservationViolation(f"commodity {l + 1} has excess {e} at node {v}")
        rates.append(abs(excess(f, n, f.source)))
    return rates


def signed_rates(mf: MultiFlow, n: Network) -> list[Fraction]:
    return [excess(f, n, f.sink) for f in mf.flows]


def arc_sample(arc: int, n: Network, p: PathSystem) -> Sample:
    pairs = [(i, j) for (i, j) in p.paths if arc in p.paths[(i, j)]]
    if not pairs:
        raise ValueError(f"no path uses arc {arc}")
    return Sample(n.k, tuple(pairs))


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    worst_arc: int | None
    worst_load: Fraction
    loads: tuple[Fraction, ...]

    def to_json(self, n: Network) -> dict:
        return {
            "feasible": self.feasible,
            "worst_arc": self.worst_arc,
            "worst_arc_ends": list(n.arcs[self.worst_arc]) if self.worst_arc is not None else None,
            "worst_load": to_pair(self.worst_load),
            "loads": [to_pair(v) for v in self.loads],
        }


def check_feasibility(mf: MultiFlow, n: Network) -> FeasibilityReport:
    loads = tuple(mf.load(a) for a in range(len(n.arcs)))
    if not loads:
        return FeasibilityReport(True, None, Fraction(0), loads)
    worst = max(range(len(loads)), key=lambda a: (loads[a], -a))
    return FeasibilityReport(loads[worst] <= 1, worst, loads[worst], loads)


def routing_rate(k: int) -> Fraction:
    from .perturb import optimum
    if not 1 <= k <= 10:
        raise UnsupportedK(f"k={k}: the optimum is only known for 1 <= k <= 10")
    return 1 / optimum(k)


# -- generated networks ---------------------------------------------------------------

def _terminals(k: int) -> tuple[list[str], list[str]]:
    return [f"s{i}" for i in range(1, k + 1)], [f"r{j}" for j in range(1, k + 1)]


def generate_disjoint_network(k: int) -> tuple[Network, PathSystem]:
    senders, receivers = _terminals(k)
    nodes = senders + receivers
    arcs = []
    paths = {}
    for i in range(k):
        for j in range(k):
            relay = f"m{i + 1}_{j + 1}"
            nodes.append(relay)
            arcs += [(senders[i], relay), (relay, receivers[j])]
            paths[(i, j)] = (len(arcs) - 2, len(arcs) - 1)
    return Network(k, nodes, arcs, senders, receivers), PathSystem(k, paths)


def generate_shared_arc_network(k: int, s: Sample) -> tuple[Network, PathSystem]:
    """Pairs in ``s`` cross one bottleneck arc u -> v; every other pair has
    its own relay."""
    if s.k != k:
        raise ValueError("sample size and k differ")
    senders, receivers = _terminals(k)
    nodes = senders + receivers + ["u", "v"]
    arcs = [("u", "v")]
    paths = {}
    shared = set(s.elements)
    for i in range(k):
        for j in range(k):
            tag = f"{i + 1}_{j + 1}"
            if (i, j) in shared:
                nodes += [f"in{tag}", f"out{tag}"]
                arcs += [(senders[i], f"in{tag}"), (f"in{tag}", "u"),
                         ("v", f"out{tag}"), (f"out{tag}", receivers[j])]
                e = len(arcs)
                paths[(i, j)] = (e - 4, e - 3, 0, e - 2, e - 1)
            else:
                relay = f"m{tag}"
                nodes.append(relay)
                arcs += [(senders[i], relay), (relay, receivers[j])]
                paths[(i, j)] = (len(arcs) - 2, len(arcs) - 1)
    return Network(k, nodes, arcs, senders, receivers), PathSystem(k, paths)


BOTTLENECK_ARC = 0


# -- serialization ------------------------------------------------------------------------

def network_to_json(n: Network, p: PathSystem) -> dict:
    return {
        "k": n.k,
        "nodes": list(n.nodes),
        "arcs": [list(a) for a in n.arcs],
        "senders": list(n.senders),
        "receivers": list(n.receivers),
        "paths": {f"{i + 1},{j + 1}": list(p.path(i, j))
                  for i in range(n.k) for j in range(n.k)},
    }


def network_from_json(doc) -> tuple[Network, PathSystem]:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        k = int(doc["k"])
        n = Network(k, doc["nodes"], [tuple(a) for a in doc["arcs"]], doc["senders"], doc["receivers"])
        paths = {}
        for key, seq in doc["paths"].items():
            i, j = (int(v) for v in key.split(","))
            paths[(i - 1, j - 1)] = tuple(int(a) for a in seq)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidNetwork(f"malformed network document: {exc}") from None
    return n, PathSystem(k, paths)
