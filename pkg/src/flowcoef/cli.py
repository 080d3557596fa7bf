"""Command-line front end.

Every subcommand builds a payload of plain values (fractions allowed) and
optionally a table; the output layer renders JSON, a human table or CSV.
Exit codes: 0 success, 2 usage, 3 enumeration cap, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import FlowcoefError, UnsupportedK

USAGE, CAP, FAILED = 2, 3, 4


@dataclass
class CommandResult:
    code: int
    payload: dict
    headers: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)


# -- rendering ----------------------------------------------------------------------

def jsonable(obj):
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def fmt_fraction(v: Fraction) -> str:
    text = str(v)
    return text if v.denominator == 1 else f"{text} ({float(v):.6f})"


def _cell(v, human: bool) -> str:
    if isinstance(v, Fraction):
        return fmt_fraction(v) if human else str(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x, human) for x in v) if not human else ", ".join(_cell(x, human) for x in v)
    if v is None:
        return "-"
    return str(v)


def render(result: CommandResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(jsonable(result.payload), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if result.headers:
            w.writerow(result.headers)
            w.writerows([[_cell(c, False) for c in row] for row in result.rows])
        else:
            w.writerow(["key", "value"])
            for key, v in result.payload.items():
                w.writerow([key, _cell(v, False)])
        return buf.getvalue()
    out = []
    for key, v in result.payload.items():
        if isinstance(v, (dict, list)) and key in ("rows", "loads", "levels", "classes"):
            continue
        if isinstance(v, dict):
            v = ", ".join(f"{a}={_cell(b, True)}" for a, b in v.items())
        out.append(f"{key}: {_cell(v, True)}")
    if result.headers:
        cells = [[_cell(c, True) for c in row] for row in result.rows]
        widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
                  for i, h in enumerate(result.headers)]
        out.append("")
        out.append("  ".join(h.ljust(w) for h, w in zip(result.headers, widths)).rstrip())
        out.append("  ".join("-" * w for w in widths))
        out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(out) + "\n"


# -- commands -------------------------------------------------------------------------

def _params(p) -> dict:
    return {"x": p.x, "y": p.y, "a": p.a, "b": p.b}


def cmd_optimum(args) -> CommandResult:
    from .perturb import SUPPORTED_K, build_cdd
    if args.k not in SUPPORTED_K:
        raise UnsupportedK(f"k={args.k} unsupported: optimum known for 1 <= k <= 10")
    res = build_cdd(args.k)
    return CommandResult(0, {
        "k": args.k, "optimum": res.optimum, "rate": 1 / res.optimum,
        "point": _params(res.cdd), "max_set": res.max_set,
        "homogeneous_point_optimal": res.shf_optimal,
    })


def cmd_shf(args) -> CommandResult:
    from .evaluator import g_max_fixed
    from .perturb import build_shf
    from .samples import PROFILE_CAP
    if not 1 <= args.k <= PROFILE_CAP:
        raise UnsupportedK(f"k={args.k} unsupported: profiles cover 1 <= k <= {PROFILE_CAP}")
    p = build_shf(args.k)
    rep = g_max_fixed(p)
    rows = [[i + 1, lv.value, lv.count, "; ".join(rep.summary(i))] for i, lv in enumerate(rep.levels)]
    return CommandResult(0, {
        "k": args.k, "point": _params(p), "maximum": rep.value, "max_set": rep.summary(),
        "levels": [{"value": lv.value, "count": lv.count, "classes": rep.summary(i)}
                   for i, lv in enumerate(rep.levels)],
    }, ["level", "value", "samples", "classes"], rows)


def cmd_perturb(args) -> CommandResult:
    from .perturb import SUPPORTED_K, build_cdd, epsilon_star_search, max_valid_epsilon_profiles
    if args.k not in SUPPORTED_K:
        raise UnsupportedK(f"k={args.k} unsupported: perturbation covers 1 <= k <= 10")
    res = build_cdd(args.k)
    payload = {"k": args.k, "homogeneous_point_optimal": res.shf_optimal,
               "shf": _params(res.shf), "shf_maximum": None}
    if res.shf_optimal:
        payload["shf_maximum"] = res.optimum
        payload.update({"delta_star": None, "epsilon_star": Fraction(0), "max_valid_epsilon": None})
    else:
        srch = epsilon_star_search(args.k)
        d = res.delta_star
        payload.update({
            "shf_maximum": srch.top_value,
            "delta_star": {"xbar": d.xbar, "ybar": d.ybar, "abar": d.abar, "bbar": d.bbar},
            "epsilon_star": res.epsilon_star,
            "step_method": srch.method,
            "max_valid_epsilon": max_valid_epsilon_profiles(args.k),
        })
    payload.update({"cdd": _params(res.cdd), "optimum": res.optimum, "max_set": res.max_set})
    return CommandResult(0, payload)


def table_rows(k: int) -> list[dict]:
    """Value at the homogeneous point, slope along the descent direction and
    sign class, grouped into the coarsest uniform subclasses."""
    from .evaluator import g_fixed, summarize
    from .perturb import build_shf, delta_star, h_slope
    from .samples import classify, enumerate_profiles
    p, d = build_shf(k), delta_star(k)
    groups: dict[tuple[int, int], dict[tuple, list]] = {}
    for pr in enumerate_profiles(k):
        st = pr.stats()
        attrs = (g_fixed(p, pr), h_slope(st, d), classify(st, d, k))
        groups.setdefault((st.alpha, st.beta), {}).setdefault(attrs, []).append(pr)
    rows = []
    for ab in sorted(groups):
        for (value, slope, cls), prs in sorted(groups[ab].items(), key=lambda kv: min(kv[1])):
            for label in summarize(k, prs):
                rows.append({"class": label, "value": value, "slope": slope, "kind": cls})
    return rows


def _slope_text(s: Fraction) -> str:
    return "0" if s == 0 else f"{s}eps"


def cmd_table(args) -> CommandResult:
    from .perturb import SHF_OPTIMAL
    if args.k in SHF_OPTIMAL or not 3 <= args.k <= 12:
        raise UnsupportedK(f"k={args.k} unsupported: tables need a descent direction")
    rows = table_rows(args.k)
    return CommandResult(0, {"k": args.k, "rows": rows}, ["class", "g at homogeneous point", "slope", "kind"],
                         [[r["class"], r["value"], _slope_text(r["slope"]), r["kind"]] for r in rows])


def cmd_certify(args) -> CommandResult:
    from . import certificates as cert
    k = args.k
    payload: dict = {"k": k}
    ok = True
    if k in cert.CERTIFICATE_CLASSES:
        c = cert.verify_optimality(k)
        payload["optimality"] = c.to_json()
        ok &= c.passed
    elif k in (6, 10):
        r = cert.verify_shf_optimal(k)
        payload["shf_optimality"] = r.to_json()
        ok &= r.passed
    else:
        raise UnsupportedK(f"k={k} unsupported: certificates exist for 3..10")
    if k in cert.UNIQUENESS_CLASSES:
        dim = cert.uniqueness_kernel(k)
        payload["uniqueness_kernel_dim"] = dim
        ok &= dim == 0
    if k == 10:
        delta = Fraction(args.delta)
        payload["witness_limit"] = cert.witness_limit_k10()
        try:
            w = cert.nonuniqueness_witness_k10(delta)
            payload["witness"] = w.to_json()
        except FlowcoefError as exc:
            payload["witness"] = {"delta": delta, "error": str(exc)}
            ok = False
    payload["passed"] = ok
    return CommandResult(0 if ok else FAILED, payload)


def cmd_verify(args) -> CommandResult:
    from .evaluator import g_max_exhaustive, g_max_fixed
    from .perturb import build_cdd, build_shf
    from .samples import enumerate_profiles, sample_count_total
    from .space import expand
    k = args.k
    res = build_cdd(k)
    total = sum(pr.sample_count() for pr in enumerate_profiles(k))
    payload = {"k": k, "profile_count": len(enumerate_profiles(k)),
               "profile_sample_total": total, "sample_total": sample_count_total(k)}
    ok = total == sample_count_total(k)
    checks = []
    if args.exhaustive:
        for name, p in (("shf", build_shf(k)), ("optimum", res.cdd)):
            a = g_max_fixed(p)
            b = g_max_exhaustive(expand(p), threads=args.threads)
            same = (len(a.levels) == len(b.levels) and all(
                x.value == y.value and x.count == y.count and x.achievers == y.achievers
                and x.profiles == y.profiles for x, y in zip(a.levels, b.levels)))
            checks.append({"point": name, "profile_value": a.value, "exhaustive_value": b.value,
                           "count": b.count, "agree": same})
            ok &= same
    payload["checks"] = checks
    payload["optimum"] = res.optimum
    payload["passed"] = ok
    return CommandResult(0 if ok else FAILED, payload, ["point", "profile", "exhaustive", "samples", "agree"],
                         [[c["point"], c["profile_value"], c["exhaustive_value"], c["count"], c["agree"]]
                          for c in checks])


def cmd_limit(args) -> CommandResult:
    from .certificates import asymptotic_table, gaps_monotone
    from .perturb import optimum
    rows = asymptotic_table(args.kmax)
    mono = gaps_monotone(rows)
    non_mono = optimum(9) > optimum(10)
    payload = {
        "kmax": args.kmax,
        "rows": [{"k": r.k, "value": r.value, "gap": r.gap, "source": r.source} for r in rows],
        "gap_nonincreasing_by_residue": {str(r): v for r, v in mono.items()},
        "optimum_9_exceeds_optimum_10": non_mono,
    }
    ok = all(mono.values()) and non_mono
    payload["passed"] = ok
    return CommandResult(0 if ok else FAILED, payload, ["k", "value", "gap to 9/8", "source"],
                         [[r.k, r.value, r.gap, r.source] for r in rows])


def cmd_flow(args) -> CommandResult:
    from . import multiflow as mf
    from .perturb import SUPPORTED_K, build_cdd
    from .samples import Sample
    from .space import expand, scale
    k = args.k
    if k not in SUPPORTED_K:
        raise UnsupportedK(f"k={k} unsupported: optimum known for 1 <= k <= 10")
    if args.network:
        with open(args.network) as fh:
            net, paths = mf.network_from_json(fh.read())
        if net.k != k:
            raise UnsupportedK(f"network has k={net.k}, expected {k}")
    elif args.generate == "disjoint":
        net, paths = mf.generate_disjoint_network(k)
    elif args.generate and args.generate.startswith("shared:"):
        net, paths = mf.generate_shared_arc_network(k, Sample.parse(k, args.generate[7:]))
    else:
        raise mf.InvalidNetwork("give --network FILE or --generate disjoint|shared:SAMPLE")
    issue = mf.path_issue(net, paths)
    if issue:
        raise mf.InvalidNetwork(issue)
    res = build_cdd(k)
    factor = Fraction(1) if args.unscaled else 1 / res.optimum
    flows = mf.assemble(scale(expand(res.cdd), factor), net, paths)
    rates = mf.check_conservation_and_rate(flows, net)
    report = mf.check_feasibility(flows, net)
    loads = [{"arc": a, "tail": t, "head": h, "load": v,
              "sample": str(mf.arc_sample(a, net, paths)) if any(a in s for s in paths.paths.values()) else None}
             for a, ((t, h), v) in enumerate(zip(net.arcs, report.loads))]
    payload = {"k": k, "scale": factor, "rates": rates, "feasible": report.feasible,
               "worst_arc": report.worst_arc, "worst_load": report.worst_load, "loads": loads}
    return CommandResult(0 if report.feasible else FAILED, payload, ["arc", "tail", "head", "load", "sample"],
                         [[x["arc"], x["tail"], x["head"], x["load"], x["sample"]] for x in loads])


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads for sample enumeration")

    parser = argparse.ArgumentParser(prog="flowcoef", parents=[common],
                                     description="Exact coefficient solutions for k-pair routing.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.set_defaults(func=fn)
        return p

    add("optimum", cmd_optimum, "optimal value, point and routing rate").add_argument("--k", type=int, required=True)
    add("shf", cmd_shf, "maximum at the homogeneous point").add_argument("--k", type=int, required=True)
    add("perturb", cmd_perturb, "descent direction, step and improved point").add_argument("--k", type=int, required=True)
    add("table", cmd_table, "per-class values and slopes").add_argument("--k", type=int, required=True)
    p = add("certify", cmd_certify, "optimality and uniqueness certificates")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", default="1/1000", help="k=10 witness offset")
    p = add("verify", cmd_verify, "cross-check profile and exhaustive evaluation")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    add("limit", cmd_limit, "trend of the homogeneous maximum").add_argument("--kmax", type=int, default=12)
    p = add("flow", cmd_flow, "assemble and check a multi-flow")
    p.add_argument("--k", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network", metavar="FILE")
    src.add_argument("--generate", metavar="SPEC", help='disjoint or shared:"(i,j);..."')
    p.add_argument("--unscaled", action="store_true", help="route the optimum itself, not its rate-scaled copy")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else 0
    args.format = getattr(args, "format", "json")
    args.threads = getattr(args, "threads", None)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return USAGE
    try:
        result = args.func(args)
    except FlowcoefError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    sys.stdout.write(render(result, args.format))
    return result.code


if __name__ == "__main__":
    sys.exit(main())
