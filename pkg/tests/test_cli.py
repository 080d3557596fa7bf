import csv
import io
import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from flowcoef.cli import main
from flowcoef.multiflow import generate_shared_arc_network, network_to_json
from flowcoef.samples import Sample
import oracles

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def frac(pair):
    return F(pair[0], pair[1])


@pytest.mark.parametrize("k", range(1, 11))
def test_optimum(capsys, k):
    code, out, _ = run(capsys, "optimum", "--k", str(k))
    doc = json.loads(out)
    assert code == 0
    assert frac(doc["optimum"]) == oracles.OPTIMA[k]
    assert frac(doc["rate"]) == oracles.RATES[k]


def test_unsupported_k(capsys):
    code, _, err = run(capsys, "optimum", "--k", "11")
    assert code == 2 and "unsupported" in err


def test_usage_error(capsys):
    assert run(capsys, "optimum")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("MULTIFLOW_MAX_K", "3")
    code, _, err = run(capsys, "verify", "--k", "4", "--exhaustive")
    assert code == 3 and "MULTIFLOW_MAX_K" in err


@pytest.mark.parametrize("argv,name", [
    (["optimum", "--k", "3"], "optimum_k3.json"),
    (["table", "--k", "3"], "table_k3.json"),
    (["limit", "--kmax", "12", "--format", "csv"], "limit_12.csv"),
    (["perturb", "--k", "8"], "perturb_k8.json"),
])
def test_golden(capsys, argv, name):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_golden_content_matches_oracles():
    doc = json.loads((GOLDEN / "perturb_k8.json").read_text())
    assert frac(doc["epsilon_star"]) == oracles.EPS_STAR[8]
    assert tuple(frac(doc["cdd"][c]) for c in "xyab") == oracles.CDD[8]
    assert frac(doc["optimum"]) == oracles.OPTIMA[8]


def test_deterministic_and_thread_invariant(capsys):
    a = run(capsys, "verify", "--k", "4", "--exhaustive", "--threads", "1")
    b = run(capsys, "verify", "--k", "4", "--exhaustive", "--threads", "3")
    c = run(capsys, "--threads", "2", "verify", "--k", "4", "--exhaustive")
    assert a == b == c
    assert a[0] == 0 and json.loads(a[1])["passed"]


def test_perturb_table_format(capsys):
    code, out, _ = run(capsys, "perturb", "--k", "3", "--format", "table")
    assert code == 0
    assert "epsilon_star: 1/198 (0.005051)" in out


def test_table_k4_slope(capsys):
    code, out, _ = run(capsys, "table", "--k", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert ["S_4(3,3)", "9/8", "-6eps", "I"] in rows


def test_limit_row(capsys):
    doc = json.loads(run(capsys, "limit", "--kmax", "12")[1])
    assert frac(doc["rows"][-1]["value"]) == F(9, 8)


def test_certify_k3(capsys):
    code, out, _ = run(capsys, "certify", "--k", "3")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["uniqueness_kernel_dim"] == 0


def test_certify_k10_inside_window(capsys):
    code, out, _ = run(capsys, "certify", "--k", "10", "--delta", "1/2000")
    doc = json.loads(out)
    assert code == 0 and frac(doc["witness"]["optimum"]) == F(28, 25)


def test_flow_generated_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "--k", "3", "--generate", "shared:(1,1);(2,2)")
    doc = json.loads(out)
    assert code == 0 and frac(doc["worst_load"]) == 1
    assert [frac(r) for r in doc["rates"]] == [F(11, 12)] * 3
    net, paths = generate_shared_arc_network(3, Sample.parse(3, "(1,1);(2,2)"))
    f = tmp_path / "net.json"
    f.write_text(json.dumps(network_to_json(net, paths)))
    assert run(capsys, "flow", "--k", "3", "--network", str(f))[1] == out
    code, out, _ = run(capsys, "flow", "--k", "3", "--generate", "shared:(1,1);(2,2)", "--unscaled")
    assert code == 4 and frac(json.loads(out)["worst_load"]) == F(12, 11)
