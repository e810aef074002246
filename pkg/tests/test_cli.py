import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import scv
from scv import cli, probes
from scv.cli import (
    OPERATIONS,
    build_parser,
    format_domain,
    parse_complex,
    parse_domain,
    parse_point,
    parse_poly,
    run,
)
from scv.domains import Ball, Disc, Ellipsoid, MODEL_Z1Z2, Polydisc, Product
from scv.errors import ParseError
from scv.polynomials import HomogeneousPoly

SPEC_SUBCOMMANDS = {"kernel", "kernel-h", "kernel-k", "metric", "azukawa", "indicatrix-vol", "suita",
                    "scan-monotone", "probe-logconvex", "probe-convexity", "probe-psh", "boundary-scan",
                    "dimension", "suite"}


def _run(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- parsing ----------------------------------------------------------------------------------


def test_parse_examples():
    assert parse_domain("ellipsoid:p=2,3") == Ellipsoid((2, 3))
    assert parse_domain("product(disc:c=0+0i,r=1;disc:c=0+0i,r=1)") == Product((Disc(0, 1), Disc(0, 1)))
    assert parse_domain("gauge:model-z1z2") == MODEL_Z1Z2
    assert parse_domain("disc:r=2") == Disc(0, 2)
    assert parse_domain(" polydisc : r = 1 , 0.5 ") == Polydisc((1, 0.5))
    assert parse_domain("product( ball:n=2 ; disc:c=-1-2.5i, r=3 )") == Product((Ball(2), Disc(-1 - 2.5j, 3)))


@pytest.mark.parametrize("text,position", [
    ("ball:n=0", 7),
    ("ball:n=9", 7),
    ("sphere:n=2", 0),
    ("disc:c=0+0i,r=-1", 14),
    ("ellipsoid:p=2,0", 14),
    ("polydisc:r=1,1,1,1,1,1,1,1,1", 9),
    ("product(ball:n=4;ball:n=5)", 0),
    ("product(ball:n=2", 0),
    ("disc:c=0+0i", 5),
    ("ball:n=2,k=3", 9),
    ("", 0),
])
def test_parse_errors_are_positioned(text, position):
    with pytest.raises(ParseError) as exc:
        parse_domain(text)
    assert exc.value.position == position
    assert "position" in str(exc.value)


def test_complex_and_point_syntax():
    assert parse_complex("0.5-0.25i") == 0.5 - 0.25j
    assert parse_complex("-2i") == -2j
    assert parse_complex("1e-3") == 0.001
    np.testing.assert_array_equal(parse_point("0.5+0i, -1i"), [0.5, -1j])
    with pytest.raises(ParseError):
        parse_complex("1+i")
    with pytest.raises(ParseError):
        parse_point("0.5,,1")


def test_poly_syntax():
    H = parse_poly("2-0:1+0i,1-1:0.5-1i", 2)
    assert H == HomogeneousPoly(2, {(2, 0): 1, (1, 1): 0.5 - 1j})
    assert parse_poly("one", 3) == HomogeneousPoly.one(3)
    for bad in ("2-0:1,1-0:1", "2:1", "x-1:1", "1-1"):
        with pytest.raises(ParseError):
            parse_poly(bad, 2)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
positive = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)
leaves = st.one_of(
    st.builds(lambda re, im, r: Disc(complex(re, im), r), finite, finite, positive),
    st.builds(Ball, st.integers(1, 3)),
    st.builds(lambda rs: Polydisc(tuple(rs)), st.lists(positive, min_size=1, max_size=3)),
    st.builds(lambda ps: Ellipsoid(tuple(ps)), st.lists(positive, min_size=1, max_size=3)),
    st.just(MODEL_Z1Z2),
)
domain_strategy = st.one_of(
    leaves,
    st.builds(lambda fs: Product(tuple(fs)), st.lists(leaves, min_size=1, max_size=3)),
).filter(lambda d: d.dim <= cli.MAX_DIM)


@given(domain_strategy)
def test_format_parse_round_trip(d):
    text = format_domain(d)
    assert parse_domain(text) == d
    assert format_domain(parse_domain(text)) == text


@given(domain_strategy, st.integers(0, 5))
def test_whitespace_is_ignored(d, seed):
    text = format_domain(d)
    rng = np.random.default_rng(seed)
    spaced = "".join(c + " " * int(rng.integers(0, 2)) for c in text)
    assert parse_domain(spaced) == d


# -- outputs ----------------------------------------------------------------------------------


def test_kernel_row(capsys):
    code, out, err = _run(["kernel", "--domain", "disc:c=0+0i,r=1", "--point", "0+0i"], capsys)
    assert code == 0 and err == ""
    (row,) = _csv(out)
    assert float(row["value"]) == 1 / math.pi
    assert row["value"] == "0.31830988618379069"
    assert row["seed"] == "0"
    assert out.endswith("\r\n")


def test_dimension_model(capsys):
    code, out, _ = _run(["dimension", "--domain", "gauge:model-z1z2", "--cap", "10"], capsys)
    (row,) = _csv(out)
    assert code == 0 and row["count"] == "0" and row["classification"] == "trivial"


def test_json_mirrors_csv(capsys):
    argv = ["metric", "--domain", "disc:r=1", "--point", "0.5", "--vector", "1"]
    _, out_csv, _ = _run(argv, capsys)
    _, out_json, _ = _run(argv + ["--format", "json"], capsys)
    obj = json.loads(out_json)
    (row,) = _csv(out_csv)
    assert obj["command"] == "metric"
    assert obj["columns"] == list(row)
    (jrow,) = obj["rows"]
    for col in obj["columns"]:
        v = jrow[col]
        if isinstance(v, float):
            assert float(row[col]) == v
        elif isinstance(v, bool):
            assert row[col] == ("true" if v else "false")
        elif v is None:
            assert row[col] == ""
        else:
            assert row[col] == str(v)
    assert float(row["value"]) == pytest.approx(math.sqrt(2) / 0.75, rel=1e-12)


def test_out_writes_file(tmp_path, capsys):
    path = tmp_path / "k.csv"
    code, out, _ = _run(["kernel", "--domain", "ball:n=2", "--point", "0,0", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    (row,) = _csv(path.open(newline="").read())
    assert float(row["value"]) == pytest.approx(2 / math.pi**2)


def test_probe_table(capsys):
    code, out, _ = _run(["scan-monotone", "--domain", "disc:r=1", "--pole", "0.5", "--grid=-3,-2,-1,-0.25"], capsys)
    rows = _csv(out)
    assert code == 0
    assert {r["verdict"] for r in rows} == {"pass"}
    assert [r["descriptor"] for r in rows] == sorted(r["descriptor"] for r in rows)


@pytest.mark.parametrize("argv", [
    ["kernel", "--domain", "ball:n=0", "--point", "0"],
    ["kernel", "--domain", "disc:r=1", "--point", "0,0"],
    ["kernel", "--domain", "disc:r=1"],
    ["nonsense"],
    ["probe-logconvex", "--domain", "disc:r=1", "--pole", "0", "--grid=-1,0"],
    ["probe-psh", "--domain", "disc:r=1", "--direction", "0"],
    ["kernel-h", "--domain", "disc:r=1", "--point", "0", "--poly", "1-1:1"],
    ["suite", "--only", "13"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = _run(argv, capsys)
    assert code == 2 and out == "" and err.startswith("scv: usage error")


@pytest.mark.parametrize("argv", [
    ["kernel", "--domain", "disc:r=1", "--point", "1.5"],
    ["green", "--domain", "ellipsoid:p=2,3", "--pole", "0.1,0", "--point", "0,0"],
    ["metric", "--domain", "gauge:model-z1z2", "--point", "0.1,0.1", "--vector", "1,0"],
    ["probe-convexity", "--domain", "gauge:model-z1z2"],
])
def test_numeric_errors_exit_3(argv, capsys):
    code, out, err = _run(argv, capsys)
    assert code == 3 and out == "" and err.startswith("scv: numeric error")


def test_failed_verdict_exits_1(monkeypatch, capsys):
    def failing(*args, **kwargs):
        return probes._report("scan-monotone", [probes.make_check("x", 2.0, 1.0, 0.0)], "exact")

    monkeypatch.setattr(probes, "monotonicity_scan", failing)
    code, out, _ = _run(["scan-monotone", "--domain", "disc:r=1", "--pole", "0"], capsys)
    assert code == 1
    assert _csv(out)[0]["verdict"] == "fail"


def test_every_operation_has_exactly_one_subcommand():
    reached = [op for ops in OPERATIONS.values() for op in ops]
    assert len(reached) == len(set(reached))
    assert set(reached) == set(scv.PUBLIC_OPERATIONS)
    choices = set(build_parser()._subparsers._group_actions[0].choices)
    assert set(OPERATIONS) == choices
    assert SPEC_SUBCOMMANDS <= choices


def test_every_subcommand_has_help(capsys):
    for name in OPERATIONS:
        assert run([name, "--help"]) == 0
    assert "usage" in capsys.readouterr().out


def _subprocess(argv, workers):
    env = dict(os.environ, SCV_WORKERS=str(workers))
    return subprocess.run([sys.executable, "-m", "scv.cli", *argv], capture_output=True, env=env)


def test_worker_count_does_not_change_output():
    argv = ["indicatrix-vol", "--domain", "ball:n=2", "--point", "0.3,0.1i", "--mc-samples", "300000",
            "--seed", "5"]
    a, b = _subprocess(argv, 1), _subprocess(argv, 3)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_invalid_worker_setting_is_a_usage_error():
    res = _subprocess(["indicatrix-vol", "--domain", "disc:r=1", "--point", "0"], "zero")
    assert res.returncode == 2 and res.stdout == b""
