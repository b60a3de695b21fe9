import json

import pytest
from click.testing import CliRunner

from gsclosure.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, list(args))
    return _run


def test_count_reduced_csv(run):
    res = run("count", "--p", "3", "--n", "3", "--tower", "closure", "--model", "reduced", "--beta", "t")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "base,fiber_size,split,values_outside_Kminus"
    assert sum(int(l.split(",")[1]) for l in lines[1:]) == 162


def test_formats_encode_the_same_rows(run):
    args = ("count", "--p", "3", "--n", "3")
    js = json.loads(run(*args, "--format", "json").output)
    csv_rows = run(*args, "--format", "csv").output.splitlines()[1:]
    table = run(*args, "--format", "table").output.splitlines()[2:]
    assert js["summary"]["total"] == 54
    assert js["manifest"]["modulus"] == "T^2+1"
    assert len(js["fibers"]) == len(csv_rows) == len(table) == 6
    for f, c, t in zip(js["fibers"], csv_rows, table):
        assert c.split(",")[0] == f["base"] == t.split("|")[1].strip()


def test_degree(run):
    js = json.loads(run("degree", "--p", "3", "--n", "3", "--tower", "closure", "--model", "reduced").output)
    assert js["degree"] == {"exact": 27}


def test_field_info(run):
    res = run("field-info", "--p", "5")
    js = json.loads(res.output)
    assert res.exit_code == 0 and js["q"] == 25 and len(js["Kminus"]) == 5
    assert js["norm_trace_census"]["instances"] == 20


def test_verify_passing_suite(run):
    res = run("verify", "--p", "3", "--suite", "gshift", "--suite", "lemma", "--kmax", "2")
    js = json.loads(res.output)
    assert res.exit_code == 0 and js["all_passed"]
    assert [e["statement_id"] for e in js["checklist"]] == [
        "g_shift_expansion", "shift_relation.depth1", "shift_relation.depth2"]


def test_verify_failing_suite_exits_1(run):
    res = run("verify", "--p", "3", "--suite", "delta")
    js = json.loads(res.output)
    assert res.exit_code == 1
    failing = [e["statement_id"] for e in js["checklist"] if not e["passed"]]
    assert failing == ["delta.constant_in_Kminus"]


def test_genus_requires_level_above_four(run):
    res = run("genus", "--p", "3", "--n", "4")
    assert res.exit_code == 2 and "n > 4" in res.output


def test_genus_and_ratio_tables(run):
    res = run("genus", "--p", "3", "--n", "5", "--deg", "81", "--format", "json")
    assert json.loads(res.output)["rows"][0]["ratio_at_deg"] == "243/116"
    res = run("ratio", "--p", "3", "--nmax", "7", "--deg-floor", "--format", "csv")
    assert res.exit_code == 0 and len(res.output.splitlines()) == 4
    assert run("ratio", "--p", "3", "--nmax", "4").exit_code == 2


def test_different(run):
    js = json.loads(run("different", "--p", "3", "--n", "4", "--format", "json").output)
    assert js["consistent"] and js["rows"][1]["exponent_by_steps"] == 52


@pytest.mark.parametrize("args", [
    ("count", "--p", "4", "--n", "3"),
    ("count", "--p", "3", "--n", "3", "--tower", "closure", "--beta", "1"),
    ("count", "--p", "3", "--n", "3", "--bogus"),
    ("count", "--p", "3", "--n", "4", "--tower", "closure", "--model", "reduced"),
    ("verify", "--p", "3", "--suite", "nope"),
    ("count", "--p", "3"),
])
def test_bad_flags_exit_2(run, args):
    assert run(*args).exit_code == 2
