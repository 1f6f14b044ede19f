import json
import os
import random
from pathlib import Path

import pytest

import rankaudit as ra

DATA = Path(os.environ.get("RANKAUDIT_TEST_DATA", Path(__file__).resolve().parents[2] / "tests" / "data"))
STUDENTS = str(DATA / "students.csv")


@pytest.fixture(scope="module")
def students():
    data, ranking, warnings = ra.ingest_csv(STUDENTS, rank="Rank", ignore=["Id", "Grade"])
    assert warnings == []
    return data, ranking


def test_ingest(students):
    data, ranking = students
    assert len(data) == 16
    assert data.attributes == ["Gender", "School", "Address", "Failures"]
    assert ranking.order[0] == 11  # row 12 holds rank 1


def test_global_running_example(students):
    data, ranking = students
    audit = ra.audit_global(data, ranking, tau=4, k_min=4, k_max=5, bounds=2)
    assert {"{Address=U}", "{Failures=1}"} <= set(audit.per_k[4])
    assert "{Address=U, Failures=1}" in audit.per_k[5]
    baseline = ra.audit_global(data, ranking, 4, 4, 5, [(4, 2)], engine="baseline")
    oracle = ra.audit_global(data, ranking, 4, 4, 5, 2, engine="oracle")
    assert audit.per_k == baseline.per_k == oracle.per_k
    assert audit.evaluated < baseline.evaluated


def test_prop_running_example(students):
    data, ranking = students
    audit = ra.audit_prop(data, ranking, tau=5, k_min=4, k_max=5, alpha="0.9")
    assert sorted(audit.per_k[4]) == ["{Address=U}", "{Failures=1}", "{School=GP}"]
    assert "{Gender=F}" in audit.per_k[5]
    report = json.loads(audit.to_json())
    assert report["mode"] == "proportional"
    assert [e["k"] for e in report["per_k"]] == [4, 5]


def test_explain_ranks_the_driver_first():
    rng = random.Random(3)
    rows = [[str(rng.randrange(3)), str(rng.randrange(2)), str(rng.randrange(2))] for _ in range(300)]
    data = ra.Dataset(["Driver", "B", "C"], rows)
    ranking = ra.Ranking.from_scores(data, [-float(r[0]) for r in rows])
    out = ra.explain(data, ranking, "Driver=2", k=50)
    assert out["attributes"][0]["attribute"] == "Driver"
    assert out["group_size"] == sum(r[0] == "2" for r in rows)
    assert out["histograms_csv"].startswith("attribute,value_label,group_proportion,topk_proportion")
    mc = ra.explain(data, ranking, "Driver=2", k=50, surrogate="regression-tree", shapley="monte-carlo", seed=4)
    assert mc["attributes"][0]["attribute"] == "Driver"


def test_worst_case():
    data, ranking, tau, k, bound = ra.worst_case(4)
    audit = ra.audit_global(data, ranking, tau, k, k, bound)
    assert len(audit.per_k[k]) == 6


def test_cli_is_deterministic():
    args = ["audit-global", "--input", STUDENTS, "--rank", "Rank", "--ignore", "Id", "--ignore", "Grade",
            "--tau", "4", "--kmin", "4", "--kmax", "5", "--bounds", "2"]
    first = ra.run_cli(args)
    second = ra.run_cli(args)
    assert first[0] == 0
    assert first == second


def test_errors():
    with pytest.raises(ra.RankAuditError):
        ra.ingest_csv(STUDENTS, rank="Nope")
    code, _, err = ra.run_cli(["audit-global", "--bogus"])
    assert code == 1 and "error" in err
    code, _, _ = ra.run_cli(["audit-prop", "--input", "/nonexistent.csv", "--rank", "R", "--tau", "1",
                             "--kmin", "1", "--kmax", "1", "--alpha", "1"])
    assert code == 2
