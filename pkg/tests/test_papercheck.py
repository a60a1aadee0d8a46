import json

import pytest

from packlab.errors import InvalidParameter
from packlab.papercheck import (
    CHECKS, CheckConfig, CheckReport, exit_status, resolve_check_id, run_all, run_check,
)

FAST = ["C9", "C11", "C7", "C6"]


def _strip_time(r):
    d = r.to_json()
    d.pop("wall_time")
    return d


def test_registry():
    assert list(CHECKS) == [f"C{i}" for i in range(1, 14)]
    assert resolve_check_id("window26") == "C8"
    assert resolve_check_id("c3") == "C3"
    with pytest.raises(InvalidParameter, match="C1, C2"):
        resolve_check_id("C99")


def test_report_shape(validate):
    r = run_check("C9")
    assert r.status == "pass" and r.passed
    assert r.observed["constrained_max"] == 16
    validate(json.loads(r.to_line()), "check_report")


def test_size_cap_gives_skipped_not_pass(validate):
    r = run_check("C1", CheckConfig(max_vertices=10))
    assert r.status == "skipped"
    assert r.notes["size_cap"]["cap"] == 10
    validate(r.to_json(), "check_report")


def test_reduced_ranges():
    cfg = CheckConfig(table_max_n=8, strip5_max_m=12, strip10_max_n=14, fisher_max_p=4,
                      fisher_max_q=6, fisher_bnb_max=3, construction_max_n=15, ogf_max_n=50,
                      code_max_n=6, iso_max_n=4)
    for cid in ["C1", "C2", "C3", "C4", "C10", "C11", "C12"]:
        assert run_check(cid, cfg).status == "pass", cid


def test_table_values_observed_t10():
    r = run_check("C1", CheckConfig(table_max_n=10))
    assert r.observed["rho_triangle"]["10"] == 13


def test_order_independence_and_idempotence():
    forward = {r.check_id: _strip_time(r) for r in run_all(FAST)}
    backward = {r.check_id: _strip_time(r) for r in run_all(list(reversed(FAST)))}
    assert forward == backward
    assert [r.check_id for r in run_all(list(reversed(FAST)))] == list(reversed(FAST))


def test_parallel_matches_serial():
    serial = [_strip_time(r) for r in run_all(FAST)]
    parallel = [_strip_time(r) for r in run_all(FAST, threads=2)]
    assert serial == parallel


def test_exit_status():
    def rep(status):
        return CheckReport("C1", "x", "", {}, {}, {}, status, 0.0)
    assert exit_status([rep("pass"), rep("skipped")]) == 0
    assert exit_status([rep("pass"), rep("fail")]) == 1
    assert exit_status([]) == 0


def test_t10_check_reports_raw_and_class_counts():
    r = run_check("C5")
    assert r.observed["maximum_size"] == 13
    assert r.observed["raw_count"] == 4
    assert r.observed["sets_admitting_left_column_cell"] == 1
    assert r.observed["left_column_rows"] == [7]
    assert len(r.notes["solutions"]) == 4
