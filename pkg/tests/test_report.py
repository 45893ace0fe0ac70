import csv
import io
import json

import pytest

from serprop import (SerConfig, ValidationError, analyze_all, build_report,
                     node_ser, parse_bench, report_to_csv, report_to_json,
                     sp_independent)

AND_TOY = "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = AND(A, B)\n"


def _toy_report(cfg=None, sites=None, aggregation="any"):
    nl = parse_bench(AND_TOY, name="toy")
    sp = sp_independent(nl)
    reps = analyze_all(nl, sp, sites=sites)
    cfg = cfg or SerConfig(aggregation_mode=aggregation)
    return nl, build_report(nl, reps, cfg, sp_method="independent",
                            sites=sites)


def test_node_ser_is_the_three_term_product():
    assert node_ser(1e-5, 0.8, 0.5) == pytest.approx(4e-6)
    assert node_ser(0.37, 1.0, 1.0) == 0.37
    assert node_ser(0.37, 0.9, 0.0) == 0.0


def test_node_ser_range_validation():
    with pytest.raises(ValueError):
        node_ser(-1.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        node_ser(1.0, 1.5, 0.5)
    with pytest.raises(ValueError):
        node_ser(1.0, 0.5, -0.1)


def test_ser_config_validation():
    with pytest.raises(ValueError):
        SerConfig(default_r_seu=-1.0)
    with pytest.raises(ValueError):
        SerConfig(default_p_latched=2.0)
    with pytest.raises(ValueError):
        SerConfig(aggregation_mode="sum")
    with pytest.raises(ValueError):
        SerConfig(p_latched={"A": 1.1})


def test_build_report_uniform_defaults():
    nl, rep = _toy_report()
    assert len(rep.rows) == nl.n_nets
    assert rep.circuit == "toy"
    # pure sensitization profile: EPP(A) = EPP(B) = 0.5, EPP(Y) = 1
    by_name = {r.name: r for r in rep.rows}
    assert by_name["A"].p_sensitized == pytest.approx(0.5)
    assert by_name["Y"].ser == 1.0
    assert rep.total_ser == pytest.approx(sum(r.ser for r in rep.rows))
    assert rep.total_ser == pytest.approx(2.0)


def test_build_report_ranking_and_scaling():
    _, base = _toy_report()
    assert base.ranking[0] == "Y"
    assert set(base.ranking[1:]) == {"A", "B"}
    # ties broken by declaration order
    assert list(base.ranking[1:]) == ["A", "B"]
    _, scaled = _toy_report(cfg=SerConfig(default_r_seu=2.0))
    assert scaled.total_ser == pytest.approx(2 * base.total_ser)
    assert scaled.ranking == base.ranking


def test_build_report_zero_epp_ranks_last():
    with pytest.warns(UserWarning):
        nl = parse_bench(
            "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = NOT(A)\nZ = NOT(B)\n",
            name="dangle")
    reps = analyze_all(nl, sp_independent(nl))
    rep = build_report(nl, reps, SerConfig(), sp_method="independent")
    assert rep.ranking[-1] == "Z"


def test_build_report_overrides_by_name():
    cfg = SerConfig(r_seu={"A": 3.0}, p_latched={"Y": 0.5})
    nl, rep = _toy_report(cfg=cfg)
    by_name = {r.name: r for r in rep.rows}
    assert by_name["A"].ser == pytest.approx(3.0 * 0.5)
    assert by_name["Y"].ser == pytest.approx(0.5)
    assert by_name["B"].ser == pytest.approx(0.5)


def test_build_report_unknown_override_rejected():
    nl = parse_bench(AND_TOY)
    reps = analyze_all(nl, sp_independent(nl))
    with pytest.raises(ValidationError, match="nosuch"):
        build_report(nl, reps, SerConfig(r_seu={"nosuch": 1.0}),
                     sp_method="independent")


def test_build_report_site_filter_marks_skipped():
    nl, rep = _toy_report(sites=[0])
    by_name = {r.name: r for r in rep.rows}
    assert by_name["A"].p_sensitized is not None
    assert by_name["B"].p_sensitized is None
    assert by_name["B"].ser is None
    assert rep.total_ser == by_name["A"].ser
    assert rep.ranking == ("A",)


def test_build_report_missing_and_duplicate_sites_rejected():
    nl = parse_bench(AND_TOY)
    reps = analyze_all(nl, sp_independent(nl))
    with pytest.raises(ValidationError, match="no EppReport"):
        build_report(nl, reps[:2], SerConfig(), sp_method="independent")
    with pytest.raises(ValidationError, match="duplicate"):
        build_report(nl, reps + reps[:1], SerConfig(),
                     sp_method="independent")


def test_aggregation_mode_selects_the_aggregate():
    nl = parse_bench(
        "INPUT(A)\nINPUT(B)\nOUTPUT(X)\nOUTPUT(Y)\n"
        "X = AND(A, B)\nY = OR(A, B)\n", name="two_out")
    sp = sp_independent(nl)
    reps = analyze_all(nl, sp)
    any_rep = build_report(nl, reps, SerConfig(aggregation_mode="any"),
                           sp_method="independent")
    max_rep = build_report(nl, reps, SerConfig(aggregation_mode="max"),
                           sp_method="independent")
    a_any = {r.name: r for r in any_rep.rows}["A"].p_sensitized
    a_max = {r.name: r for r in max_rep.rows}["A"].p_sensitized
    assert a_max <= a_any


def test_json_schema_and_key_order():
    _, rep = _toy_report()
    doc = json.loads(report_to_json(rep))
    assert list(doc) == ["circuit", "sp_method", "aggregation_mode", "nodes",
                         "total_ser"]
    assert all(list(n) == ["name", "r_seu", "p_latched", "p_sensitized",
                           "ser"] for n in doc["nodes"])
    assert doc["circuit"] == "toy"
    assert doc["sp_method"] == "independent"
    assert len(doc["nodes"]) == 3


def test_json_skipped_rows_are_null():
    _, rep = _toy_report(sites=[0])
    doc = json.loads(report_to_json(rep))
    skipped = [n for n in doc["nodes"] if n["name"] == "B"][0]
    assert skipped["p_sensitized"] is None
    assert skipped["ser"] is None


def test_csv_carries_the_same_numbers_as_json():
    _, rep = _toy_report()
    doc = json.loads(report_to_json(rep))
    rows = list(csv.DictReader(io.StringIO(report_to_csv(rep))))
    assert len(rows) == len(doc["nodes"])
    for got, want in zip(rows, doc["nodes"]):
        assert got["name"] == want["name"]
        assert float(got["ser"]) == want["ser"]
        assert float(got["p_sensitized"]) == want["p_sensitized"]


def test_csv_skipped_cells_are_empty():
    _, rep = _toy_report(sites=[0])
    rows = list(csv.DictReader(io.StringIO(report_to_csv(rep))))
    skipped = [r for r in rows if r["name"] == "B"][0]
    assert skipped["ser"] == ""


def test_serialization_is_stable():
    _, a = _toy_report()
    _, b = _toy_report()
    assert report_to_json(a) == report_to_json(b)
    assert report_to_csv(a) == report_to_csv(b)
