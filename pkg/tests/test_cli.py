import csv
import json
import subprocess
import sys

import pytest

from serprop.cli import main

AND_TOY = "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = AND(A, B)\n"
XOR_TOY = "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = XOR(A, B)\n"


@pytest.fixture
def toy(tmp_path):
    p = tmp_path / "toy.bench"
    p.write_text(AND_TOY)
    return p


def _run(capsys, argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_analyze_toy_json(toy, capsys):
    code, out, _ = _run(capsys, ["analyze", toy])
    assert code == 0
    doc = json.loads(out)
    by_name = {n["name"]: n for n in doc["nodes"]}
    assert by_name["A"]["p_sensitized"] == pytest.approx(0.5)
    assert by_name["Y"]["ser"] == 1.0
    assert doc["sp_method"] == "independent"


def test_analyze_sites_subset_marks_skipped(toy, capsys):
    code, out, _ = _run(capsys, ["analyze", toy, "--sites", "A,Y"])
    assert code == 0
    doc = json.loads(out)
    by_name = {n["name"]: n for n in doc["nodes"]}
    assert by_name["B"]["p_sensitized"] is None
    assert by_name["A"]["p_sensitized"] == pytest.approx(0.5)


def test_analyze_writes_out_file(toy, tmp_path, capsys):
    dest = tmp_path / "report.json"
    code, out, _ = _run(capsys, ["analyze", toy, "--out", dest])
    assert code == 0
    assert out == ""
    json.loads(dest.read_text())


def test_analyze_csv_format(toy, capsys):
    code, out, _ = _run(capsys, ["analyze", toy, "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [r["name"] for r in rows] == ["A", "B", "Y"]


def test_bad_sp_method_is_a_usage_error(toy):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", str(toy), "--sp-method", "psychic"])
    assert exc.value.code == 2


def test_unknown_site_name_exits_2(toy, capsys):
    code, _, err = _run(capsys, ["analyze", toy, "--sites", "NOPE"])
    assert code == 2
    assert "NOPE" in err


def test_missing_netlist_file_exits_1(tmp_path, capsys):
    code, _, err = _run(capsys, ["analyze", tmp_path / "absent.bench"])
    assert code == 1
    assert "error" in err


def test_malformed_bench_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.bench"
    bad.write_text("INPUT(A)\nOUTPUT(Y)\nY = AND(A, Q)\n")
    code, _, err = _run(capsys, ["analyze", bad])
    assert code == 1
    assert "Q" in err


def test_simulate_requires_vectors_for_mc(toy, capsys):
    code, _, err = _run(capsys, ["simulate", toy])
    assert code == 2
    assert "vectors" in err


def test_simulate_exact_xor_toy(tmp_path, capsys):
    p = tmp_path / "xor.bench"
    p.write_text(XOR_TOY)
    code, out, _ = _run(capsys, ["simulate", p, "--sp-method", "exact"])
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    by_site = {r["site"]: r for r in rows}
    # an error on either XOR input always reaches the output
    assert float(by_site["A"]["aggregate_any"]) == 1.0
    assert by_site["A"]["method"] == "exhaustive"
    assert by_site["A"]["n_vectors"] == "4"


def test_simulate_mc_json_format(toy, capsys):
    code, out, _ = _run(capsys, ["simulate", toy, "--vectors", "256",
                                 "--seed", "5", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["vectors"] == 256
    assert {d["name"] for d in doc["sites"]} == {"A", "B", "Y"}
    y = [d for d in doc["sites"] if d["name"] == "Y"][0]
    assert y["per_output"]["Y"] == 1.0


def test_simulate_exact_refuses_wide_inputs(tmp_path, capsys):
    lines = [f"INPUT(I{k})" for k in range(25)] + ["OUTPUT(Y)"]
    lines.append("Y = AND(" + ", ".join(f"I{k}" for k in range(25)) + ")")
    p = tmp_path / "wide.bench"
    p.write_text("\n".join(lines) + "\n")
    code, _, err = _run(capsys, ["simulate", p, "--sp-method", "exact"])
    assert code == 2
    assert "24" in err


def test_reruns_are_byte_identical(toy, tmp_path, capsys):
    outs = []
    for k in range(2):
        dest = tmp_path / f"r{k}.json"
        assert _run(capsys, ["analyze", toy, "--out", dest])[0] == 0
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_jobs_do_not_change_output(toy, tmp_path, capsys):
    a, b = tmp_path / "j1.json", tmp_path / "j4.json"
    assert _run(capsys, ["analyze", toy, "--jobs", "1", "--out", a])[0] == 0
    assert _run(capsys, ["analyze", toy, "--jobs", "4", "--out", b])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_compare_writes_csv_and_summary(toy, tmp_path, capsys):
    dest = tmp_path / "cmp.csv"
    code, _, _ = _run(capsys, ["compare", toy, "--out", dest])
    assert code == 0
    rows = list(csv.DictReader(dest.read_text().splitlines()))
    assert {r["site"] for r in rows} == {"A", "B", "Y"}
    summ = json.loads((tmp_path / "cmp.summary.json").read_text())
    # the toy is a tree with exact signal probabilities: zero disagreement
    assert summ["baseline"] == "exhaustive"
    assert summ["mean_abs_diff"] < 1e-12
    assert summ["max_abs_diff"] < 1e-12
    for r in rows:
        assert float(r["abs_diff"]) < 1e-12


def test_compare_mc_baseline_summary_to_stdout(toy, capsys):
    code, out, err = _run(capsys, ["compare", toy, "--vectors", "2048",
                                   "--seed", "1", "--sp-method",
                                   "independent"])
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 3
    summ = json.loads(err[err.index("{"):])
    assert summ["baseline"] == "montecarlo"
    assert summ["vectors"] == 2048
    assert summ["max_abs_diff"] < 0.1


def test_sp_csv_header_and_values(toy, capsys):
    code, out, _ = _run(capsys, ["sp", toy, "--sp-method", "exact"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "net_name,sp"
    rows = dict(r.split(",") for r in lines[1:])
    assert float(rows["Y"]) == 0.25


def test_config_file_sets_defaults(toy, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "input_sp": {"A": 1.0, "B": 1.0},
        "r_seu": {"Y": 2.0},
    }))
    code, out, _ = _run(capsys, ["analyze", toy, "--config", cfg])
    assert code == 0
    by_name = {n["name"]: n for n in json.loads(out)["nodes"]}
    # with both inputs pinned to 1 every site always propagates
    assert by_name["A"]["p_sensitized"] == 1.0
    assert by_name["Y"]["ser"] == 2.0


def test_config_flag_wins_over_config_file(toy, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sp_method": "montecarlo", "vectors": 64}))
    code, out, _ = _run(capsys, ["analyze", toy, "--sp-method", "exact"])
    assert code == 0
    assert json.loads(out)["sp_method"] == "exact"


def test_unknown_config_key_exits_2(toy, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rseu": {"Y": 2.0}}))
    code, _, err = _run(capsys, ["analyze", toy, "--config", cfg])
    assert code == 2
    assert "rseu" in err


def test_malformed_config_exits_2(toy, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    code, _, err = _run(capsys, ["analyze", toy, "--config", cfg])
    assert code == 2


def test_module_entry_point_smoke(toy, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "serprop.cli", "analyze", str(toy)],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["total_ser"] == pytest.approx(2.0)
