import json

import pytest

from genrigid.cli import collect_inputs, load_graph, main, run_batch, InputError
from genrigid.config import TestConfig
from genrigid.graph import format_graph, generate, parse_graph
from genrigid.report import ReportFormatError, RigidityReport, analyze, render_text


@pytest.fixture(scope="module")
def prism_report():
    return analyze(generate("prism"), TestConfig(dim=2))


def test_report_contents(prism_report):
    r = prism_report
    assert (r.t, r.s) == (9, 3)
    assert r.verdicts["local"].kind == "LocallyRigid"
    assert r.verdicts["global"].kind == "NotGloballyRigid"
    assert r.diagnostics.hendrickson.connectivity_ok and not r.diagnostics.hendrickson.redundant_ok
    assert r.false_no_bound == str(r.verdicts["global"].bound)
    assert len(r.round_records["global"]) == 40


def test_json_round_trip(prism_report):
    again = RigidityReport.from_json(prism_report.to_json())
    assert again == prism_report


def test_json_rejects_unknown_and_missing_fields(prism_report):
    data = prism_report.to_dict()
    data["surprise"] = 1
    with pytest.raises(ReportFormatError, match="surprise"):
        RigidityReport.from_dict(data)
    data = prism_report.to_dict()
    data["diagnostics"]["extra"] = None
    with pytest.raises(ReportFormatError):
        RigidityReport.from_dict(data)
    data = prism_report.to_dict()
    del data["graph"]["hash"]
    with pytest.raises(ReportFormatError, match="hash"):
        RigidityReport.from_dict(data)


def test_small_and_dimension_one_reports():
    small = analyze(generate("complete", [3]), TestConfig(dim=2))
    assert small.t == 3 and small.globally_rigid
    tiny = analyze(generate("path", [2]), TestConfig(dim=2))
    assert tiny.t is None and tiny.diagnostics.k_min is None
    line = analyze(generate("cycle", [5]), TestConfig(dim=1))
    assert line.diagnostics.dimension_one is True and line.globally_rigid
    assert "dimension-one" in render_text(line)


def test_load_graph(tmp_path):
    assert load_graph("gen:complete_bipartite:5,5").e == 25
    assert load_graph("gen:prism").v == 6
    path = tmp_path / "k4.g"
    path.write_text(format_graph(generate("complete", [4])))
    assert load_graph(str(path)) == generate("complete", [4])
    with pytest.raises(InputError):
        load_graph(str(tmp_path / "missing.txt"))
    with pytest.raises(InputError):
        load_graph("gen:octopus:3")


def test_cli_check_json(capsys):
    code = main(["check", "gen:prism", "--dim", "2", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 1
    assert data["verdicts"]["local"]["kind"] == "LocallyRigid"
    assert data["verdicts"]["global"]["kind"] == "NotGloballyRigid"
    assert data["diagnostics"]["hendrickson"] == {"connectivity_ok": True, "redundant_ok": False}


def test_cli_check_text_k55(capsys):
    code = main(["check", "gen:complete_bipartite:5,5", "--dim", "3"])
    out = capsys.readouterr().out
    assert code == 1
    assert "NotGloballyRigid" in out and "k_min=8" in out


def test_cli_check_exit_codes(tmp_path, capsys):
    assert main(["check", "gen:complete:4", "--dim", "2"]) == 0
    assert main(["check", str(tmp_path / "missing.txt"), "--dim", "2"]) == 2
    assert main(["check", "gen:complete:4", "--rounds", "0"]) == 2
    assert main(["check", "gen:cycle:13", "--dim", "1", "--mode", "rational"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_check_out_and_figure(tmp_path):
    out = tmp_path / "r.json"
    fig = tmp_path / "r.png"
    main(["check", "gen:complete:4", "--json", "--out", str(out), "--figure", str(fig), "--seed", "9"])
    assert RigidityReport.from_json(out.read_text()).seed == 9
    assert fig.stat().st_size > 0


def test_cli_gen(tmp_path, capsys):
    assert main(["gen", "cycle", "5", str(tmp_path / "c5.g")]) == 0
    g = parse_graph((tmp_path / "c5.g").read_text())
    assert (g.v, g.e) == (5, 5)
    main(["gen", "complete", "4", str(tmp_path / "k4.g")])
    assert parse_graph((tmp_path / "k4.g").read_text()).e == 6
    assert main(["gen", "prism", "-"]) == 0
    assert parse_graph(capsys.readouterr().out) == generate("prism")
    assert main(["gen", "complete_bipartite", "2,3", "-"]) == 0
    assert parse_graph(capsys.readouterr().out).e == 6
    assert main(["gen", "cycle", "2", "-"]) == 2


def write_fixtures(directory):
    for name, g in [("a_k4.g", generate("complete", [4])), ("b_prism.g", generate("prism")),
                    ("c_tripod.g", generate("complete_bipartite", [1, 3]))]:
        (directory / name).write_text(format_graph(g))


def test_batch_verdicts(tmp_path, capsys):
    write_fixtures(tmp_path)
    fig = tmp_path.parent / f"{tmp_path.name}_batch.png"
    code = main(["batch", str(tmp_path), "--dim", "2", "--jobs", "2", "--figure", str(fig)])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    rows = [line.split("\t") for line in lines[1:]]
    assert [r[0].rsplit("/", 1)[-1] for r in rows] == ["a_k4.g", "b_prism.g", "c_tripod.g"]
    assert [(r[3], r[4]) for r in rows] == [
        ("LocallyRigid", "GloballyRigid"),
        ("LocallyRigid", "NotGloballyRigid"),
        ("NotLocallyRigid", "NotGloballyRigid"),
    ]
    assert fig.stat().st_size > 0


def test_batch_order_independent_of_workers(tmp_path):
    write_fixtures(tmp_path)
    sources = collect_inputs([str(tmp_path)])
    cfg = TestConfig(dim=2, rounds=10)
    strip = lambda entries: [{**e, "report": {**e["report"], "wall_time": 0}} for e in entries]  # noqa: E731
    assert strip(run_batch(sources, cfg, jobs=1)) == strip(run_batch(sources, cfg, jobs=3))


def test_batch_empty_directory(tmp_path, capsys):
    assert main(["batch", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip().split("\t")[0] == "name"


def test_batch_malformed_file(tmp_path, capsys):
    write_fixtures(tmp_path)
    (tmp_path / "bad.g").write_text("3 1\n0 0\n")
    code = main(["batch", str(tmp_path), "--json", "--jobs", "1"])
    captured = capsys.readouterr()
    entries = json.loads(captured.out)["entries"]
    assert code == 2
    assert [("error" in e) for e in entries] == [False, False, True, False]
    assert "self-loop" in entries[2]["error"] and "line 2" in entries[2]["error"]
    assert "bad.g" in captured.err
