import json

import pytest

from treentropy.cli import main
from treentropy.gen import FamilySpec, generate
from treentropy.graphcore import GraphError
from treentropy.report import (
    Report,
    counts_agree,
    format_graph,
    parse_graph_text,
    run_routes,
)
from treentropy.treecount import CountResult, Route

EXAMPLE4 = """# 4-vertex example
4 4
1 2
2 3
3 4   # trailing comment
2 4
"""


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example4.g"
    path.write_text(EXAMPLE4, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_graph_file_parsing():
    G = parse_graph_text(EXAMPLE4)
    assert G == generate(FamilySpec("paper_example"))
    assert parse_graph_text(format_graph(G)) == G
    M = parse_graph_text("3 2\n1 2 4\n2 3\n")
    assert M.multiplicity(1, 2) == 4
    assert parse_graph_text(format_graph(M)) == M


@pytest.mark.parametrize("text", ["", "4\n", "3 2\n1 2\n", "3 1\n1 2 3 4\n", "3 1\n1 x\n",
                                  "3 1\n1 1\n", "a b\n"])
def test_graph_file_errors(text):
    with pytest.raises(GraphError):
        parse_graph_text(text)


def test_count_complete(capsys):
    code, out = run(capsys, "count", "--family", "complete:n=5", "--route", "all")
    assert code == 0
    assert "tau = 125" in out.out
    assert out.out.count("rounded=125") == 7


def test_count_file_entropy_pi(capsys, example_file):
    code, out = run(capsys, "count", "--file", example_file, "--route", "entropy_pi", "--ell", "2")
    assert code == 0 and "tau = 3" in out.out


def test_count_star_determinant(capsys):
    code, out = run(capsys, "count", "--family", "star:n=7", "--route", "determinant")
    assert code == 0 and "tau = 1" in out.out


def test_count_dc_alias_and_json(capsys):
    code, out = run(capsys, "count", "--family", "cycle:n=6", "--route", "dc", "--json")
    data = json.loads(out.out)
    assert code == 0
    assert data["tau"] == 6 and data["routes"][0]["route"] == "deletion_contraction"


def test_count_raw_printed_to_12_digits(capsys):
    code, out = run(capsys, "count", "--family", "complete:n=4", "--route", "entropy_pi")
    raw_field = next(tok for tok in out.out.split() if tok.startswith("raw="))
    assert raw_field == "raw=16"


def test_count_skips_are_recorded(capsys):
    code, out = run(capsys, "count", "--family", "erdos_renyi:n=13,p=0.9,seed=1", "--json")
    data = json.loads(out.out)
    skipped = {r["route"]: r["skipped"] for r in data["routes"] if "skipped" in r}
    assert code == 0
    assert list(skipped) == ["deletion_contraction"]


def test_count_parse_failure(capsys, tmp_path):
    bad = tmp_path / "bad.g"
    bad.write_text("3 5\n1 2\n", encoding="utf-8")
    assert run(capsys, "count", "--file", str(bad))[0] == 1
    assert run(capsys, "count", "--family", "bogus:n=3")[0] == 1
    assert run(capsys, "count", "--file", str(tmp_path / "missing.g"))[0] == 1
    assert run(capsys, "count")[0] == 1


def test_count_numerical_breach_exit_code(capsys, monkeypatch):
    import treentropy.report as report

    def broken(G, ell=1, rtol=1e-6):
        from treentropy.treecount import round_count
        round_count(2.5, rtol)

    monkeypatch.setattr(report, "tau_determinant", broken)
    assert run(capsys, "count", "--family", "complete:n=4", "--route", "determinant")[0] == 2


def test_count_disagreement_exit_code(capsys, monkeypatch):
    import treentropy.report as report

    monkeypatch.setattr(report, "tau_determinant",
                        lambda G, ell=1, rtol=1e-6: CountResult(17.0, 17, Route.determinant, 0.0))
    code, out = run(capsys, "count", "--family", "complete:n=4")
    assert code == 2 and "DISAGREE" in out.out


def test_bounds_paper_example(capsys, example_file):
    code, out = run(capsys, "bounds", "--file", example_file, "--json")
    b = json.loads(out.out)["bounds"]
    assert code == 0
    assert b["tau_exact"] == 3 and b["tau0"] == pytest.approx(4) and b["tau_trivial"] == 4
    assert b["tauE"] == pytest.approx(125 / 27)


def test_bounds_complete_and_multistar(capsys):
    code, out = run(capsys, "bounds", "--family", "complete:n=6", "--json")
    b = json.loads(out.out)["bounds"]
    for name in ("tau0", "tauA", "tauB", "tauC", "tauD", "tauE"):
        assert b[name] == pytest.approx(3125, rel=1e-9)
    code, out = run(capsys, "bounds", "--family", "multistar:n=5,k=4")
    assert code == 0
    line = next(l for l in out.out.splitlines() if l.strip().startswith("tau0 "))
    assert line.split()[1] == "4" and line.endswith("tight")


def test_report_json_round_trip(capsys):
    for argv in (["count", "--family", "paper_example", "--json"],
                 ["bounds", "--family", "multistar:n=5,k=2", "--json"],
                 ["count", "--family", "erdos_renyi:n=13,p=0.9,seed=1", "--json"]):
        _, out = run(capsys, *argv)
        data = json.loads(out.out)
        report = Report.from_dict(data)
        again = Report.from_dict(json.loads(json.dumps(report.to_dict())))
        assert again == report
        assert again.to_dict() == data


def test_report_rejects_unknown_schema():
    with pytest.raises(ValueError):
        Report.from_dict({"schema_version": 99})


def test_counts_agree_large_values():
    a = CountResult(1e200, int(1e200), Route.determinant, 0.0)
    b = CountResult(1e200 * (1 + 1e-12), int(1e200 * (1 + 1e-12)), Route.entropy_pi, 0.0)
    c = CountResult(1.1e200, int(1.1e200), Route.entropy_id, 0.0)
    assert a.rounded != b.rounded and counts_agree([a, b])
    assert not counts_agree([a, c])
    assert counts_agree([CountResult(3.0, 3, Route.determinant, 0.0)])


def test_run_routes_records_isolated_vertex_skip():
    G = parse_graph_text("4 3\n1 2\n2 3\n1 3\n")
    out = run_routes(G, [Route.entropy_id], ell=4)
    assert out[0].result is None and "isolated" in out[0].skipped


def test_verify_small_corpus(capsys):
    code, out = run(capsys, "verify", "--count", "20", "--multigraphs", "5",
                    "--sizes", "4..10", "--p", "0.5")
    assert code == 0
    assert out.out.count("PASS") == 5


def test_verify_reports_counterexample(capsys, monkeypatch):
    import treentropy.verify as verify

    monkeypatch.setattr(verify, "counts_agree", lambda results, rtol: False)
    code, out = run(capsys, "verify", "--count", "3", "--multigraphs", "0")
    assert code == 2
    assert "FAIL  route_agreement" in out.out
    # serialized counterexample follows the failure line
    lines = out.out.splitlines()
    idx = next(i for i, l in enumerate(lines) if l.startswith("FAIL"))
    n, m = map(int, lines[idx + 1].split())
    assert len(lines[idx + 2: idx + 2 + m]) == m
