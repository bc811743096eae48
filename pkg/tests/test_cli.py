import io
import json

import pytest

from tropfan import cli
from tropfan import corpus
from tropfan import quasilinear as ql
from tropfan import tfan
from tropfan import tropcycle as tc


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def example_text(name):
    ex = corpus.get(name)
    return tfan.write_fan(ex.weighted(), ex.functions())


def test_cross_is_not_irreducible(capsys, monkeypatch):
    code, text, _ = run(capsys, monkeypatch, ["examples", "--name", "cross"])
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["check", "irreducible"], stdin=text)
    assert code == 0 and out == "rank M₁ = 2, not irreducible\n"


def test_modify_the_plane(capsys, monkeypatch, tmp_path):
    path = tmp_path / "r2.tfan"
    path.write_text(example_text("r2-p2"))
    code, out, _ = run(capsys, monkeypatch, ["modify", "--fan", str(path), "--pl", "minxy0"])
    assert code == 0
    wf, _, _ = tfan.read_fan(out)
    assert tc.same_cycle(wf, corpus.get("tropical-plane-r3").weighted())
    assert set(wf.fan.rays) == {(1, 0, 0), (0, 1, 0), (-1, -1, -1), (0, 0, 1)}


def test_bergman_pipes_into_quasilinear(capsys, monkeypatch):
    code, fan_text, _ = run(capsys, monkeypatch, ["bergman", "--uniform", "2", "4"])
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["quasilinear", "-", "--json"], stdin=fan_text)
    report = json.loads(out)
    assert code == 0 and report["status"] == "quasilinear" and report["depth"] == 2


def test_certificate_file_round_trip(capsys, monkeypatch, tmp_path):
    fan = tmp_path / "plane.tfan"
    fan.write_text(example_text("tropical-plane-r3"))
    cert = tmp_path / "plane.cert"
    code, out, _ = run(capsys, monkeypatch, ["quasilinear", str(fan), "--cert-out", str(cert)])
    assert code == 0 and out == "quasilinear, certificate of depth 2\n"
    code, out, _ = run(capsys, monkeypatch, ["verify-cert", str(fan), "--cert", str(cert)])
    assert code == 0 and out == "certificate valid\n"
    other = tmp_path / "line.tfan"
    other.write_text(example_text("classical-plane-r3"))
    code, out, _ = run(capsys, monkeypatch, ["verify-cert", str(other), "--cert", str(cert)])
    assert code == 0 and out.startswith("certificate rejected")


def test_reports_are_byte_stable(capsys, monkeypatch):
    text = example_text("bergman-u25")
    outs = [run(capsys, monkeypatch, ["quasilinear", "--json"], stdin=text)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert ql.verify_certificate(corpus.get("bergman-u25").weighted(),
                                 ql.doc_to_cert(doc["certificate"]["certificate"]))


@pytest.mark.parametrize("argv,needle", [
    (["check", "balance"], "balanced"),
    (["check", "reduced"], "reduced"),
    (["check", "local"], "irreducible"),
    (["check", "poincare"], "Poincar"),
    (["compute", "minkowski", "--k", "1"], ""),
    (["compute", "chow"], ""),
    (["compute", "star", "--cone", "0"], ""),
    (["compute", "refine", "--unimodular"], ""),
    (["recognize-modification"], ""),
])
def test_subcommands_run_on_the_line(capsys, monkeypatch, argv, needle):
    code, out, _ = run(capsys, monkeypatch, argv, stdin=example_text("tropical-line-r2"))
    assert code == 0 and needle in out
    code, out, _ = run(capsys, monkeypatch, argv + ["--json"], stdin=example_text("tropical-line-r2"))
    assert code == 0 and isinstance(json.loads(out), dict)


def test_divisor_of_min_2x_0(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["compute", "divisor", "--pl", "min2x0", "--json"],
                       stdin=example_text("r1"))
    assert code == 0
    assert json.dumps(json.loads(out)).count('"weight": 2') == 1


def test_product_and_isomorphic(capsys, monkeypatch, tmp_path):
    a = tmp_path / "line.tfan"
    a.write_text(example_text("tropical-line-r2"))
    b = tmp_path / "r1.tfan"
    b.write_text(example_text("r1"))
    code, prod, _ = run(capsys, monkeypatch, ["compute", "product", str(a), str(b)])
    assert code == 0
    c = tmp_path / "prod.tfan"
    c.write_text(prod)
    d = tmp_path / "minx0.tfan"
    d.write_text(example_text("minx0-modification"))
    code, out, _ = run(capsys, monkeypatch, ["isomorphic", str(c), str(d)])
    assert code == 0 and out == "isomorphic\n"


def test_negative_verdicts_exit_zero(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["quasilinear"], stdin=example_text("fan-121"))
    assert code == 0 and out == "not quasilinear: not reduced\n"


def test_parse_error_reports_position(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["check", "balance"], stdin='{\n  "rays": [,]\n}')
    assert code == 1 and "line 2, column" in err


def test_semantic_errors_exit_one(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, monkeypatch, ["check", "balance", str(tmp_path / "missing.tfan")])
    assert code == 1 and "cannot read" in err
    code, _, err = run(capsys, monkeypatch, ["modify", "--pl", "nope"], stdin=example_text("r1"))
    assert code == 1 and "InputError" in err
    bad = '{"ambient_rank": "2", "rays": [["2", "0"]], "cones": [["0"]], "weights": ["1"]}'
    code, _, err = run(capsys, monkeypatch, ["check", "balance"], stdin=bad)
    assert code == 1 and "NonPrimitiveRay" in err


def test_usage_errors_exit_two(capsys, monkeypatch):
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["check", "sideways"])
    assert info.value.code == 2


def test_examples_list_and_matroids(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["examples", "--list"])
    assert code == 0 and len(out.splitlines()) == len(corpus.EXAMPLES)
    path = tmp_path / "u24.matroid"
    path.write_text(tfan.dumps(tfan.matroid_to_doc(corpus.MATROIDS["u24"]())))
    code, out, _ = run(capsys, monkeypatch, ["bergman", "--matroid", str(path)])
    code2, out2, _ = run(capsys, monkeypatch, ["bergman", "--name", "u24"])
    assert code == code2 == 0 and out == out2


@pytest.mark.parametrize("name", list(corpus.EXAMPLES))
def test_every_bundled_example_parses(capsys, monkeypatch, name):
    code, out, _ = run(capsys, monkeypatch, ["examples", "--name", name])
    assert code == 0
    wf, fns, _ = tfan.read_fan(out)
    assert wf.weights == corpus.get(name).weighted().weights
    assert set(fns) == set(corpus.get(name).functions())
