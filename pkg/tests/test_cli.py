import json

import numpy as np
import pytest

from otgs.cli import _threads, build_parser, main
from otgs.datasets import read_dataset
from otgs.errors import ValidationError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_synthetic_and_manifest(tmp_path, capsys):
    out = tmp_path / "s.ndjson"
    code, _, _ = run(capsys, "gen", "synthetic", "--nodes", "8", "--graphs", "20", "--seed", "7", "--out", str(out))
    assert code == 0
    data = read_dataset(out)
    assert data.m == 20 and data.n == 8
    manifest = json.loads((tmp_path / "s.ndjson.manifest.json").read_text())
    assert manifest["seed"] == 7
    again = tmp_path / "t.ndjson"
    run(capsys, "gen", "synthetic", "--nodes", "8", "--graphs", "20", "--seed", "7", "--out", str(again))
    assert out.read_bytes() == again.read_bytes()


def test_gen_gadgets(tmp_path, capsys):
    a = tmp_path / "m.ndjson"
    assert run(capsys, "gen", "gadget-monotone", "--n", "6", "--samples", "50", "--seed", "1", "--out", str(a))[0] == 0
    assert read_dataset(a).n == 6
    b = tmp_path / "c.ndjson"
    assert run(capsys, "gen", "gadget-clique", "--edges", "0-1,1-2,0-2", "--samples", "50", "--seed", "1",
               "--out", str(b))[0] == 0
    assert read_dataset(b).n == 3


def test_gen_grid(tmp_path, capsys):
    np.save(tmp_path / "img.npy", np.zeros((4, 3, 3)))
    np.save(tmp_path / "lab.npy", np.array([0, 1, 0, 1]))
    out = tmp_path / "g.ndjson"
    code, _, _ = run(capsys, "gen", "grid", "--images", str(tmp_path / "img.npy"), "--labels",
                     str(tmp_path / "lab.npy"), "--out", str(out))
    assert code == 0 and read_dataset(out).n == 9


def test_missing_seed_is_validation_error(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "synthetic", "--out", str(tmp_path / "x.ndjson"))
    assert code == 2 and "seed" in err


def test_bad_file_is_io_error(tmp_path, capsys):
    bad = tmp_path / "bad.ndjson"
    bad.write_text("{oops\n")
    assert run(capsys, "summarize", "--train", str(bad), "--out", str(tmp_path / "o"), "--kappa", "0.5")[0] == 4
    assert run(capsys, "mi", "--data", str(tmp_path / "missing.ndjson"), "--node", "0")[0] == 4


def test_summarize(tmp_path, capsys):
    data = tmp_path / "d.ndjson"
    run(capsys, "gen", "synthetic", "--nodes", "10", "--graphs", "40", "--seed", "1", "--out", str(data))
    out = tmp_path / "o.ndjson"
    assert run(capsys, "summarize", "--train", str(data), "--out", str(out), "--kappa", "1")[0] == 0
    assert (tmp_path / "o.ndjson.support").read_text().split() == [str(i) for i in range(10)]
    assert run(capsys, "summarize", "--train", str(data), "--out", str(out), "--kappa", "0.3",
               "--sensitivity-fraction", "0.5")[0] == 0
    assert len((tmp_path / "o.ndjson.support").read_text().split()) == 3
    assert read_dataset(out).n == 3
    per = tmp_path / "p.ndjson"
    code, text, _ = run(capsys, "summarize", "--train", str(data), "--out", str(per), "--kappa", "0.3",
                        "--method", "unsupervised")
    assert code == 0 and "no shared support" in text
    assert not (tmp_path / "p.ndjson.support").exists()
    assert run(capsys, "summarize", "--train", str(data), "--out", str(out), "--kappa", "1.5")[0] == 2


def test_oracle(capsys):
    base = "0-1,0-2,1-2,2-3,3-4,4-5"
    code, out, _ = run(capsys, "oracle", "--edges", base, "--k", "3", "--gamma", "0.7169172")
    assert code == 0
    assert "best subset: 0 1 2" in out and "0.7169172" in out and out.strip().endswith("1")
    _, out, _ = run(capsys, "oracle", "--edges", base, "--k", "3", "--gamma", "0.72")
    assert out.strip().endswith("0")
    _, out, _ = run(capsys, "oracle", "--n", "5", "--k", "2", "--gamma", "0.1")
    assert "0.0000000" in out and out.strip().endswith("0")
    assert run(capsys, "oracle", "--n", "40", "--k", "20")[0] == 2


def test_demo_monotonicity(capsys):
    code, out, _ = run(capsys, "demo-monotonicity", "--n", "10", "--const", "0.4")
    assert code == 0
    assert "0.1187091" in out and "violation: PASS" in out
    assert run(capsys, "demo-monotonicity", "--n", "3")[0] == 2


def test_evaluate(tmp_path, capsys):
    data = tmp_path / "d.ndjson"
    run(capsys, "gen", "synthetic", "--nodes", "8", "--graphs", "60", "--seed", "1", "--out", str(data))
    csv_path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "--threads", "2", "evaluate", "--train", str(data), "--kappas", "0.5",
                       "--methods", "supervised,random-subset,none", "--folds", "2", "--trials", "2", "--seed", "0",
                       "--csv", str(csv_path))
    assert code == 0 and "random-subset" in out
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "method,kappa,trial,fold,accuracy,compress_ms,classify_ms" and len(lines) == 13


def test_mi(tmp_path, capsys):
    data = tmp_path / "d.ndjson"
    run(capsys, "gen", "synthetic", "--nodes", "4", "--graphs", "200", "--seed", "1", "--out", str(data))
    code, out, _ = run(capsys, "mi", "--data", str(data), "--edge", "0-1")
    assert code == 0 and "KL" in out
    code, out, _ = run(capsys, "mi", "--data", str(data), "--node", "3", "--given", "1")
    assert code == 0 and "| X_1" in out


def test_threads_resolution(monkeypatch):
    parser = build_parser()
    monkeypatch.setenv("OTGS_THREADS", "3")
    assert _threads(parser.parse_args(["demo-monotonicity"])) == 3
    assert _threads(parser.parse_args(["--threads", "2", "demo-monotonicity"])) == 2
    monkeypatch.setenv("OTGS_THREADS", "many")
    with pytest.raises(ValidationError):
        _threads(parser.parse_args(["demo-monotonicity"]))
    monkeypatch.delenv("OTGS_THREADS")
    assert _threads(parser.parse_args(["demo-monotonicity"])) >= 1


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2
