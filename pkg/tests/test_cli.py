import json

import pytest

from treeweighted.cli import build_parser, main


def test_help_documents_formats(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    assert "regular:<k>:n=<n>" in out and "key,count" in out


def test_exit_codes(tmp_path, capsys):
    assert main(["verify-exact", "mix:2=3", "--out", str(tmp_path)]) == 0
    assert main(["tree-law", "mix:2=3", "--reps", "20", "--tolerance-tv", "0", "--out", str(tmp_path)]) == 1
    assert main(["simplicity", "regular:3:n=5", "--out", str(tmp_path)]) == 2
    assert main(["tree-law", "garbage", "--out", str(tmp_path)]) == 2
    assert main(["verify-exact", "regular:3:n=9", "--out", str(tmp_path)]) == 2  # too large
    err = capsys.readouterr().err
    assert "odd degree sum" in err


def test_json_output_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TWG_OUTPUT_DIR", str(tmp_path))
    assert main(["concentration", "regular:3:n=300", "--reps", "2", "--seed", "9", "--tolerance", "1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["seed"] == 9 and data["config"]["reps"] == 2
    assert (tmp_path / "concentration.json").exists()
    assert data["checks"][0]["name"] == "max_abs_error"


def test_identical_config_gives_identical_csv(tmp_path):
    args = ["tree-law", "mix:3=1,2=1,1=1", "--reps", "3000", "--seed", "4", "--streams", "3", "--tolerance-tv", "1"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "tree_histogram.csv").read_bytes()
    assert a == (tmp_path / "b" / "tree_histogram.csv").read_bytes()


def test_parser_flags():
    args = build_parser().parse_args(["crt", "regular:3:n=10", "--tolerance-ks", "0.1", "--compare", "regular:3:n=40"])
    assert args.tolerance_ks == 0.1 and args.compare == "regular:3:n=40"
