import json

import pytest

from nilfourier.cli import run


def run_text(argv, capsys):
    code = run(argv)
    return code, capsys.readouterr()


def data_rows(text):
    return [line.split(",") for line in text.splitlines() if line and not line.startswith("#")]


def test_kernel_j0(capsys):
    code, out = run_text(["kernel", "--a", "1", "--b", "0", "--eta", "0", "--x", "0", "--y", "1"], capsys)
    assert code == 0
    header, row = data_rows(out.out)
    assert float(row[header.index("value_re")]) == pytest.approx(0.7651977, abs=1e-7)


def test_identity_suite(capsys):
    code, out = run_text(["identity-suite", "--group", "heisenberg:1"], capsys)
    assert code == 0
    rows = data_rows(out.out)[1:]
    assert len(rows) >= 8 and all(r[-1] == "true" for r in rows)


def test_spec_validate(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 2, "p": 1, "matrices": [[0, 1], [1, 0]]}))
    code, out = run_text(["spec", "validate", str(bad)], capsys)
    assert code == 2 and "antisymmetric" in out.err
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"builtin": "example-4x2"}))
    assert run_text(["spec", "validate", str(good)], capsys)[0] == 0
    assert run_text(["spec", "validate", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_bad_flags(capsys):
    assert run(["kernel", "--a", "one", "--eta", "0"]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["spectral", "--group", "nowhere.json", "--lambda", "1"]) == 2
    capsys.readouterr()


def test_spectral_row(capsys):
    code, out = run_text(["spectral", "--group", "example-4x2", "--lambda", "1,1"], capsys)
    header, row = data_rows(out.out)
    assert code == 0
    assert float(row[header.index("eta_1")]) == pytest.approx(2.0)
    assert float(row[header.index("eta_2")]) == pytest.approx(0.0, abs=1e-12)
    assert row[header.index("rank")] == "2"


def test_measure_and_hermite(capsys):
    code, out = run_text(["measure", "--eta", "1", "--b", "0"], capsys)
    header, row = data_rows(out.out)
    assert code == 0 and float(row[header.index("value")]) == pytest.approx(2.3130352854993313)
    assert run_text(["hermite", "check", "--n", "32"], capsys)[0] == 0
    code, out = run_text(["hermite", "eval", "--n", "3", "--x", "0.7"], capsys)
    assert float(data_rows(out.out)[1][2]) == pytest.approx(-0.47995350309611403362)


def test_transform_row(capsys):
    code, out = run_text(["transform", "--group", "heisenberg:1", "--lambda", "1"], capsys)
    header, row = data_rows(out.out)
    assert code == 0 and float(row[header.index("value_re")]) == pytest.approx(9.55262131059567, rel=1e-10)


def test_output_file_and_metadata(tmp_path, capsys):
    path = tmp_path / "k.csv"
    assert run(["--out", str(path), "kernel", "--a", "2", "--b", "1", "--eta", "0", "--x", "0.5"]) == 0
    text = path.read_text()
    assert text.startswith("# nilfourier") and "# seed: 0" in text
    assert capsys.readouterr().out == ""


def test_repeatable_output(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.csv"
        run(["--out", str(path), "identity-suite", "--group", "example-4x2"])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
