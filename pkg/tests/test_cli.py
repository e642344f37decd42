import json
import os

import pytest

from bideform import builtin_example, emit_bialgebra, parse_deformation
from bideform.cli import main


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture()
def h4_file(tmp_path):
    return _write(tmp_path, "h4.bia", emit_bialgebra(builtin_example("taft", n=2, q=-1)))


@pytest.fixture()
def rp2_file(tmp_path):
    return _write(
        tmp_path, "rp2.bia", emit_bialgebra(builtin_example("restricted_poly", p=2))
    )


def test_example_then_verify(tmp_path, capsys):
    out = str(tmp_path / "t.bia")
    assert main(["example", "trivial", "--out", out]) == 0
    capsys.readouterr()
    assert main(["verify", out]) == 0


def test_example_with_params(tmp_path, capsys):
    out = str(tmp_path / "taft3.bia")
    assert main(["example", "taft", "--param", "n=3", "--param", "q=2", "--param", "p=7", "--out", out]) == 0
    capsys.readouterr()
    assert main(["verify", out]) == 0


def test_example_bad_params(tmp_path):
    out = str(tmp_path / "x.bia")
    assert main(["example", "taft", "--param", "n=3", "--param", "q=1", "--out", out]) == 2
    assert main(["example", "nosuch", "--out", out]) == 2


def test_verify_fails_on_parse_error(tmp_path):
    bad = _write(tmp_path, "bad.bia", "field rational\nbasis a 0\nbasis a 0\n")
    assert main(["verify", bad]) == 2


def test_cohomology_command(tmp_path, capsys):
    out = str(tmp_path / "t.bia")
    main(["example", "trivial", "--out", out])
    capsys.readouterr()
    assert main(["cohomology", out, "--n", "2", "--degree", "-1"]) == 2  # out of window
    capsys.readouterr()
    assert main(["cohomology", out, "--n", "2", "--degree", "0"]) == 0
    text = capsys.readouterr().out
    assert "dimension 0" in text
    assert "empty cochain spaces" in text


def test_cohomology_machine_output(rp2_file, capsys):
    assert main(["cohomology", rp2_file, "--n", "2", "--degree", "-1", "--representatives", "--machine"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["dimension"] == 1
    assert len(data["representatives"]) == 1


def test_machine_output_byte_identical(rp2_file, capsys):
    args = ["cohomology", rp2_file, "--n", "2", "--degree", "-1", "--representatives", "--machine"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second


def test_rigid_command(h4_file, capsys):
    assert main(["rigid", h4_file]) == 0
    out = capsys.readouterr().out
    assert "graded-rigid: yes" in out


def test_classify_roundtrip(rp2_file, tmp_path, capsys):
    outdir = str(tmp_path / "cls")
    assert main(["classify", rp2_file, "--out-dir", outdir, "--machine"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dimension"] == 1
    assert len(data["files"]) == 1
    for path in data["files"]:
        assert main(["deform", "verify", rp2_file, path]) == 0


def test_classify_rigid_case(h4_file, tmp_path, capsys):
    outdir = str(tmp_path / "cls")
    assert main(["classify", h4_file, "--out-dir", outdir, "--machine"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dimension"] == 0
    assert data["files"] == []


def test_deform_pipeline(rp2_file, tmp_path, capsys):
    outdir = str(tmp_path / "cls")
    main(["classify", rp2_file, "--out-dir", outdir, "--machine"])
    data = json.loads(capsys.readouterr().out)
    dpath = data["files"][0]

    assert main(["deform", "verify", rp2_file, dpath]) == 0
    capsys.readouterr()
    assert main(["deform", "oracle", rp2_file, dpath]) == 0
    capsys.readouterr()
    assert main(["deform", "obstruct", rp2_file, dpath]) == 0
    capsys.readouterr()
    ext = str(tmp_path / "ext.def")
    assert main(["deform", "extend", rp2_file, dpath, "--out", ext, "--all"]) == 0
    capsys.readouterr()
    B = builtin_example("restricted_poly", p=2)
    with open(ext) as fh:
        d = parse_deformation(B, fh.read())
    assert d.level == 2
    assert main(["deform", "verify", rp2_file, ext]) == 0
    capsys.readouterr()
    # the seeded class is nontrivial: trivialize reports it and exits 1
    assert main(["deform", "trivialize", rp2_file, dpath]) == 1
    out = capsys.readouterr().out
    assert "order 1" in out


def test_deform_trivialize_trivial(h4_file, tmp_path, capsys):
    dpath = _write(tmp_path, "t.def", "deformation level 2 over h4.bia\n")
    assert main(["deform", "trivialize", h4_file, dpath]) == 0
    out = capsys.readouterr().out
    assert "morphism level 2" in out


def test_deform_bad_file(h4_file, tmp_path):
    bad = _write(tmp_path, "bad.def", "deformation level 1 over x\nmul-correction order 2\n")
    assert main(["deform", "verify", h4_file, bad]) == 2


def test_lift_decompose_cli(rp2_file, tmp_path, capsys):
    # x^2 = x lifting of the truncated polynomial algebra over F_2
    B = builtin_example("restricted_poly", p=2)
    base = emit_bialgebra(B)
    tables = base + "mul x x x 1\n"
    tpath = _write(tmp_path, "tables.bia", tables)
    out = str(tmp_path / "lift.def")
    assert main(["lift", "decompose", rp2_file, tpath, "--out", out]) == 0
    capsys.readouterr()
    assert main(["deform", "verify", rp2_file, out]) == 0
    capsys.readouterr()
    # and this lifting is nontrivial at order 1
    assert main(["deform", "trivialize", rp2_file, out]) == 1


def test_lift_decompose_rejects_non_lifting(rp2_file, tmp_path):
    B = builtin_example("restricted_poly", p=2)
    tables = emit_bialgebra(B) + "mul 1 1 x 1\n"
    tpath = _write(tmp_path, "tables.bia", tables)
    assert main(["lift", "decompose", rp2_file, tpath]) == 2


def test_missing_file_is_exit_2(tmp_path):
    assert main(["verify", str(tmp_path / "nope.bia")]) == 2
