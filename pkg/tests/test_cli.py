import json
import subprocess
import sys

import pytest

from coarse.cli import main


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    paths = {
        "rays": root / "rays.json",
        "lat": root / "lat.json",
        "lf": root / "lf.json",
        "strips": root / "strips.json",
    }
    assert main(["gen", "exp-rays", "--n-max", "6", "--height", "64", "--step", "1", "-o", str(paths["rays"])]) == 0
    assert main(["gen", "lattice", "--dim", "2", "--side", "10", "--out", str(paths["lat"])]) == 0
    assert main(["gen", "lf-group", "--n-terms", "6", "--out", str(paths["lf"])]) == 0
    assert main(["gen", "exp-strips", "--n-max", "4", "--out", str(paths["strips"])]) == 0
    bad = root / "bad.csv"
    bad.write_text("0,1\n2,0\n")
    paths["bad"] = bad
    junk = root / "junk.json"
    junk.write_text("[1, 2")
    paths["junk"] = junk
    paths["root"] = root
    return paths


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


CUT = ["--a", "A", "--b", "B", "--c", "C", "--r", 3, "--s", 7, "--window", 32, "--gap", 8, "--basepoint", 0]

MATRIX = [
    (["cut", "verify", "{rays}", *CUT], 0),
    (["cut", "verify", "{rays}", "--a", "A", "--b", "B", "--c", "", "--r", 3, "--s", 1], 1),
    (["cut", "find", "{lat}", "--a", "FACE_LO_0", "--b", "FACE_HI_0", "--r", 1.5], 0),
    (["cut", "find", "{lat}", "--a", "0", "--b", "1", "--r", 1.5], 2),
    (["convexity", "{lat}", "--r", 2], 0),
    (["convexity", "{rays}", "--r", 3], 1),
    (["components", "{rays}", "--r", 3], 0),
    (["metric", "{lat}", "--x", 0, "--y", 99, "--r", 1.5], 0),
    (["metric", "{rays}", "--x", 0, "--y", 200, "--r", 1.5], 1),
    (["metric", "{lat}", "--x", 0, "--y", 999, "--r", 1.5], 2),
    (["sep", "construct", "{rays}", *CUT], 0),
    (["sep", "verify", "{rays}", *CUT], 1),
    (["sep", "verify", "{rays}", *CUT, "--method", "zero"], 1),
    (["dim", "asdim", "{lf}", "--r", 1.5, "--D", 4], 0),
    (["dim", "asdg", "{strips}", "--a", "TOP", "--b", "BOTTOM", "--r", 1.5, "--s", 1, "--window", 8, "--gap", 3], 0),
    (["dim", "lsind", "{lat}", "--a", "FACE_LO_0", "--b", "FACE_HI_0", "--r", 2, "--s", 1, "--m", 2,
      "--basepoint", 55, "--window", 5, "--gap", 2], 0),
    (["dim", "asdg", "{lat}", "--a", "FACE_LO_0", "--r", 2], 2),
    (["profile", "gap", "{rays}", "--a", "A", "--b", "B", "--radii", "0,4,16"], 0),
    (["profile", "growth", "{strips}", "--x", 0, "--radii", "1.5,3"], 0),
    (["profile", "growth", "{strips}", "--x", 0, "--radii", "3,1.5"], 2),
    (["check", "axioms", "{lat}", "--cases", 10], 0),
    (["metric", "{bad}", "--x", 0, "--y", 1, "--r", 2], 2),
    (["metric", "{bad}", "--x", 0, "--y", 1, "--r", 2, "--allow-invalid"], 0),
    (["metric", "{junk}", "--x", 0, "--y", 1, "--r", 2], 2),
    (["cut", "verify", "{rays}", "--a", "NOPE", "--b", "B", "--c", "C", "--r", 3], 2),
    (["convexity", "{rays}"], 2),
    (["frobnicate"], 2),
]


def exit_code(argv) -> int:
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


@pytest.mark.parametrize("argv,expected", MATRIX, ids=lambda v: " ".join(map(str, v)) if isinstance(v, list) else str(v))
def test_exit_codes(files, capsys, argv, expected):
    argv = [str(a).format(**files) for a in argv]
    code = exit_code(argv)
    captured = capsys.readouterr()
    assert code == expected
    if expected == 2:
        assert captured.out == "" and captured.err
        return
    report = json.loads(captured.out)
    assert report["payload"]["pass"] is (expected == 0)
    assert set(report) == {"manifest", "payload", "payload_sha256"}


def test_usage_errors_exit_two(capsys):
    for argv in (["frobnicate"], ["convexity", "x.json"], ["dim"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2


def test_reports_are_reproducible(files, capsys):
    argv = ["cut", "verify", str(files["rays"]), *map(str, CUT)]
    _, first = run(argv, capsys)
    _, second = run(argv, capsys)
    assert first["payload_sha256"] == second["payload_sha256"]
    assert first["manifest"]["inputs"] == second["manifest"]["inputs"]
    assert first["manifest"]["params"]["window_R"] == 32


def test_out_file_and_csv(files, capsys):
    out = files["root"] / "report.json"
    csv = files["root"] / "gap.csv"
    code = main(["profile", "gap", str(files["rays"]), "--a", "A", "--b", "B", "--radii", "0,4,16,70",
                 "--csv", str(csv), "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    report = json.loads(out.read_text())
    assert report["payload"]["rows"][-1] == [70.0, "inf"]
    assert csv.read_text().splitlines()[-1] == "70.0,inf"


def test_check_props_small(capsys):
    code, report = run(["check", "props", "--cases", "20", "--seed", "1"], capsys)
    assert code == 0
    assert all(c["passed"] for c in report["payload"]["campaigns"])


def test_documented_commands(tmp_path):
    exe = [sys.executable, "-m", "coarse"]
    rays = tmp_path / "rays.json"
    gen = subprocess.run(exe + ["gen", "exp-rays", "--n-max", "10", "--height", "1024", "--step", "1", "-o", str(rays)])
    assert gen.returncode == 0 and rays.exists()
    cut = subprocess.run(
        exe + ["cut", "verify", str(rays), "--a", "A", "--b", "B", "--c", "C", "--r", "3", "--s", "7",
               "--window", "512", "--gap", "8"],
        capture_output=True, text=True,
    )
    assert cut.returncode == 0
    assert json.loads(cut.stdout)["payload"]["pass"] is True
    conv = subprocess.run(exe + ["convexity", str(rays), "--r", "3", "--max-listed", "5"], capture_output=True, text=True)
    assert conv.returncode == 1
    assert json.loads(conv.stdout)["payload"]["violations"]
