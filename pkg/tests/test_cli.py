from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from toricsod.cli import InputError, main, parse_input, parse_window


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_shipped(capsys):
    for name in ("p1", "p2", "p12", "p1xp1", "f1", "p12_bundle", "p112_f2", "p112_f2_bundle", "blowup_control"):
        code, out, _ = run(capsys, "validate", "--input", name)
        assert code == 0, name


def test_bad_input_pointer(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"kind": "space", "complex": {"n": 2, "max_faces": [[1], [5]]}}))
    code, _, err = run(capsys, "validate", "--input", str(f))
    assert code == 2 and "/complex/max_faces/1/0" in err


def test_invalid_json(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{")
    code, _, err = run(capsys, "validate", "--input", str(f))
    assert code == 2 and "invalid JSON" in err


def test_ext_command(capsys):
    code, out, _ = run(capsys, "ext", "--input", "p1", "--A", '{"a":[0,0]}', "--B", '{"a":[0,0]}', "--format", "machine")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert recs[0]["kind"] == "header"
    assert recs[-1]["table"] == {"0": 1}


def test_ext_bad_object(capsys):
    code, _, err = run(capsys, "ext", "--input", "p1", "--A", '{"a":[0]}', "--B", '{"a":[0,0]}')
    assert code == 2 and "--A" in err


def test_negative_window(capsys):
    code, out, _ = run(capsys, "sod-check", "--input", "p2", "--window", "0..1")
    assert code == 0
    code, out, _ = run(capsys, "sod-check", "--input", "p1", "--window", "-1..1")
    assert code == 1 and "FAIL" in out


def test_parse_window():
    assert parse_window("-1..1", 2) == [(-1, 1), (-1, 1)]
    assert parse_window("0..1,-2..0", 2) == [(0, 1), (-2, 0)]
    with pytest.raises(InputError):
        parse_window("0..1,0..1", 3)
    with pytest.raises(InputError):
        parse_window("a..b", 1)


def test_kind_checks(capsys):
    code, _, err = run(capsys, "bundle-check", "--input", "p1")
    assert code == 2
    code, _, err = run(capsys, "fm-check", "--input", "p1")
    assert code == 2


def test_parse_input_kinds():
    with pytest.raises(InputError) as exc:
        parse_input({"kind": "nonsense"})
    assert exc.value.pointer == "/kind"


def test_oracle_fraction_range(capsys):
    code, _, _ = run(capsys, "sod-check", "--input", "p1", "--window", "0..1", "--oracle-fraction", "2")
    assert code == 2


def test_fm_control_fails(capsys):
    code, out, _ = run(capsys, "fm-check", "--input", "blowup_control")
    assert code == 1 and "witness" in out


def test_report_determinism(tmp_path, capsys):
    paths = []
    for i, cdir in enumerate([None, tmp_path / "c", tmp_path / "c"]):
        rep = tmp_path / f"r{i}.jsonl"
        argv = ["sod-check", "--input", "p2", "--window", "-1..1", "--format", "machine", "--report", str(rep),
                "--oracle-fraction", "0.3", "--seed", "5"]
        if cdir:
            argv += ["--cache-dir", str(cdir)]
        main(argv)
        paths.append(rep.read_bytes())
    capsys.readouterr()
    assert paths[0] == paths[1] == paths[2]


def test_cache_gc_command(tmp_path, capsys):
    main(["sod-check", "--input", "p1", "--window", "0..1", "--cache-dir", str(tmp_path)])
    code, out, _ = run(capsys, "cache", "stats", "--cache-dir", str(tmp_path))
    assert code == 0 and int(out.split()[-1]) > 0
    code, out, _ = run(capsys, "cache", "gc", "--cache-dir", str(tmp_path))
    assert out.startswith("removed 0")


def test_pure_python_parity(tmp_path):
    outs = []
    for pure in ("", "1"):
        env = dict(os.environ)
        env.pop("TORICSOD_PURE", None)
        if pure:
            env["TORICSOD_PURE"] = pure
        r = subprocess.run([sys.executable, "-m", "toricsod.cli", "sod-check", "--input", "p2", "--window", "-1..1",
                            "--format", "machine"], capture_output=True, env=env, check=False)
        outs.append((r.returncode, r.stdout))
    assert outs[0] == outs[1]
