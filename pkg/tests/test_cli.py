from __future__ import annotations

import json

import pytest

from affinefock.cli import main

SL2_HEIS = {
    "algebra": {"n": 1, "sigma": []},
    "module": {"kind": "heisenberg_fock", "level": "1", "lam": ["1"]},
    "engine": "general",
    "window": {"max_mode": 2, "max_degree": 2, "samples": 3},
    "seed": 2024,
    "output": "text",
}

SL2_CHAR = {
    "algebra": {"n": 1, "sigma": []},
    "module": {"kind": "character", "level": "0",
               "assignments": [{"element": "h1", "mode": 0, "value": "2"}]},
    "engine": "general",
    "window": {"max_mode": 2, "max_degree": 2, "samples": 3},
    "seed": 7,
    "output": "text",
}

SL3_EVAL = {
    "algebra": {"n": 2, "sigma": [2]},
    "module": {"kind": "evaluation", "level": "0", "rep": "block",
               "block": 1, "s": "1"},
    "engine": "general",
    "window": {"max_mode": 1, "max_degree": 2, "samples": 3},
    "seed": 11,
    "output": "text",
}


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


# --- act ---------------------------------------------------------------------------

def test_act_f_on_vacuum(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_CHAR)
    out = tmp_path / "state.json"
    rc = main(["act", "--config", cfg, "--generator", "f1", "--mode", "0",
               "--state", "vacuum", "--out", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["terms"] == [{"coeff": "-1", "monomial": [[0, 0, 1]], "v": 0}]


def test_act_central_scales(tmp_path):
    cfg = write_config(tmp_path, SL2_HEIS)
    s1 = tmp_path / "s1.json"
    s2 = tmp_path / "s2.json"
    main(["act", "--config", cfg, "--generator", "f1", "--mode", "2",
          "--state", "vacuum", "--out", str(s1)])
    rc = main(["act", "--config", cfg, "--generator", "c", "--mode", "0",
               "--state", str(s1), "--out", str(s2)])
    assert rc == 0
    assert json.loads(s2.read_text())["terms"][0]["coeff"] == "-1"  # level 1


def test_act_e_on_vacuum_is_zero(tmp_path):
    cfg = write_config(tmp_path, SL2_CHAR)
    out = tmp_path / "zero.json"
    rc = main(["act", "--config", cfg, "--generator", "e1", "--mode", "1",
               "--state", "vacuum", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["terms"] == []


def test_act_round_trip(tmp_path):
    cfg = write_config(tmp_path, SL2_HEIS)
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    main(["act", "--config", cfg, "--generator", "e1", "--mode", "-1",
          "--state", "vacuum", "--out", str(first)])
    # feeding the output back in must re-parse to an equal state: acting with
    # the central element at level 1 is the identity
    rc = main(["act", "--config", cfg, "--generator", "c", "--mode", "0",
               "--state", str(first), "--out", str(second)])
    assert rc == 0
    assert first.read_text() == second.read_text()


# --- exit codes ----------------------------------------------------------------------

def test_parse_error_bad_generator(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_CHAR)
    rc = main(["act", "--config", cfg, "--generator", "zz", "--mode", "0",
               "--state", "vacuum"])
    assert rc == 2


def test_parse_error_bad_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    rc = main(["act", "--config", str(path), "--generator", "f1",
               "--mode", "0", "--state", "vacuum"])
    assert rc == 2


def test_semantic_error_nonzero_level_character(tmp_path):
    cfg = dict(SL2_CHAR)
    cfg["module"] = {"kind": "character", "level": "1", "assignments": []}
    path = write_config(tmp_path, cfg)
    rc = main(["act", "--config", path, "--generator", "f1", "--mode", "0",
               "--state", "vacuum"])
    assert rc == 3


def test_semantic_error_explicit_engine_off_parabolic(tmp_path):
    cfg = {
        "algebra": {"n": 2, "sigma": []},
        "module": {"kind": "character", "level": "0", "assignments": []},
        "engine": "explicit",
        "window": {"max_mode": 1, "max_degree": 1, "samples": 1},
        "seed": 1,
    }
    path = write_config(tmp_path, cfg)
    rc = main(["act", "--config", path, "--generator", "f1", "--mode", "0",
               "--state", "vacuum"])
    assert rc == 3


# --- check-bracket ---------------------------------------------------------------------

def test_check_bracket_sl2_heisenberg(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_HEIS)
    rc = main(["check-bracket", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS 9 basis pairs x 25 mode pairs x 3 states" in out


def test_check_bracket_records(tmp_path, capsys):
    cfg = write_config(tmp_path, dict(SL2_CHAR, window={
        "max_mode": 1, "max_degree": 1, "samples": 2}))
    records = tmp_path / "records.jsonl"
    rc = main(["check-bracket", "--config", cfg, "--records", str(records)])
    assert rc == 0
    lines = records.read_text().strip().split("\n")
    assert len(lines) == 9 * 9 * 2
    assert all(json.loads(line)["status"] == "pass" for line in lines)


def test_check_bracket_record_stream_on_stdout(tmp_path, capsys):
    cfg = write_config(tmp_path, dict(SL2_CHAR, output="records", window={
        "max_mode": 1, "max_degree": 1, "samples": 1}))
    rc = main(["check-bracket", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    stream = [line for line in out.splitlines() if line.startswith("{")]
    assert len(stream) == 9 * 9
    assert json.loads(stream[0])["check"] == "bracket"


def test_check_bracket_flip_fails_with_witness(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_HEIS)
    rc = main(["check-bracket", "--config", cfg, "--flip", "e1:1:1"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL at" in out
    assert "witness:" in out


def test_check_bracket_sl3_evaluation(tmp_path, capsys):
    cfg = write_config(tmp_path, SL3_EVAL)
    rc = main(["check-bracket", "--config", cfg])
    assert rc == 0
    assert "PASS 64 basis pairs" in capsys.readouterr().out


def test_check_bracket_full_reference_window(tmp_path, capsys):
    cfg = write_config(tmp_path, dict(SL2_HEIS, window={
        "max_mode": 3, "max_degree": 3, "samples": 20}))
    rc = main(["check-bracket", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS 9 basis pairs x 49 mode pairs x 20 states" in out


# --- compare-engines ----------------------------------------------------------------------

def test_compare_engines_sl2(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_HEIS)
    rc = main(["compare-engines", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS all 3 generators agree" in out


def test_compare_engines_sl3(tmp_path, capsys):
    cfg = write_config(tmp_path, SL3_EVAL)
    rc = main(["compare-engines", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS all 8 generators agree" in out


def test_compare_engines_rejects_borel_sl3(tmp_path):
    cfg = {
        "algebra": {"n": 2, "sigma": []},
        "module": {"kind": "character", "level": "0", "assignments": []},
        "engine": "general",
        "window": {"max_mode": 1, "max_degree": 1, "samples": 1},
        "seed": 1,
    }
    rc = main(["compare-engines", "--config", write_config(tmp_path, cfg)])
    assert rc == 3


# --- dump -------------------------------------------------------------------------------

def test_dump_sl2_closed_form(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_CHAR)
    rc = main(["dump", "--config", cfg, "--generator", "h1", "--mode", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out == "1 * H1(0)\n2 * x(0,n0) * b(0, 0 + n0)\n"


# --- weights -------------------------------------------------------------------------------

def test_weights_sl2_window_one(tmp_path, capsys):
    cfg = write_config(tmp_path, dict(SL2_CHAR, window={
        "max_mode": 1, "max_degree": 2, "samples": 1}))
    rc = main(["weights", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "degree=0 mode=0 weight=(2) count=1" in out
    # three variables at degree 1, all at weight lam - 2 = 0
    for mode in (-1, 0, 1):
        assert f"degree=1 mode={mode} weight=(0) count=1" in out
    # six multisets of size two from three variables
    deg2 = [line for line in out.splitlines() if line.startswith("degree=2")]
    assert sum(int(line.split("count=")[1]) for line in deg2) == 6


def test_weights_documents_truncation(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_CHAR)
    main(["weights", "--config", cfg])
    assert "infinite-dimensional" in capsys.readouterr().out


# --- delta selftest ---------------------------------------------------------------------------

def test_delta_selftest(capsys):
    rc = main(["delta-selftest"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("PASS") == 6
    assert "FAIL" not in out


# --- determinism -------------------------------------------------------------------------------

def test_reports_are_byte_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, SL2_HEIS)
    main(["check-bracket", "--config", cfg])
    first = capsys.readouterr().out
    main(["check-bracket", "--config", cfg])
    second = capsys.readouterr().out
    assert first == second


def test_state_files_byte_identical(tmp_path):
    cfg = write_config(tmp_path, SL2_HEIS)
    outs = []
    for name in ("x.json", "y.json"):
        out = tmp_path / name
        main(["act", "--config", cfg, "--generator", "e1", "--mode", "-2",
              "--state", "vacuum", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
