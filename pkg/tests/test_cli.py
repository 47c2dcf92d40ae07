import csv
import io
import json
import os

import pytest

from pbergman.cli import main, parse_region
from pbergman.config import RunConfig, parse_complex
from pbergman.domains import AnnularBand, Complement, SubDisc
from pbergman.errors import ConfigError
from pbergman.parallel import pmap, worker_count
from pbergman.reports import Report, format_value, to_csv


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_kernel_value(capsys):
    status, out, _ = run(capsys, "kernel", "--domain", "disc", "--p", "2", "--z", "0")
    assert status == 0
    (row,) = rows(out)
    assert float(row["value"]) == pytest.approx(0.3183098861837907, rel=1e-9)
    assert row["provenance"] == "solver" and row["converged"] == "true"
    assert out.endswith("\r\n")


def test_kernel_several_points(capsys):
    status, out, _ = run(capsys, "kernel", "--p", "1,3", "--z", "0,0.3,0.6i")
    assert status == 0
    table = rows(out)
    assert len(table) == 6
    assert [float(r["z_im"]) for r in table[:3]] == [0.0, 0.0, 0.6]


def test_puncture_asym_json(capsys):
    status, out, _ = run(capsys, "puncture-asym", "--p", "1", "--format", "json")
    assert status == 0
    doc = json.loads(out)
    assert doc["summary"]["fits"]["1"]["A"] == pytest.approx(0.15915, rel=1e-2)
    assert len(doc["config_hash"]) == 16


def test_empty_report_is_header_only():
    text = to_csv(Report("kernel", ["z_re", "value"], config_hash="abc"))
    assert text == "experiment,z_re,value,provenance,config_hash\r\n"


def test_report_rows_must_match_columns():
    r = Report("x", ["a"])
    with pytest.raises(ValueError):
        r.add("solver", b=1)


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value(float("inf")) == "inf"


def test_outputs_are_byte_identical(capsys, tmp_path):
    args = ["schwarz", "--region", "subdisc:0.5", "--p", "1.5", "--multistarts", "3", "--seed", "5"]
    for name in ("a", "b"):
        assert run(capsys, *args, "--out", str(tmp_path / name))[0] == 0
    for ext in ("csv", "json"):
        a = (tmp_path / "a" / f"schwarz.{ext}").read_bytes()
        b = (tmp_path / "b" / f"schwarz.{ext}").read_bytes()
        assert a == b


def test_json_carries_config_hash(capsys, tmp_path):
    run(capsys, "bm-bound", "--s", "0.5", "--p", "1,2", "--out", str(tmp_path))
    doc = json.loads((tmp_path / "bm-bound.json").read_text())
    cfg = RunConfig.build(None, {"params": {"s": 0.5, "p": ["1", "2"]}})
    assert doc["config_hash"] == cfg.hash
    table = rows((tmp_path / "bm-bound.csv").read_text())
    assert [float(r["bound"]) for r in table] == pytest.approx([2.0, 2**0.5])
    assert all(r["config_hash"] == cfg.hash for r in table)


def test_hash_ignores_output_settings():
    a = RunConfig.build(None, {"output": {"dir": "x"}})
    b = RunConfig.build(None, {"output": {"dir": "y", "format": "json"}})
    assert a.hash == b.hash
    assert a.hash != RunConfig.build(None, {"seed": 1}).hash


def test_config_file_and_flag_precedence(capsys, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"params": {"p": [2], "z": ["0.5"]}, "basis": {"N": 16}}))
    status, out, _ = run(capsys, "kernel", "--config", str(path), "--z", "0")
    assert status == 0
    (row,) = rows(out)
    assert float(row["z_re"]) == 0.0 and row["N"] == "16"


def test_unknown_key_rejected(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"basis": {"degree": 12}}))
    status, _, err = run(capsys, "kernel", "--config", str(path))
    assert status == 2
    assert json.loads(err)["error"] == "config"


@pytest.mark.parametrize(
    "update",
    [{"quad": {"n_r": 0}}, {"domain": {"kind": "square"}}, {"seed": -1}, {"params": {"z": ["abc"]}}, {"solver": {"tol": 0}}],
)
def test_invalid_values_rejected(update):
    with pytest.raises(ConfigError):
        RunConfig.build(update)


def test_computation_error_exit_code(capsys):
    status, out, err = run(capsys, "kernel", "--z", "1.5")
    assert status == 3 and out == ""
    assert json.loads(err)["error"] == "geometry"


def test_bm_bound_range_error(capsys):
    status, _, err = run(capsys, "bm-bound", "--s", "1.0", "--p", "2")
    assert status == 3


def test_parse_helpers():
    assert parse_complex("0.6i") == 0.6j
    assert parse_complex("-0.2+0.5i") == complex(-0.2, 0.5)
    assert parse_region("subdisc:0.4") == SubDisc(0.4)
    assert parse_region("band:0.2,0.6") == AnnularBand(0.2, 0.6)
    assert parse_region("complement:subdisc:0.5") == Complement(SubDisc(0.5))
    with pytest.raises(ConfigError):
        parse_region("square:1")


def test_oracle_command(capsys):
    status, out, _ = run(capsys, "oracle", "--oracle", "disc-diag", "--p", "3", "--z", "0.5")
    assert status == 0
    (row,) = rows(out)
    assert row["provenance"] == "oracle"


def _square(x):
    return x * x


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("PBERG_THREADS", "2")
    assert worker_count() == min(2, os.cpu_count() or 1)
    # an explicit worker count bypasses the CPU clamp and uses the process pool
    assert pmap(_square, [3, 1, 2, 5], workers=2) == [9, 1, 4, 25]
    monkeypatch.setenv("PBERG_THREADS", "zero")
    with pytest.raises(ConfigError):
        worker_count()
