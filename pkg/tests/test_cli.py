import os

import numpy as np
import pytest

from wdmem import Trace, presets
from wdmem.cli import load_config, main
from wdmem.models import CharacteristicCurve


def run_cli(*argv):
    return main(list(argv))


def test_selfcheck(capsys):
    assert run_cli("selfcheck") == 0
    out = capsys.readouterr().out
    assert "all bundled defaults match" in out
    assert "R4_ohm" in out


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nG1_s = 3.0\nn = 10  # levels\nmodel = multilevel\n")
    cfg = load_config(path)
    assert cfg["G1_s"] == 3.0
    assert cfg["n"] == 10.0
    assert cfg["model"] == "multilevel"


def test_missing_config_exits_2(tmp_path, capsys):
    out_dir = tmp_path / "runs"
    code = run_cli(
        "emulate", "--model", "hp", "--config", str(tmp_path / "nope.cfg"),
        "--out-dir", str(out_dir),
    )
    assert code == 2
    assert not out_dir.exists() or not os.listdir(out_dir)


def test_emulate_multilevel_two_frequencies(tmp_path, capsys):
    out_dir = tmp_path / "runs"
    code = run_cli(
        "emulate", "--model", "multilevel",
        "--freq", "1", "--freq", "2",
        "--out-dir", str(out_dir),
    )
    assert code == 0
    files = sorted(os.listdir(out_dir))
    assert files == ["trace_multilevel_1hz.csv", "trace_multilevel_2hz.csv"]
    out = capsys.readouterr().out
    assert "lobe_area_va" in out
    # the frequency -> area summary shows the area shrinking at 2 Hz
    lines = [ln for ln in out.splitlines() if "->" in ln and "frequency" not in ln]
    areas = [float(ln.split("->")[1]) for ln in lines]
    assert areas[0] > areas[1]


def test_emulate_determinism(tmp_path):
    args = [
        "emulate", "--model", "binary", "--freq", "1",
        "--periods", "1",
    ]
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert run_cli(*args, "--out", str(out_a)) == 0
    assert run_cli(*args, "--out", str(out_b)) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_identify_and_validate_flow(tmp_path, capsys):
    trace_path = tmp_path / "trace.csv"
    curve_path = tmp_path / "curve.csv"
    val_path = tmp_path / "validated.csv"

    # generate identification data, identify, then validate the curve
    code = run_cli(
        "emulate", "--model", "binary", "--freq", "1", "--waveform", "sine",
        "--periods", "1", "--out", str(trace_path),
    )
    assert code == 0
    trace = Trace.from_csv(trace_path)
    ident_input = tmp_path / "ident_input.csv"
    with open(ident_input, "w") as fh:
        fh.write("t_s,u_v,i_a\n")
        for t, u, i in zip(trace.t, trace.u, trace.i):
            fh.write(f"{float(t)!r},{float(u)!r},{float(i)!r}\n")

    code = run_cli("identify", "--input", str(ident_input), "--out", str(curve_path))
    assert code == 0
    text = curve_path.read_text()
    assert text.startswith("# validity_range_wb:")
    curve = CharacteristicCurve.from_csv(curve_path)
    assert len(curve) > 10

    code = run_cli(
        "validate", "--curve", str(curve_path), "--amplitude", "5", "--freq", "1",
        "--periods", "1", "--out", str(val_path),
    )
    assert code == 0
    assert val_path.exists()


def test_identify_too_few_samples_exits_4(tmp_path, capsys):
    path = tmp_path / "small.csv"
    path.write_text("t_s,u_v,i_a\n0.0,0.0,0.0\n0.001,1.0,1.0\n")
    code = run_cli("identify", "--input", str(path), "--out", str(tmp_path / "c.csv"))
    assert code == 4


def test_identify_bad_header_exits_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,volt,amp\n0,0,0\n1,1,1\n2,2,2\n")
    code = run_cli("identify", "--input", str(path), "--out", str(tmp_path / "c.csv"))
    assert code == 2


def test_validate_warns_outside_range(tmp_path, capsys):
    curve_path = tmp_path / "curve.csv"
    CharacteristicCurve([0.0, 0.5], [1e-4, 3.0]).to_csv(curve_path)
    code = run_cli(
        "validate", "--curve", str(curve_path), "--amplitude", "5", "--freq", "1",
        "--periods", "1", "--out", str(tmp_path / "v.csv"),
    )
    assert code == 0
    err = capsys.readouterr().err
    assert "leaves the identified range" in err


def test_sweep_writes_report(tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    code = run_cli(
        "sweep", "--model", "hp", "--freq", "1", "--freq", "1.5",
        "--out-dir", str(out_dir),
    )
    assert code == 0
    report = (out_dir / "areas_hp.txt").read_text()
    assert report.startswith("frequency_hz -> lobe_area_va")
    lines = report.strip().splitlines()[1:]
    areas = {float(ln.split("->")[0]): float(ln.split("->")[1]) for ln in lines}
    assert areas[1.0] > areas[1.5]


def test_sweep_needs_two_frequencies(tmp_path):
    code = run_cli("sweep", "--model", "hp", "--freq", "1", "--out-dir", str(tmp_path))
    assert code == 2


def test_emulate_dbmd_defaults(tmp_path, capsys):
    out = tmp_path / "dbmd.csv"
    code = run_cli(
        "emulate", "--model", "dbmd", "--freq", "1", "--periods", "2",
        "--out", str(out),
    )
    assert code == 0
    trace = Trace.from_csv(out)
    # Table defaults: 10 ms sampling grid, asymmetric 3 / -2 V drive
    assert trace.sampling_period == presets.DBMD["T_s"]
    assert np.max(trace.e) == pytest.approx(3.0, rel=1e-9)
    assert np.min(trace.e) == pytest.approx(-2.0, rel=1e-9)
    assert trace.u_splits is not None


def test_config_override(tmp_path):
    cfg = tmp_path / "hp.cfg"
    cfg.write_text("R_init_ohm = 8000\n")
    out = tmp_path / "hp.csv"
    code = run_cli(
        "emulate", "--model", "hp", "--config", str(cfg), "--freq", "1",
        "--periods", "1", "--out", str(out),
    )
    assert code == 0
    trace = Trace.from_csv(out)
    # initial memductance reflects the overridden initial resistance
    assert trace.g_hat[0] == pytest.approx(1.0 / 8000.0, rel=1e-6)
