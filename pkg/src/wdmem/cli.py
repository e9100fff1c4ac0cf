"""Command-line front end: reproducible emulation, identification, validation,
frequency sweeps, and a constants self-check.

Exit codes: 0 success, 2 configuration/format errors, 3 numeric divergence,
4 identification errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

from . import presets
from .dbmd import DbmdNetwork, DbmdParameters
from .errors import (
    AnalysisError,
    ConfigurationError,
    FormatError,
    IdentificationError,
    NumericError,
    WdmemError,
)
from .identify import SampleTrace, identify_trace
from .models import (
    CharacteristicCurve,
    HpMemristor,
    HpParameters,
    MultilevelMemristor,
    MultilevelParameters,
    binary_switch_curve,
    continuous_curve,
    curve_model_from_characteristic,
)
from .scenario import (
    Excitation,
    area_report,
    hysteresis_area,
    loop_area,
    run_scenario,
)
from .wdf import FixedPointConfig

MODEL_NAMES = ("binary", "continuous", "hp", "multilevel", "dbmd", "curve-file")


def atomic_write(path, writer):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_config(path):
    """Flat `key = value` text config; '#' starts a comment."""
    if not os.path.exists(path):
        raise ConfigurationError(f"config file not found: {path}")
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            try:
                values[key] = float(val)
            except ValueError:
                values[key] = val
    return values


class _Settings:
    """Merged view of config-file values and CLI flags (flags win)."""

    def __init__(self, file_values, preset):
        self.file_values = file_values
        self.preset = preset

    def get(self, key, flag_value=None, default=None):
        if flag_value is not None:
            return flag_value
        if key in self.file_values:
            return self.file_values[key]
        if key in self.preset:
            return self.preset[key]
        return default


def _build_device_factory(name, cfg, sampling_period, fp_config):
    """Return (factory, drive_defaults) for a model selector."""
    preset = presets.ALL.get(name, {})
    amplitude = cfg.get("E_v")
    f1 = cfg.get("F1_hz")
    if name == "binary":
        g0 = cfg.get("G0_s")
        g1 = cfg.get("G1_s")
        span = cfg.get("span_wb", default=presets.sine_flux_amplitude(amplitude, f1))
        threshold = cfg.get("threshold_wb", default=0.5 * span)
        width = cfg.get("step_width_wb")
        curve = binary_switch_curve(g0, g1, threshold, span, width)
        phi0 = cfg.get("phi0_wb", default=0.0)
        return lambda: curve_model_from_characteristic(curve, phi0)
    if name == "continuous":
        g0 = cfg.get("G0_s")
        g1 = cfg.get("G1_s")
        span = cfg.get("span_wb", default=presets.sine_flux_amplitude(amplitude, f1))
        curve = continuous_curve(g0, g1, span)
        phi0 = cfg.get("phi0_wb", default=0.0)
        return lambda: curve_model_from_characteristic(curve, phi0)
    if name == "hp":
        params = HpParameters.from_initial_resistance(
            r0=cfg.get("R0_ohm"),
            r1=cfg.get("R1_ohm"),
            r_init=cfg.get("R_init_ohm"),
            kappa=cfg.get("kappa_per_C"),
            p=int(cfg.get("p")),
        )
        return lambda: HpMemristor(params)
    if name == "multilevel":
        params = MultilevelParameters(
            g1=cfg.get("G1_s"),
            g0=cfg.get("G0_s"),
            u0=cfg.get("U0_v"),
            n=int(cfg.get("n")),
        )
        z0 = cfg.get("z0", default=0.0)
        return lambda: MultilevelMemristor(params, z0)
    if name == "dbmd":
        params = DbmdParameters(
            z_rate=cfg.get("z_rate_hz"),
            u_e_ref=cfg.get("u_e_ref_v"),
            phi_a0=cfg.get("phi_a0"),
            phi_a1=cfg.get("phi_a1"),
            phi_ar=cfg.get("phi_ar"),
            w0=cfg.get("w0"),
            p=int(cfg.get("p")),
            u_c=cfg.get("u_c_v"),
            r_e0=cfg.get("r_e0_ohm"),
            r_e1=cfg.get("r_e1_ohm"),
            c_e=cfg.get("c_e_f"),
            phi_s0=cfg.get("phi_s0"),
            phi_s1=cfg.get("phi_s1"),
            alpha_s=cfg.get("alpha_s"),
            i_s=cfg.get("i_s_a"),
            n0=cfg.get("n0"),
            n1=cfg.get("n1"),
            alpha_f=cfg.get("alpha_f"),
            u_theta=cfg.get("u_theta_v"),
            phi_t0=cfg.get("phi_t0"),
            alpha_t0=cfg.get("alpha_t0"),
            alpha_t1=cfg.get("alpha_t1"),
            i_t=cfg.get("i_t_a"),
            c_t=cfg.get("c_t_f"),
            d_s=cfg.get("d_s_m", default=0.0),
        )
        z0 = cfg.get("z0", default=0.5)
        t0 = cfg.get("t0_s", default=0.0)
        return lambda: DbmdNetwork(
            params,
            sampling_period,
            config=fp_config,
            z0=z0,
            t0=t0,
            source_resistance=presets.SOURCE_RESISTANCE_OHM,
            schottky_port_ohms=cfg.get("R1_ohm"),
            electrolyte_port_ohms=cfg.get("R3_ohm"),
            tunnel_port_ohms=cfg.get("R7_ohm"),
        )
    raise ConfigurationError(f"unknown model {name!r}")


def _frequency_label(f):
    return ("%g" % f).replace(".", "p").replace("-", "m")


def _print_run_summary(name, freq, trace, period):
    areas = []
    n = int(round(period / trace.sampling_period))
    k = n + 1
    while k <= len(trace):
        areas.append(loop_area(trace.u[k - (n + 1) : k], trace.i[k - (n + 1) : k]))
        k += n
    final_z = ",".join(repr(v) for v in trace.final_state)
    print(f"model={name} freq_hz={freq!r} steps={len(trace)} final_z={final_z}")
    for idx, area in enumerate(areas, 1):
        print(f"  period {idx}: lobe_area_va={area!r}")


def _run_model(args):
    """Shared engine for `emulate` and `sweep`."""
    file_values = load_config(args.config) if args.config else {}
    name = args.model or file_values.get("model")
    if name not in MODEL_NAMES:
        raise ConfigurationError(f"model must be one of {MODEL_NAMES}, got {name!r}")
    preset = presets.ALL.get(name, presets.BINARY)
    cfg = _Settings(file_values, preset)

    sampling_period = cfg.get("T_s", args.sampling_period)
    n_i = int(cfg.get("n_i", args.iterations))
    tolerance = cfg.get("tolerance_v", args.tolerance)
    fp_config = FixedPointConfig(n_i=n_i, tolerance=tolerance)
    t0 = cfg.get("t0_s", args.t0, default=0.0)

    freqs = args.freq or [cfg.get("F1_hz")]
    amplitude = cfg.get("E_v", args.amplitude)
    neg_amplitude = cfg.get("E_neg_v", args.neg_amplitude)
    kind = cfg.get("waveform", args.waveform, default="triangular")

    if name == "curve-file":
        curve_path = cfg.get("curve_file", getattr(args, "curve", None))
        if not curve_path or not os.path.exists(str(curve_path)):
            raise ConfigurationError(f"curve file not found: {curve_path}")
        curve = CharacteristicCurve.from_csv(str(curve_path))
        phi0 = cfg.get("phi0_wb", default=0.0)
        factory = lambda: curve_model_from_characteristic(curve, phi0)
    else:
        factory = _build_device_factory(name, cfg, sampling_period, fp_config)

    out_dir = args.out_dir or "."
    results = {}
    for freq in freqs:
        exc = Excitation(
            kind=kind,
            amplitude=amplitude,
            frequency=freq,
            neg_amplitude=neg_amplitude,
        )
        t_stop = cfg.get("t_stop_s", args.t_stop, default=t0 + args.periods / freq)
        trace = run_scenario(
            factory(),
            exc,
            sampling_period,
            t_stop,
            config=fp_config,
            t0=t0,
            source_resistance=presets.SOURCE_RESISTANCE_OHM,
        )
        if args.out and len(freqs) == 1:
            path = args.out
        else:
            path = os.path.join(out_dir, f"trace_{name}_{_frequency_label(freq)}hz.csv")
        atomic_write(path, trace.to_csv)
        _print_run_summary(name, freq, trace, 1.0 / freq)
        print(f"  wrote {path}")
        results[freq] = (trace, hysteresis_area(trace, 1.0 / freq))
    return name, results, out_dir


def cmd_emulate(args):
    name, results, _ = _run_model(args)
    if len(results) > 1:
        areas = {f: area for f, (_, area) in results.items()}
        sys.stdout.write(area_report(areas))
    return 0


def cmd_sweep(args):
    if not args.freq or len(args.freq) < 2:
        raise ConfigurationError("sweep needs at least two --freq values")
    name, results, out_dir = _run_model(args)
    areas = {f: area for f, (_, area) in results.items()}
    report = area_report(areas)
    path = os.path.join(out_dir, f"areas_{name}.txt")
    atomic_write(path, lambda fh: fh.write(report))
    sys.stdout.write(report)
    print(f"wrote {path}")
    return 0


def cmd_identify(args):
    trace = SampleTrace.from_csv(args.input)
    curve = identify_trace(
        trace, sampling_period=args.sampling_period, difference=args.difference
    )
    atomic_write(args.out, lambda fh: _curve_to_file(curve, fh))
    lo, hi = curve.flux_range
    print(f"identified {len(curve)} knots, validity range [{lo!r}, {hi!r}] Wb")
    print(f"wrote {args.out}")
    return 0


def _curve_to_file(curve, fh):
    phi, g = curve.knots
    lo, hi = curve.flux_range
    fh.write(f"# validity_range_wb: {lo!r} {hi!r}\n")
    fh.write("flux_wb,memductance_s\n")
    for p, gg in zip(phi, g):
        fh.write(f"{float(p)!r},{float(gg)!r}\n")


def cmd_validate(args):
    curve = CharacteristicCurve.from_csv(args.curve)
    exc = Excitation(
        kind="triangular",
        amplitude=args.amplitude,
        frequency=args.freq,
        neg_amplitude=args.neg_amplitude,
    )
    # triangular flux amplitude is E/(4F); warn before leaving the identified range
    lo, hi = curve.flux_range
    excursion = args.phi0 + args.amplitude / (4.0 * args.freq)
    if excursion > hi or args.phi0 < lo:
        print(
            f"warning: drive flux excursion {excursion!r} Wb leaves the "
            f"identified range [{lo!r}, {hi!r}] Wb; end values will be held",
            file=sys.stderr,
        )
    model = curve_model_from_characteristic(curve, args.phi0)
    t_stop = args.t_stop if args.t_stop is not None else args.periods / args.freq
    trace = run_scenario(
        model,
        exc,
        args.sampling_period,
        t_stop,
        config=FixedPointConfig(n_i=args.iterations, tolerance=args.tolerance),
        source_resistance=presets.SOURCE_RESISTANCE_OHM,
    )
    atomic_write(args.out, trace.to_csv)
    _print_run_summary("curve-file", args.freq, trace, 1.0 / args.freq)
    print(f"wrote {args.out}")
    return 0


def cmd_selfcheck(args):
    """Diff the bundled defaults against the compiled-in table constants."""
    checks = []
    hp = HpParameters.from_initial_resistance(
        presets.HP["R0_ohm"],
        presets.HP["R1_ohm"],
        presets.HP["R_init_ohm"],
        presets.HP["kappa_per_C"],
        int(presets.HP["p"]),
    )
    checks.append(("hp", "R0_ohm", hp.r0, presets.HP["R0_ohm"]))
    checks.append(("hp", "R1_ohm", hp.r1, presets.HP["R1_ohm"]))
    checks.append(
        ("hp", "R_init_ohm", hp.resistance_of_state(hp.z0), presets.HP["R_init_ohm"])
    )
    checks.append(("hp", "kappa_per_C", hp.kappa, presets.HP["kappa_per_C"]))
    ml = MultilevelParameters(
        g1=presets.MULTILEVEL["G1_s"],
        g0=presets.MULTILEVEL["G0_s"],
        u0=presets.MULTILEVEL["U0_v"],
        n=int(presets.MULTILEVEL["n"]),
    )
    checks.append(("multilevel", "G1_s", ml.g1, presets.MULTILEVEL["G1_s"]))
    checks.append(("multilevel", "G0_s", ml.g0, presets.MULTILEVEL["G0_s"]))
    checks.append(("multilevel", "U0_v", ml.u0, presets.MULTILEVEL["U0_v"]))
    d = presets.DBMD
    params = DbmdParameters(
        z_rate=d["z_rate_hz"],
        u_e_ref=d["u_e_ref_v"],
        phi_a0=d["phi_a0"],
        phi_a1=d["phi_a1"],
        phi_ar=d["phi_ar"],
        w0=d["w0"],
        p=int(d["p"]),
        u_c=d["u_c_v"],
        r_e0=d["r_e0_ohm"],
        r_e1=d["r_e1_ohm"],
        c_e=d["c_e_f"],
        phi_s0=d["phi_s0"],
        phi_s1=d["phi_s1"],
        alpha_s=d["alpha_s"],
        i_s=d["i_s_a"],
        n0=d["n0"],
        n1=d["n1"],
        alpha_f=d["alpha_f"],
        u_theta=d["u_theta_v"],
        phi_t0=d["phi_t0"],
        alpha_t0=d["alpha_t0"],
        alpha_t1=d["alpha_t1"],
        i_t=d["i_t_a"],
        c_t=d["c_t_f"],
        d_s=d["d_s_m"],
    )
    net = DbmdNetwork(
        params,
        d["T_s"],
        z0=d["z0"],
        schottky_port_ohms=d["R1_ohm"],
        electrolyte_port_ohms=d["R3_ohm"],
        tunnel_port_ohms=d["R7_ohm"],
    )
    ports = net.port_resistances
    checks.append(("dbmd", "R1_ohm", ports["R1"], d["R1_ohm"]))
    checks.append(("dbmd", "R3_ohm", ports["R3"], d["R3_ohm"]))
    checks.append(("dbmd", "R7_ohm", ports["R7"], d["R7_ohm"]))
    checks.append(("dbmd", "R4_ohm", ports["R4"], d["T_s"] / (2.0 * d["c_e_f"])))
    checks.append(("dbmd", "R8_ohm", ports["R8"], d["T_s"] / (2.0 * d["c_t_f"])))
    checks.append(("dbmd", "u_e_ref_v", params.u_e_ref, d["u_e_ref_v"]))
    checks.append(("dbmd", "alpha_t0", params.alpha_t0, d["alpha_t0"]))
    checks.append(("binary", "G1_s", presets.BINARY["G1_s"], 3.0))
    checks.append(("binary", "G0_s", presets.BINARY["G0_s"], 100e-6))

    bad = 0
    for model, key, built, expected in checks:
        ok = math.isclose(built, expected, rel_tol=1e-12, abs_tol=0.0)
        status = "ok" if ok else "MISMATCH"
        print(f"{model:11s} {key:14s} default={built!r} expected={expected!r} {status}")
        bad += 0 if ok else 1
    if bad:
        print(f"{bad} mismatching constant(s)", file=sys.stderr)
        return 2
    print("all bundled defaults match the compiled-in constants")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wdmem",
        description="Wave-digital emulation of memristive devices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--model", choices=MODEL_NAMES)
        p.add_argument("--config", help="key = value parameter file")
        p.add_argument("--curve", help="characteristic CSV for --model curve-file")
        p.add_argument("--freq", action="append", type=float,
                       help="drive frequency in Hz (repeatable)")
        p.add_argument("--amplitude", type=float, help="drive amplitude in volts")
        p.add_argument("--neg-amplitude", dest="neg_amplitude", type=float,
                       help="negative amplitude for asymmetric drives")
        p.add_argument("--waveform", choices=("sine", "triangular"))
        p.add_argument("--sampling-period", dest="sampling_period", type=float)
        p.add_argument("--t0", type=float)
        p.add_argument("--t-stop", dest="t_stop", type=float)
        p.add_argument("--periods", type=float, default=2.0,
                       help="run length in drive periods when --t-stop is absent")
        p.add_argument("--iterations", type=int, help="fixed-point sweeps per instance")
        p.add_argument("--tolerance", type=float, help="early-exit residual, volts")
        p.add_argument("--out", help="trace output path (single-frequency runs)")
        p.add_argument("--out-dir", dest="out_dir", help="output directory")

    p_emulate = sub.add_parser("emulate", help="run a device and write a trace CSV")
    add_run_flags(p_emulate)
    p_emulate.set_defaults(func=cmd_emulate)

    p_sweep = sub.add_parser("sweep", help="run one device over several frequencies")
    add_run_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_ident = sub.add_parser("identify", help="turn a (t,u,i) trace into a curve")
    p_ident.add_argument("--input", required=True, help="trace CSV (t_s,u_v,i_a)")
    p_ident.add_argument("--out", required=True, help="characteristic CSV output")
    p_ident.add_argument("--sampling-period", dest="sampling_period", type=float,
                         help="resampling period for non-uniform traces")
    p_ident.add_argument("--difference", choices=("forward", "central"),
                         default="forward")
    p_ident.set_defaults(func=cmd_identify)

    p_val = sub.add_parser("validate", help="re-emulate an identified curve")
    p_val.add_argument("--curve", required=True)
    p_val.add_argument("--out", required=True)
    p_val.add_argument("--amplitude", type=float, default=presets.BINARY["E_v"])
    p_val.add_argument("--freq", type=float, default=presets.BINARY["F1_hz"])
    p_val.add_argument("--neg-amplitude", dest="neg_amplitude", type=float)
    p_val.add_argument("--phi0", type=float, default=0.0)
    p_val.add_argument("--sampling-period", dest="sampling_period", type=float,
                       default=presets.BINARY["T_s"])
    p_val.add_argument("--iterations", type=int, default=1)
    p_val.add_argument("--tolerance", type=float)
    p_val.add_argument("--t-stop", dest="t_stop", type=float)
    p_val.add_argument("--periods", type=float, default=2.0)
    p_val.set_defaults(func=cmd_validate)

    p_check = sub.add_parser("selfcheck", help="diff defaults against constants")
    p_check.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IdentificationError as err:
        print(f"identification error: {err}", file=sys.stderr)
        return 4
    except NumericError as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return 3
    except (FormatError, ConfigurationError, AnalysisError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except WdmemError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
