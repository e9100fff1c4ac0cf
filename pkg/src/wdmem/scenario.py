"""Excitation generators, the source-device emulation loop, trace capture,
trace CSV round-trip, and hysteresis-loop area analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import AnalysisError, ConfigurationError, FormatError, NumericError
from .wdf import (
    FixedPointConfig,
    MemristivePort,
    WaveIntegrator,
    checked_memductance,
    resistive_source_wave,
)

DEFAULT_SOURCE_RESISTANCE = 0.1  # ohms

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Excitation:
    """Periodic drive: sine or triangular, optionally with asymmetric negative
    excursions (negative half-cycles rescaled to |neg_amplitude|)."""

    kind: str
    amplitude: float
    frequency: float
    neg_amplitude: float | None = None

    def __post_init__(self):
        if self.kind not in ("sine", "triangular"):
            raise ConfigurationError(f"unknown excitation kind {self.kind!r}")
        if self.amplitude <= 0.0:
            raise ConfigurationError("amplitude must be positive")
        if self.frequency <= 0.0:
            raise ConfigurationError("frequency must be positive")
        if self.neg_amplitude is not None and self.neg_amplitude >= 0.0:
            raise ConfigurationError("neg_amplitude must be negative when given")

    def sample(self, t):
        if self.kind == "sine":
            return sine_sample(self, t)
        return triangular_sample(self, t)

    def samples(self, t):
        """Vectorized evaluation on an array of instants."""
        t = np.asarray(t, dtype=float)
        x = np.sin(_TWO_PI * self.frequency * t)
        if self.kind == "sine":
            v = self.amplitude * x
        else:
            v = (2.0 * self.amplitude / math.pi) * np.arcsin(x)
        if self.neg_amplitude is not None:
            scale = -self.neg_amplitude / self.amplitude
            v = np.where(v < 0.0, v * scale, v)
        return v

    @property
    def period(self):
        return 1.0 / self.frequency

    def with_frequency(self, frequency):
        return replace(self, frequency=frequency)


def _rescale_negative(exc, v):
    if exc.neg_amplitude is not None and v < 0.0:
        return v * (-exc.neg_amplitude / exc.amplitude)
    return v


def sine_sample(exc, t):
    """e(t) = E sin(2 pi F t), negative excursions rescaled if asymmetric."""
    v = exc.amplitude * math.sin(_TWO_PI * exc.frequency * t)
    return _rescale_negative(exc, v)


def triangular_sample(exc, t):
    """e(t) = (2E/pi) arcsin(sin(2 pi F t)), same period/amplitude as the sine."""
    v = (2.0 * exc.amplitude / math.pi) * math.asin(
        math.sin(_TWO_PI * exc.frequency * t)
    )
    return _rescale_negative(exc, v)


@dataclass
class TraceRecord:
    """One emitted instance: grid time, source EMF, terminal voltage/current,
    internal state vector, effective memductance, optional voltage split."""

    t: float
    e: float
    u: float
    i: float
    z: tuple
    g_hat: float
    u_splits: tuple | None = None


class Trace:
    """Column view of a finished run."""

    def __init__(self, t, e, u, i, z, g_hat, u_splits=None):
        self.t = np.asarray(t, dtype=float)
        self.e = np.asarray(e, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.i = np.asarray(i, dtype=float)
        self.z = np.atleast_2d(np.asarray(z, dtype=float))
        if self.z.shape[0] != self.t.size:
            self.z = self.z.T
        self.g_hat = np.asarray(g_hat, dtype=float)
        self.u_splits = None if u_splits is None else np.asarray(u_splits, float)

    @classmethod
    def from_records(cls, records):
        if not records:
            raise AnalysisError("empty trace")
        splits = None
        if records[0].u_splits is not None:
            splits = [r.u_splits for r in records]
        return cls(
            [r.t for r in records],
            [r.e for r in records],
            [r.u for r in records],
            [r.i for r in records],
            [r.z for r in records],
            [r.g_hat for r in records],
            splits,
        )

    def __len__(self):
        return self.t.size

    @property
    def sampling_period(self):
        dt = np.diff(self.t)
        if dt.size == 0:
            raise AnalysisError("trace has a single sample")
        return float(dt[0])

    @property
    def final_state(self):
        return tuple(float(v) for v in self.z[-1])

    def header(self):
        n_state = self.z.shape[1]
        zcols = "z" if n_state == 1 else ",".join(f"z{k}" for k in range(n_state))
        head = f"t_s,e_v,u_v,i_a,{zcols},G_s"
        if self.u_splits is not None:
            head += ",u_s_v,u_e_v,u_t_v"
        return head

    def to_csv(self, path_or_file):
        lines = [self.header()]
        for k in range(len(self)):
            cells = [self.t[k], self.e[k], self.u[k], self.i[k]]
            cells.extend(self.z[k])
            cells.append(self.g_hat[k])
            if self.u_splits is not None:
                cells.extend(self.u_splits[k])
            lines.append(",".join(repr(float(c)) for c in cells))
        text = "\n".join(lines) + "\n"
        if hasattr(path_or_file, "write"):
            path_or_file.write(text)
        else:
            with open(path_or_file, "w") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        if not rows:
            raise FormatError(f"empty trace file {path}")
        head = rows[0].replace(" ", "").split(",")
        if head[:4] != ["t_s", "e_v", "u_v", "i_a"] or "G_s" not in head:
            raise FormatError(f"unexpected trace header in {path}")
        g_idx = head.index("G_s")
        has_splits = head[g_idx + 1 :] == ["u_s_v", "u_e_v", "u_t_v"]
        data = np.asarray(
            [[float(x) for x in ln.split(",")] for ln in rows[1:]], dtype=float
        )
        if data.ndim != 2 or data.shape[1] != len(head):
            raise FormatError(f"ragged trace rows in {path}")
        z = data[:, 4:g_idx]
        splits = data[:, g_idx + 1 : g_idx + 4] if has_splits else None
        return cls(
            data[:, 0], data[:, 1], data[:, 2], data[:, 3], z, data[:, g_idx], splits
        )


def run_scenario(
    device,
    excitation,
    sampling_period,
    t_stop,
    config=None,
    t0=0.0,
    source_resistance=DEFAULT_SOURCE_RESISTANCE,
):
    """Step the resistive-source / device loop over the grid t_k = t0 + k T.

    `device` is either a memristive model (run through a matched-source wave
    port) or a network with its own step(e) method (e.g. the double-barrier
    device); the current is read from the device port waves.

    source_resistance = 0 applies the excitation directly across the device
    (ideal source), the configuration used to generate identification data,
    where the device flux equals the drive flux exactly.
    """
    if sampling_period <= 0.0:
        raise ConfigurationError("sampling period must be positive")
    if t_stop <= t0:
        raise ConfigurationError("t_stop must exceed t0")
    n_steps = int(math.floor((t_stop - t0) / sampling_period * (1.0 + 1e-12))) + 1

    records = []
    if hasattr(device, "step") and hasattr(device, "sampling_period"):
        if not math.isclose(device.sampling_period, sampling_period, rel_tol=1e-12):
            raise ConfigurationError("network sampling period does not match run")
        for _ in range(n_steps):
            t = device.time
            e = excitation.sample(t)
            records.append(device.step(e))
        return Trace.from_records(records)

    if source_resistance == 0.0:
        return _run_ideal_source(
            device, excitation, sampling_period, n_steps, config, t0
        )
    port = MemristivePort(device, source_resistance, sampling_period, config)
    inv_2r = 1.0 / (2.0 * source_resistance)
    for k in range(n_steps):
        t = t0 + k * sampling_period
        e = excitation.sample(t)
        a = resistive_source_wave(e, source_resistance)
        try:
            b = port.step(a)
        except NumericError as err:
            raise NumericError(str(err), t=t) from err
        z = port.last_state
        records.append(
            TraceRecord(
                t=t,
                e=e,
                u=0.5 * (a + b),
                i=(a - b) * inv_2r,
                z=z if isinstance(z, tuple) else (float(z),),
                g_hat=port.last_memductance,
            )
        )
    return Trace.from_records(records)


def _run_ideal_source(model, excitation, sampling_period, n_steps, config, t0):
    """Step the device with its terminal voltage forced to the excitation."""
    cfg = config if config is not None else FixedPointConfig()
    integrator = WaveIntegrator(model.initial_state, sampling_period)
    clamp = getattr(model, "clamp_state", None)
    last_f = 0.0
    records = []
    for k in range(n_steps):
        t = t0 + k * sampling_period
        u = excitation.sample(t)
        z_est = integrator.state(last_f)
        if clamp is not None:
            z_est = clamp(z_est)
        f_val = last_f
        for _ in range(cfg.n_i):
            f_val = model.state_derivative(z_est, u)
            z_est = integrator.state(f_val)
            if clamp is not None:
                z_est = clamp(z_est)
        g = checked_memductance(model.memductance(z_est, u))
        integrator.commit(f_val)
        if clamp is not None:
            integrator.stored_wave = clamp(integrator.stored_wave)
        last_f = f_val
        records.append(
            TraceRecord(
                t=t,
                e=u,
                u=u,
                i=g * u,
                z=z_est if isinstance(z_est, tuple) else (float(z_est),),
                g_hat=g,
            )
        )
    return Trace.from_records(records)


# ---------------------------------------------------------------------------
# hysteresis-loop analysis


def loop_area(u, i):
    """Total unsigned lobe area of the closed (u, i) loop.

    The loop is swept in voltage strips between its direction reversals; each
    strip's enclosed gaps are weighted by the absolute winding number, so the
    sub-lobes of a pinched (figure-eight) loop add up instead of cancelling as
    they would in the plain signed shoelace integral.  Exact for polygons.
    """
    u = np.asarray(u, dtype=float)
    i = np.asarray(i, dtype=float)
    n = u.size
    if n < 4:
        raise AnalysisError("need at least four samples for a loop")
    # closed polygon segments; vertical segments carry no voltage sweep
    u1 = u[(np.arange(n) + 1) % n]
    i1 = i[(np.arange(n) + 1) % n]
    keep = u1 != u
    if not np.any(keep):
        return 0.0
    seg_u0 = u[keep]
    seg_u1 = u1[keep]
    seg_i0 = i[keep]
    seg_i1 = i1[keep]
    seg_lo = np.minimum(seg_u0, seg_u1)
    seg_hi = np.maximum(seg_u0, seg_u1)
    slope = (seg_i1 - seg_i0) / (seg_u1 - seg_u0)
    direction = np.sign(seg_u1 - seg_u0)

    grid = np.unique(np.concatenate((seg_u0, seg_u1)))
    if grid.size < 2:
        return 0.0
    # event-driven sweep over voltage strips
    start_order = np.argsort(seg_lo, kind="stable")
    total = 0.0
    active = set()
    next_start = 0
    n_seg = seg_lo.size
    for gk in range(grid.size - 1):
        v0 = grid[gk]
        v1 = grid[gk + 1]
        while next_start < n_seg and seg_lo[start_order[next_start]] <= v0:
            active.add(int(start_order[next_start]))
            next_start += 1
        active = {s for s in active if seg_hi[s] >= v1}
        if len(active) < 2:
            continue
        segs = list(active)
        il = np.array([seg_i0[s] + slope[s] * (v0 - seg_u0[s]) for s in segs])
        ir = np.array([seg_i0[s] + slope[s] * (v1 - seg_u0[s]) for s in segs])
        dirs = np.array([direction[s] for s in segs])
        # split the strip where active segments cross each other
        cuts = {0.0, 1.0}
        for a_idx in range(len(segs)):
            for b_idx in range(a_idx + 1, len(segs)):
                dl = il[a_idx] - il[b_idx]
                dr = ir[a_idx] - ir[b_idx]
                if dl * dr < 0.0:
                    cuts.add(dl / (dl - dr))
        cuts = sorted(cuts)
        width = v1 - v0
        for ck in range(len(cuts) - 1):
            ta = cuts[ck]
            tb = cuts[ck + 1]
            tm = 0.5 * (ta + tb)
            im = il + (ir - il) * tm
            order = np.argsort(im, kind="stable")
            ia_ = (il + (ir - il) * ta)[order]
            ib_ = (il + (ir - il) * tb)[order]
            winding = np.cumsum(dirs[order])[:-1]
            gaps = 0.5 * (np.diff(ia_) + np.diff(ib_))
            total += (tb - ta) * width * float(np.sum(np.abs(winding) * gaps))
    return float(total)


def hysteresis_area(trace, period):
    """Lobe area of the last complete period of a trace, in volt-amperes.

    The window is the nearest whole number of sampling steps to one period;
    for periods that do not divide the grid the loop is closed across the
    sub-step gap.
    """
    T = trace.sampling_period
    n = int(round(period / T))
    if n < 4 or len(trace) < n + 1:
        raise AnalysisError("trace does not cover one full period")
    return loop_area(trace.u[-(n + 1) :], trace.i[-(n + 1) :])


def sweep_frequencies(
    make_device,
    excitation,
    frequencies,
    sampling_period,
    periods=2,
    config=None,
    t0=0.0,
    source_resistance=DEFAULT_SOURCE_RESISTANCE,
):
    """Run one scenario per frequency (fresh device each) and collect lobe areas.

    Returns {frequency: (trace, area)}; areas are taken over the final period
    so start-up transients are skipped.
    """
    out = {}
    for f in frequencies:
        exc = excitation.with_frequency(f)
        t_stop = t0 + periods / f
        device = make_device()
        trace = run_scenario(
            device,
            exc,
            sampling_period,
            t_stop,
            config=config,
            t0=t0,
            source_resistance=source_resistance,
        )
        out[f] = (trace, hysteresis_area(trace, 1.0 / f))
    return out


def area_report(areas_by_frequency):
    """Small structured-text summary: one `frequency -> area` line each."""
    lines = ["frequency_hz -> lobe_area_va"]
    for f in sorted(areas_by_frequency):
        area = areas_by_frequency[f]
        if isinstance(area, tuple):
            area = area[1]
        lines.append(f"{f!r} -> {float(area)!r}")
    return "\n".join(lines) + "\n"
