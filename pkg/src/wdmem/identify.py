"""Identification pipeline: (t, u, i) samples -> flux-dependent memductance.

Numerically integrates voltage and current into flux and charge, forms
difference-quotient memductance samples on the first monotone flux segment,
and interpolates them into a CharacteristicCurve.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError, IdentificationError
from .models import CharacteristicCurve

TRACE_CSV_HEADER = "t_s,u_v,i_a"

# Flux steps below this are treated as duplicates and skipped.
DUPLICATE_FLUX_WB = 1e-15


class SampleTrace:
    """Sampled (t, u, i) record of a one-port measurement or simulation."""

    def __init__(self, t, u, i):
        t = np.asarray(t, dtype=float)
        u = np.asarray(u, dtype=float)
        i = np.asarray(i, dtype=float)
        if t.ndim != 1 or t.shape != u.shape or t.shape != i.shape:
            raise FormatError("trace needs matching 1-D t, u, i arrays")
        if t.size < 3:
            raise IdentificationError("trace needs at least 3 samples")
        if not np.all(np.diff(t) > 0.0):
            raise FormatError("time column must be strictly increasing")
        self.t = t
        self.u = u
        self.i = i

    def __len__(self):
        return self.t.size

    def is_uniform(self, rel_tol=1e-6):
        dt = np.diff(self.t)
        return bool(np.all(np.abs(dt - dt[0]) <= rel_tol * abs(dt[0])))

    def to_csv(self, path):
        lines = [TRACE_CSV_HEADER]
        for t, u, i in zip(self.t, self.u, self.i):
            lines.append(f"{float(t)!r},{float(u)!r},{float(i)!r}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0].replace(" ", "") != TRACE_CSV_HEADER:
            raise FormatError(f"expected header '{TRACE_CSV_HEADER}' in {path}")
        cols = []
        for ln in rows[1:]:
            parts = ln.split(",")
            if len(parts) != 3:
                raise FormatError(f"bad trace row: {ln!r}")
            cols.append([float(x) for x in parts])
        if not cols:
            raise IdentificationError("trace file contains no samples")
        arr = np.asarray(cols)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2])


def resample_uniform(trace, sampling_period):
    """Linear interpolation of a trace onto the grid t0, t0+T, ..."""
    if sampling_period <= 0.0:
        raise FormatError("sampling period must be positive")
    span = trace.t[-1] - trace.t[0]
    if span < 2.0 * sampling_period:
        raise FormatError("trace must span at least two sampling periods")
    steps = int(np.floor(span / sampling_period * (1.0 + 1e-12)))
    grid = trace.t[0] + sampling_period * np.arange(steps + 1)
    return SampleTrace(
        grid, np.interp(grid, trace.t, trace.u), np.interp(grid, trace.t, trace.i)
    )


def cumulative_integral(t, x):
    """Trapezoidal cumulative integral with X(t0) = 0."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    inc = 0.5 * (x[1:] + x[:-1]) * np.diff(t)
    return np.concatenate(([0.0], np.cumsum(inc)))


def memductance_from_qphi(q, phi, difference="forward"):
    """Difference-quotient memductance G = dq/dphi on the monotone flux prefix.

    Only the longest strictly monotone prefix of the flux sequence is used
    (the first half-period of a sine drive covers the full identified range
    exactly once); near-duplicate flux samples are skipped.
    """
    q = np.asarray(q, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if q.shape != phi.shape or q.ndim != 1:
        raise IdentificationError("charge and flux sample arrays must match")
    kept = [0]
    direction = 0
    for j in range(1, phi.size):
        d = phi[j] - phi[kept[-1]]
        if abs(d) < DUPLICATE_FLUX_WB:
            continue
        s = 1 if d > 0.0 else -1
        if direction == 0:
            direction = s
        elif s != direction:
            break
        kept.append(j)
    if len(kept) < 2:
        raise IdentificationError("no monotone flux segment of length >= 2")
    kq = q[kept]
    kp = phi[kept]
    if difference == "forward":
        g = np.diff(kq) / np.diff(kp)
        pts_phi = kp[:-1]
    elif difference == "central":
        if len(kept) < 3:
            raise IdentificationError("central differences need >= 3 points")
        g = (kq[2:] - kq[:-2]) / (kp[2:] - kp[:-2])
        pts_phi = kp[1:-1]
    else:
        raise IdentificationError(f"unknown difference scheme {difference!r}")
    floor = -1e-9 * max(1.0, float(np.max(np.abs(g))))
    if np.any(g < floor):
        raise IdentificationError("identified memductance is negative")
    return pts_phi, np.maximum(g, 0.0)


def build_characteristic(flux_pts, memductance_pts):
    """Sorted, deduplicated, linearly interpolable characteristic curve."""
    phi = np.asarray(flux_pts, dtype=float)
    g = np.asarray(memductance_pts, dtype=float)
    if phi.shape != g.shape or phi.ndim != 1:
        raise IdentificationError("point arrays must match")
    order = np.argsort(phi, kind="stable")
    phi = phi[order]
    g = g[order]
    keep = np.concatenate(([True], np.diff(phi) >= DUPLICATE_FLUX_WB))
    phi = phi[keep]
    g = g[keep]
    if phi.size < 2:
        raise IdentificationError("need at least two distinct flux points")
    return CharacteristicCurve(phi, g)


def identify_trace(trace, sampling_period=None, difference="forward"):
    """Full pipeline: resample if needed, integrate, differentiate, interpolate."""
    if not trace.is_uniform():
        if sampling_period is None:
            raise FormatError("non-uniform trace requires a resampling period")
        trace = resample_uniform(trace, sampling_period)
    q = cumulative_integral(trace.t, trace.i)
    phi = cumulative_integral(trace.t, trace.u)
    pts_phi, pts_g = memductance_from_qphi(q, phi, difference)
    return build_characteristic(pts_phi, pts_g)
