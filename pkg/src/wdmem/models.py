"""Memristor model catalog.

Interpolated characteristic-curve devices (binary switch, continuous range,
anything identified from data), the nonlinear ion-drift memristor in both its
state-equation and charge-domain closed forms, and the quantized multilevel
resistance device.  All models expose the same two callables used by the wave
engine: state_derivative(z, u) and memductance(z, u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    FormatError,
    PassivityError,
)

CURVE_CSV_HEADER = "flux_wb,memductance_s"


class CharacteristicCurve:
    """Sampled flux -> memductance map, linearly interpolated, clamped ends."""

    def __init__(self, flux_wb, memductance_s):
        phi = np.atleast_1d(np.asarray(flux_wb, dtype=float))
        g = np.atleast_1d(np.asarray(memductance_s, dtype=float))
        if phi.ndim != 1 or phi.shape != g.shape or phi.size < 1:
            raise ConfigurationError("curve needs matching 1-D knot arrays")
        if phi.size > 1 and not np.all(np.diff(phi) > 0.0):
            raise ConfigurationError("knot fluxes must be strictly increasing")
        if np.any(g < 0.0):
            raise PassivityError("curve contains negative memductance knots")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(g))):
            raise ConfigurationError("curve knots must be finite")
        self._phi = phi
        self._g = g

    def __len__(self):
        return self._phi.size

    def __call__(self, flux):
        return np.interp(flux, self._phi, self._g)

    @property
    def knots(self):
        return self._phi.copy(), self._g.copy()

    @property
    def flux_range(self):
        """Validity range of the interpolation, [phi_min, phi_max]."""
        return float(self._phi[0]), float(self._phi[-1])

    def to_csv(self, path):
        lo, hi = self.flux_range
        lines = [f"# validity_range_wb: {lo!r} {hi!r}", CURVE_CSV_HEADER]
        for p, g in zip(self._phi, self._g):
            lines.append(f"{float(p)!r},{float(g)!r}")
        text = "\n".join(lines) + "\n"
        with open(path, "w") as fh:
            fh.write(text)

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0].replace(" ", "") != CURVE_CSV_HEADER:
            raise FormatError(f"expected header '{CURVE_CSV_HEADER}' in {path}")
        phi, g = [], []
        for ln in rows[1:]:
            parts = ln.split(",")
            if len(parts) != 2:
                raise FormatError(f"bad curve row: {ln!r}")
            phi.append(float(parts[0]))
            g.append(float(parts[1]))
        return cls(phi, g)


class CurveMemristor:
    """Voltage-controlled memristor defined by a flux -> memductance curve.

    The internal state is the accumulated flux (f = u); the post-processing
    unit is the curve lookup, clamped to its end values outside the knots.
    """

    controlled_by = "voltage"

    def __init__(self, curve, initial_flux=0.0):
        if curve is None or len(curve) == 0:
            raise ConfigurationError("curve model needs a non-empty curve")
        self.curve = curve
        self.initial_state = float(initial_flux)

    def state_derivative(self, z, u):
        return u

    def memductance(self, z, u):
        return float(self.curve(z))


def curve_model_from_characteristic(curve, initial_flux=0.0):
    """Wrap an identified characteristic as an emulatable device."""
    return CurveMemristor(curve, initial_flux)


# ---------------------------------------------------------------------------
# nonlinear ion-drift ("HP") model


@dataclass(frozen=True)
class HpParameters:
    """Ion-drift memristor: R(z) = r0*z + r1*(1 - z), dz/dt = kappa*w(z)*i."""

    r0: float  # low resistance state, ohms
    r1: float  # high resistance state, ohms
    kappa: float  # material constant, 1/coulomb
    p: int = 1  # window steepness exponent
    z0: float = 0.5  # initial normalized state

    def __post_init__(self):
        if not 0.0 < self.r0 < self.r1:
            raise ConfigurationError("need 0 < r0 < r1")
        if self.kappa == 0.0:
            raise ConfigurationError("kappa must be nonzero")
        if not isinstance(self.p, int) or self.p < 1:
            raise ConfigurationError("window exponent p must be an integer >= 1")
        if not 0.0 < self.z0 < 1.0:
            raise ConfigurationError("z0 must lie strictly inside (0, 1)")

    @classmethod
    def from_initial_resistance(cls, r0, r1, r_init, kappa, p=1):
        """Build parameters from the initial resistance instead of z0."""
        if not r0 < r_init < r1:
            raise ConfigurationError("initial resistance must lie in (r0, r1)")
        z0 = (r1 - r_init) / (r1 - r0)
        return cls(r0=r0, r1=r1, kappa=kappa, p=p, z0=z0)

    def resistance_of_state(self, z):
        return self.r0 * z + self.r1 * (1.0 - z)


def hp_window(z, p):
    """w(z) = 1 - (2z - 1)^(2p); zero at both boundaries."""
    return 1.0 - (2.0 * z - 1.0) ** (2 * p)


def hp_state_derivative(params, z, i):
    """dz/dt = kappa * w(z) * i (current-controlled)."""
    return params.kappa * hp_window(z, params.p) * i


def hp_lambda(params, z):
    """State potential lambda(z) = ln(z/(1-z)) / (4*kappa); p = 1 only.

    Strictly increasing on (0, 1), so it has an inverse on any state interval.
    """
    if params.p != 1:
        raise DomainError("closed form is valid for p = 1 only")
    if not 0.0 < z < 1.0:
        raise DomainError("z must lie strictly inside (0, 1)")
    return math.log(z / (1.0 - z)) / (4.0 * params.kappa)


def hp_lambda_inverse(params, lam):
    """Inverse of hp_lambda: a logistic in 4*kappa*lambda."""
    if params.p != 1:
        raise DomainError("closed form is valid for p = 1 only")
    x = 4.0 * params.kappa * lam
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x)) if x < 700.0 else 1.0
    ex = math.exp(x) if x > -700.0 else 0.0
    return ex / (1.0 + ex)


def hp_resistance_of_charge(params, q):
    """Charge-domain closed form R(q) = r1 + (r0 - r1)/(1 + gamma*exp(-4*kappa*q)).

    Anchored at q = 0 to the initial resistance R(z0); saturates to r0 / r1
    for large positive / negative kappa*q.
    """
    if params.p != 1:
        raise DomainError("closed form is valid for p = 1 only")
    r_init = params.resistance_of_state(params.z0)
    if not params.r0 < r_init < params.r1:
        raise ConfigurationError("initial resistance must lie in (r0, r1)")
    gamma = (r_init - params.r0) / (params.r1 - r_init)
    x = -4.0 * params.kappa * q
    if x > 700.0:
        return params.r1
    if x < -700.0:
        return params.r0
    return params.r1 + (params.r0 - params.r1) / (1.0 + gamma * math.exp(x))


class HpMemristor:
    """Current-controlled ion-drift model run through the voltage-wave port.

    The port supplies the terminal voltage; the device law i = u / R(z)
    converts it to the current that drives the state equation.
    """

    controlled_by = "current"
    _Z_EPS = 1e-12  # boundary-lock guard for the p = 1 closed form

    def __init__(self, params):
        self.params = params
        self.initial_state = params.z0

    def state_derivative(self, z, u):
        p = self.params
        i = u / p.resistance_of_state(z)
        return p.kappa * hp_window(z, p.p) * i

    def memductance(self, z, u):
        return 1.0 / self.params.resistance_of_state(z)

    def clamp_state(self, z):
        return min(max(z, self._Z_EPS), 1.0 - self._Z_EPS)


# ---------------------------------------------------------------------------
# multilevel resistance device


@dataclass(frozen=True)
class MultilevelParameters:
    """Quantized-memductance device with n + 1 levels between g0 and g1."""

    g1: float  # high memductance state, siemens
    g0: float  # low memductance state, siemens
    u0: float  # retention/reset voltage offset, volts
    n: int  # refinement level

    def __post_init__(self):
        if not self.g1 > self.g0 > 0.0:
            raise ConfigurationError("need g1 > g0 > 0")
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError("refinement n must be an integer >= 1")

    @property
    def delta_z(self):
        return 1.0 / (self.n + 1)

    @property
    def delta_g(self):
        return self.g1 - self.g0


def multilevel_h(params, z):
    """Step-count h(z): levels crossed by z on either side of zero.

    Unit steps are strict (sigma(0) = 0), so exact threshold hits do not count.
    """
    dz = params.delta_z
    h = 0
    for nu in range(1, params.n + 1):
        thr = nu * dz
        if z > thr:
            h += 1
        if -z > thr:
            h += 1
    return h


def multilevel_state_derivative(params, u):
    """dz/dt = u + u0; the offset models retention drift at rest."""
    return u + params.u0


class MultilevelMemristor:
    """G(z) = g1 - (g1 - g0) * h(z) / n with unbounded integrator state."""

    controlled_by = "voltage"

    def __init__(self, params, initial_state=0.0):
        self.params = params
        self.initial_state = float(initial_state)
        self._thresholds = params.delta_z * np.arange(1, params.n + 1)

    def state_derivative(self, z, u):
        return u + self.params.u0

    def memductance(self, z, u):
        thr = self._thresholds
        h = int(np.count_nonzero(thr < z) + np.count_nonzero(thr < -z))
        p = self.params
        return p.g1 - p.delta_g * h / p.n


# ---------------------------------------------------------------------------
# bundled synthetic characteristics


def binary_switch_curve(g_low, g_high, threshold_wb, span_wb, width_wb=None):
    """Two-plateau characteristic switching g_low -> g_high at a threshold.

    The transition has a finite width (default 8 % of the span) so that it can
    be resolved by identification at typical sampling rates; real resistive
    switches also show a finite transition region.
    """
    if width_wb is None:
        width_wb = 0.08 * span_wb
    lo = threshold_wb - 0.5 * width_wb
    hi = threshold_wb + 0.5 * width_wb
    if not 0.0 < lo < hi < span_wb:
        raise ConfigurationError("threshold/width must fit inside (0, span)")
    return CharacteristicCurve(
        [0.0, lo, hi, span_wb], [g_low, g_low, g_high, g_high]
    )


def continuous_curve(g_low, g_high, span_wb, knot_count=257):
    """Smooth monotone ramp from g_low to g_high over [0, span] (smoothstep)."""
    if span_wb <= 0.0:
        raise ConfigurationError("span must be positive")
    if knot_count < 2:
        raise ConfigurationError("need at least two knots")
    x = np.linspace(0.0, 1.0, knot_count)
    s = x * x * (3.0 - 2.0 * x)
    return CharacteristicCurve(x * span_wb, g_low + (g_high - g_low) * s)
