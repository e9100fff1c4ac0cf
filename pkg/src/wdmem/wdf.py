"""Wave-digital primitives.

Voltage/current <-> wave mappings, state-dependent reflection coefficients,
three-port series/parallel adaptors, the trapezoidal wave integrator, and the
fixed-point solver for the implicit memristive one-port equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NumericError, PassivityError

# A model returning a memductance below this is treated as broken rather than
# as rounding noise.
MEMDUCTANCE_ROUNDING = -1e-15


def _check_resistance(resistance):
    if np.any(np.asarray(resistance) <= 0.0):
        raise DomainError("port resistance must be strictly positive")


def kirchhoff_to_wave(u, i, resistance):
    """Map (u, i) at a port to the wave pair: a = u + R*i, b = u - R*i."""
    _check_resistance(resistance)
    return u + resistance * i, u - resistance * i


def wave_to_kirchhoff(a, b, resistance):
    """Inverse wave map: u = (a + b)/2, i = (a - b)/(2R)."""
    _check_resistance(resistance)
    return 0.5 * (a + b), (a - b) / (2.0 * resistance)


def reflection_coefficient(memductance, resistance):
    """rho = (1 - R*G)/(1 + R*G), the wave image of a (mem)ductive load.

    Lies in [-1, 1] for every passive G >= 0; G < 0 is rejected.
    """
    _check_resistance(resistance)
    if np.any(np.asarray(memductance) < 0.0):
        raise PassivityError("negative memductance has no passive reflection")
    rg = resistance * memductance
    return (1.0 - rg) / (1.0 + rg)


def resistive_source_wave(emf, source_resistance):
    """Emitted wave of a resistive voltage source at a matched port.

    With the port resistance equal to the internal resistance the source is
    reflection-free and simply emits its EMF; the returning wave is absorbed
    (kept only for current read-out).
    """
    _check_resistance(source_resistance)
    return emf


@dataclass
class Port:
    """Wave pair and port resistance of a one-port connection."""

    resistance: float
    incident: float = 0.0
    reflected: float = 0.0

    def __post_init__(self):
        if self.resistance <= 0.0:
            raise DomainError("port resistance must be strictly positive")

    @property
    def voltage(self):
        return 0.5 * (self.incident + self.reflected)

    @property
    def current(self):
        return (self.incident - self.reflected) / (2.0 * self.resistance)


@dataclass(frozen=True)
class FixedPointConfig:
    """Iteration budget for the implicit port equation.

    n_i = 1 is the non-iterated single-pass mode used by the scalar memristor
    runs; a tolerance (in volts) allows early exit.
    """

    n_i: int = 1
    tolerance: float | None = None

    def __post_init__(self):
        if not isinstance(self.n_i, int) or self.n_i < 1:
            raise ConfigurationError("n_i must be an integer >= 1")
        if self.tolerance is not None and self.tolerance <= 0.0:
            raise ConfigurationError("tolerance must be positive when given")


class WaveIntegrator:
    """Trapezoidal integrator realized as a T/2 port with a unit-delay store.

    The store holds the wave reflected by the capacitive port; each instance
    the incident wave a_z = f*T + b_z is written back as the next reflection.
    The state is read as the port voltage (a_z + b_z)/2, and the first commit
    re-anchors the store so the initial read equals z0 exactly.  With that
    anchoring the read sequence reproduces offline trapezoidal quadrature of
    the supplied f samples to machine precision.
    """

    def __init__(self, z0, sampling_period):
        if sampling_period <= 0.0:
            raise DomainError("sampling period must be positive")
        self.sampling_period = float(sampling_period)
        self.port_resistance = 0.5 * self.sampling_period
        if isinstance(z0, np.ndarray):
            self._z0 = z0.astype(float)
            self.stored_wave = self._z0.copy()
        else:
            self._z0 = float(z0)
            self.stored_wave = self._z0
        self._primed = False

    @property
    def primed(self):
        return self._primed

    def state(self, f_value):
        """State sample for the current instance given f evaluated there."""
        if not self._primed:
            if isinstance(self._z0, np.ndarray):
                return self._z0.copy()
            return self._z0
        return self.stored_wave + (0.5 * self.sampling_period) * f_value

    def commit(self, f_value):
        """Advance the store by one instance; call exactly once per instance."""
        if not self._primed:
            self.stored_wave = self._z0 + (0.5 * self.sampling_period) * f_value
            self._primed = True
        else:
            self.stored_wave = self.stored_wave + self.sampling_period * f_value

    def step(self, f_value):
        """Read the state for this instance, then advance the store."""
        z = self.state(f_value)
        self.commit(f_value)
        return z


def integrator_step(integrator, f_value):
    """Functional form of WaveIntegrator.step."""
    return integrator.step(f_value)


class SeriesAdaptor3:
    """Three-port series adaptor with a reflection-free port 3 (R3 = R1 + R2).

    Scattering: b_k = a_k - gamma_k * (a1 + a2 + a3) with
    gamma_k = 2 R_k / (R1 + R2 + R3); the constraint makes gamma3 = 1, so
    b3 = -(a1 + a2) carries no instantaneous dependence on a3.
    """

    def __init__(self, r1, r2, r3=None):
        if r1 <= 0.0 or r2 <= 0.0:
            raise DomainError("adaptor port resistances must be positive")
        derived = r1 + r2
        if r3 is not None and not math.isclose(r3, derived, rel_tol=1e-12):
            raise ConfigurationError(
                f"series adaptor needs R3 = R1 + R2 = {derived}, got {r3}"
            )
        self.r1 = float(r1)
        self.r2 = float(r2)
        self.r3 = derived
        total = self.r1 + self.r2 + self.r3  # = 2*R3 exactly
        self.gamma1 = 2.0 * self.r1 / total
        self.gamma2 = 2.0 * self.r2 / total
        self.gamma3 = 1.0
        self.gamma_s = self.r1 / self.r3

    @property
    def resistances(self):
        return (self.r1, self.r2, self.r3)

    def scatter(self, a1, a2, a3):
        a0 = a1 + a2 + a3
        b1 = a1 - self.gamma1 * a0
        b2 = a2 - self.gamma2 * a0
        b3 = -(a1 + a2)
        return b1, b2, b3


class ParallelAdaptor3:
    """Three-port parallel adaptor with a reflection-free port 3 (G3 = G1 + G2).

    Scattering: b_k = (d1 a1 + d2 a2 + d3 a3) - a_k with
    d_k = 2 G_k / (G1 + G2 + G3); the constraint makes d3 = 1, so
    b3 = d1 a1 + d2 a2 does not depend on a3.
    """

    def __init__(self, r1, r2, r3=None):
        if r1 <= 0.0 or r2 <= 0.0:
            raise DomainError("adaptor port resistances must be positive")
        g1 = 1.0 / r1
        g2 = 1.0 / r2
        g3 = g1 + g2
        derived = 1.0 / g3
        if r3 is not None and not math.isclose(r3, derived, rel_tol=1e-12):
            raise ConfigurationError(
                f"parallel adaptor needs 1/R3 = 1/R1 + 1/R2 (R3 = {derived}), got {r3}"
            )
        self.r1 = float(r1)
        self.r2 = float(r2)
        self.r3 = derived
        self.d1 = g1 / g3
        self.d2 = g2 / g3
        self.d3 = 1.0
        self.gamma_p = self.r2 / (self.r1 + self.r2)  # equals d1

    @property
    def resistances(self):
        return (self.r1, self.r2, self.r3)

    def scatter(self, a1, a2, a3):
        s = self.d1 * a1 + self.d2 * a2 + a3
        return s - a1, s - a2, self.d1 * a1 + self.d2 * a2


def checked_memductance(g):
    """Validate a model's memductance sample; clamp rounding-level negatives."""
    g = float(g)
    if math.isnan(g):
        raise NumericError("model returned NaN memductance")
    if g < MEMDUCTANCE_ROUNDING:
        raise PassivityError(f"model returned negative memductance {g} S")
    return g if g > 0.0 else 0.0


class MemristivePort:
    """One-port wave realization of a memristive device.

    Solves b = rho(G(z, (a+b)/2)) * a at each instance by repeating the red
    loop (wave-to-voltage transformation, state pre-processing plus
    integrator, memductance post-processing, reflection) n_i times.  The
    iteration warm-starts from the previous instance's reflected wave; the
    integrator store is committed exactly once per instance, after the final
    sweep.
    """

    def __init__(self, model, port_resistance, sampling_period, config=None):
        self.port = Port(port_resistance)
        self.model = model
        self.config = config if config is not None else FixedPointConfig()
        self.integrator = WaveIntegrator(model.initial_state, sampling_period)
        self._last_f = 0.0  # committed drift of the previous instance
        self._b_prev2 = 0.0
        self.last_state = model.initial_state
        self.last_memductance = checked_memductance(
            model.memductance(model.initial_state, 0.0)
        )

    def step(self, a_in):
        cfg = self.config
        resistance = self.port.resistance
        model = self.model
        clamp = getattr(model, "clamp_state", None)
        # warm start: linear extrapolation of the two previous converged
        # reflections keeps the transformation-unit voltage second-order
        # accurate even in the non-iterated n_i = 1 mode
        b_prev = self.port.reflected
        b = b_prev + (b_prev - self._b_prev2)
        # the pre-processing unit evaluates f at the integrator's own state
        # prediction (store plus half a step of the committed drift), which is
        # second-order consistent even in the non-iterated mode
        z_est = self.integrator.state(self._last_f)
        if clamp is not None:
            z_est = clamp(z_est)
        f_val = self._last_f
        g = self.last_memductance
        for _ in range(cfg.n_i):
            u = 0.5 * (a_in + b)
            f_val = model.state_derivative(z_est, u)
            z_est = self.integrator.state(f_val)
            if clamp is not None:
                z_est = clamp(z_est)
            g = checked_memductance(model.memductance(z_est, u))
            rg = resistance * g
            b_new = (1.0 - rg) / (1.0 + rg) * a_in
            done = cfg.tolerance is not None and abs(b_new - b) <= cfg.tolerance
            b = b_new
            if done:
                break
        self.integrator.commit(f_val)
        if clamp is not None:
            self.integrator.stored_wave = clamp(self.integrator.stored_wave)
        self._last_f = f_val
        self._b_prev2 = b_prev
        self.port.incident = a_in
        self.port.reflected = b
        self.last_state = z_est
        self.last_memductance = g
        return b

    def residual(self):
        """|b - rho(G(z, (a+b)/2)) a| for the last committed instance."""
        a = self.port.incident
        b = self.port.reflected
        u = 0.5 * (a + b)
        g = checked_memductance(self.model.memductance(self.last_state, u))
        rg = self.port.resistance * g
        return abs(b - (1.0 - rg) / (1.0 + rg) * a)


def memristive_port_step(port, a_in):
    """Functional form of MemristivePort.step."""
    return port.step(a_in)
