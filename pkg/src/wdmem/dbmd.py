"""Double-barrier memristive device.

Three coupled one-ports (Schottky contact, solid-state electrolyte, tunnel
barrier) share a single ion-position state z in [0, 1].  The device is a
series connection of the Schottky resistance and two parallel RC pairs,
realized as a wave-digital adaptor tree with the two parasitic capacitors as
unit delays and the three state/voltage-dependent resistances as reflection
coefficients.  The per-instance implicit system is solved by damped Newton
iterations on the three element waves within the configured sweep budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, DomainError, NumericError
from .scenario import TraceRecord
from .wdf import FixedPointConfig, ParallelAdaptor3, SeriesAdaptor3, WaveIntegrator

SMALL_SIGNAL_V = 1e-9  # tunnel central-difference step / current read-out floor
# The reverse-bias barrier lowering varies as sqrt(|u|), so the Schottky
# limit threshold must sit much lower to keep the branch switch continuous
# to <= 1e-6 relative; expm1 keeps the direct formula stable down to here.
SCHOTTKY_SMALL_SIGNAL_V = 1e-14
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class DbmdParameters:
    """Physical parameter set of the double-barrier device (SI units)."""

    # ion-hopping state equation
    z_rate: float  # normalized average ion velocity, hertz
    u_e_ref: float  # reference electrolyte voltage, volts
    phi_a0: float  # minimum normalized activation energy (state z = 1 branch)
    phi_a1: float  # maximum normalized activation energy (state z = 0 branch)
    phi_ar: float  # normalized activation energy, reverse direction
    w0: float  # window offset keeping w(z) > 0 at the boundaries
    p: int  # window exponent
    u_c: float  # Coulomb voltage, volts
    # electrolyte
    r_e0: float  # minimum electrolyte resistance, ohms
    r_e1: float  # maximum electrolyte resistance, ohms
    c_e: float  # electrolyte capacitance, farads
    # Schottky contact
    phi_s0: float  # normalized barrier height at z = 0
    phi_s1: float  # normalized barrier height at z = 1
    alpha_s: float  # normalized Schottky barrier thickness
    i_s: float  # Schottky current amplitude, amperes
    n0: float  # minimum ideality factor
    n1: float  # maximum ideality factor
    alpha_f: float  # barrier-lowering fitting weight
    u_theta: float  # thermal voltage, volts
    # tunnel barrier
    phi_t0: float  # normalized tunnel barrier height
    alpha_t0: float  # normalized minimum tunnel barrier thickness
    alpha_t1: float  # normalized maximum tunnel barrier thickness
    i_t: float  # tunnel current amplitude, amperes
    c_t: float  # tunnel barrier capacitance, farads
    # normalization Schottky-barrier thickness, meters; bookkeeping only, it
    # enters no equation of this model
    d_s: float = 0.0

    def __post_init__(self):
        positive = {
            "z_rate": self.z_rate,
            "u_e_ref": self.u_e_ref,
            "u_c": self.u_c,
            "r_e0": self.r_e0,
            "c_e": self.c_e,
            "i_s": self.i_s,
            "u_theta": self.u_theta,
            "i_t": self.i_t,
            "c_t": self.c_t,
            "w0": self.w0,
            "alpha_s": self.alpha_s,
        }
        for name, value in positive.items():
            if value <= 0.0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if self.r_e1 <= self.r_e0:
            raise ConfigurationError("need r_e1 > r_e0")
        if not 0.0 < self.alpha_t0 < self.alpha_t1:
            raise ConfigurationError("need 0 < alpha_t0 < alpha_t1")
        if self.n0 >= self.n1:
            raise ConfigurationError("need n0 < n1")
        if self.n0 <= 0.0:
            raise ConfigurationError("ideality factors must be positive")
        if not isinstance(self.p, int) or self.p < 1:
            raise ConfigurationError("window exponent p must be an integer >= 1")


def _check_state(z):
    if z < 0.0 or z > 1.0:
        raise DomainError(f"state z = {z} outside [0, 1]")


def dbmd_window(params, z):
    """w(z) = (1 - 2 w0)(1 - (2z - 1)^(2p)) + w0; positive on [0, 1]."""
    return (1.0 - 2.0 * params.w0) * (1.0 - (2.0 * z - 1.0) ** (2 * params.p)) + params.w0


def activation_energy(params, u, z):
    """Voltage-switched affine activation exponent; reverse branch for u <= 0."""
    if u > 0.0:
        return params.phi_a1 + z * (params.phi_a0 - params.phi_a1)
    return params.phi_ar


def schottky_coupling_voltage(u, u_s, z):
    """Share of the Schottky voltage pulling ions in the reverse direction."""
    return (1.0 - z) * u_s if u < 0.0 else 0.0


def dbmd_state_derivative(params, z, u, u_s, u_e):
    """Ion-hopping state equation dz/dt for the shared internal state."""
    arg = (schottky_coupling_voltage(u, u_s, z) + u_e - params.u_c) / params.u_e_ref
    if abs(arg) > _EXP_LIMIT:
        raise NumericError(f"sinh argument {arg} out of range; check parameter scaling")
    w = dbmd_window(params, z)
    return -params.z_rate * w * math.exp(-activation_energy(params, u, z)) * math.sinh(arg)


def _state_derivative_dz(params, z, u, u_s, u_e):
    """Analytic d(dz/dt)/dz used by the per-instance state solve."""
    arg = (schottky_coupling_voltage(u, u_s, z) + u_e - params.u_c) / params.u_e_ref
    if abs(arg) > _EXP_LIMIT:
        raise NumericError("sinh argument out of range")
    w = dbmd_window(params, z)
    dw = -4.0 * params.p * (1.0 - 2.0 * params.w0) * (2.0 * z - 1.0) ** (2 * params.p - 1)
    dphi = (params.phi_a0 - params.phi_a1) if u > 0.0 else 0.0
    darg = (-u_s / params.u_e_ref) if u < 0.0 else 0.0
    scale = -params.z_rate * math.exp(-activation_energy(params, u, z))
    return scale * ((dw - w * dphi) * math.sinh(arg) + w * math.cosh(arg) * darg)


def schottky_resistance(params, u_s, z):
    """Voltage/state-dependent Schottky contact resistance.

    The barrier-lowering square root is active only for negative voltages;
    the u_s -> 0 singularity is removable and replaced by its analytic limit
    n(z) * u_theta * exp(phi_s(z)) / i_s below the small-signal threshold.
    """
    _check_state(z)
    phi_s = params.phi_s0 + z * (params.phi_s1 - params.phi_s0)
    n_z = params.n0 + z * (params.n1 - params.n0)
    if abs(u_s) < SCHOTTKY_SMALL_SIGNAL_V:
        return n_z * params.u_theta * math.exp(phi_s) / params.i_s
    exponent = phi_s + params.alpha_f * math.sqrt(
        (abs(u_s) - u_s) / (params.alpha_s * params.u_theta)
    )
    if exponent > _EXP_LIMIT:
        raise NumericError("Schottky exponent out of range; check parameter scaling")
    x = u_s / (n_z * params.u_theta)
    den = math.expm1(x) if x < _EXP_LIMIT else math.inf
    return (u_s / params.i_s) * math.exp(exponent) / den


def electrolyte_resistance(params, z):
    """Linear resistance change between the low and high electrolyte states."""
    _check_state(z)
    return params.r_e0 + z * (params.r_e1 - params.r_e0)


def _tunnel_g(params, u, alpha):
    phi = params.phi_t0 + u / (2.0 * params.u_theta)
    if phi <= 0.0:
        raise DomainError(f"tunnel barrier argument {phi} <= 0: outside model validity")
    return phi * math.exp(-alpha * math.sqrt(phi))


def tunnel_resistance(params, u_t, z):
    """Tunnel barrier resistance from the generalized tunneling relation.

    R_t = (u_t / i_t) * alpha_t(z)^2 / (g(-u_t) - g(u_t)); the u_t -> 0
    removable singularity is evaluated as a central difference at +-delta.
    """
    _check_state(z)
    alpha = params.alpha_t0 + z * (params.alpha_t1 - params.alpha_t0)
    if abs(u_t) < SMALL_SIGNAL_V:
        delta = SMALL_SIGNAL_V
        den = _tunnel_g(params, -delta, alpha) - _tunnel_g(params, delta, alpha)
        return alpha * alpha * delta / (params.i_t * den)
    den = _tunnel_g(params, -u_t, alpha) - _tunnel_g(params, u_t, alpha)
    return (u_t / params.i_t) * alpha * alpha / den


def _inv3(m):
    """Closed-form inverse of a 3x3 matrix given as nested tuples."""
    (a, b, c), (d, e, f), (g, h, i) = m
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0.0 or math.isnan(det) or math.isinf(det):
        raise NumericError("singular iteration Jacobian")
    k = 1.0 / det
    return (
        (k * (e * i - f * h), k * (c * h - b * i), k * (b * f - c * e)),
        (k * (f * g - d * i), k * (a * i - c * g), k * (c * d - a * f)),
        (k * (d * h - e * g), k * (b * g - a * h), k * (a * e - b * d)),
    )


class DbmdNetwork:
    """Wave-digital network of the double-barrier device.

    Topology (series loop): resistive source -- Schottky one-port --
    (electrolyte || C_e) -- (tunnel || C_t), built from two series adaptors
    and two parallel adaptors with reflection-free ports facing the source.
    Series-series and source connections carry polarity inversions so that
    every element sees the loop current with drop-positive orientation.

    Port numbering: R1 Schottky, R2 series-series link, R3 electrolyte,
    R4 = T/(2 C_e), R5 electrolyte-pair link, R6 source/root, R7 tunnel,
    R8 = T/(2 C_t), R9 tunnel-pair link.  R1, R3, R7 are the freely
    selectable ports; they condition the per-instance iteration.
    """

    def __init__(
        self,
        params,
        sampling_period,
        config=None,
        z0=0.5,
        t0=0.0,
        source_resistance=0.1,
        schottky_port_ohms=1.0,
        electrolyte_port_ohms=10e6,
        tunnel_port_ohms=1e9,
        include_capacitors=True,
    ):
        if sampling_period <= 0.0:
            raise ConfigurationError("sampling period must be positive")
        if not 0.0 <= z0 <= 1.0:
            raise ConfigurationError("z0 must lie in [0, 1]")
        if source_resistance <= 0.0:
            raise ConfigurationError("source resistance must be positive")
        self.params = params
        self.sampling_period = float(sampling_period)
        self.config = config if config is not None else FixedPointConfig(n_i=6)
        self._tol = self.config.tolerance if self.config.tolerance else 1e-10
        self.z0 = float(z0)
        self.t0 = float(t0)
        self._r0 = float(source_resistance)
        self._with_caps = bool(include_capacitors)

        T = self.sampling_period
        self._r1 = float(schottky_port_ohms)
        self._r3 = float(electrolyte_port_ohms)
        self._r7 = float(tunnel_port_ohms)
        if min(self._r1, self._r3, self._r7) <= 0.0:
            raise ConfigurationError("port resistances must be positive")
        if self._with_caps:
            self._r4 = T / (2.0 * params.c_e)
            self._r8 = T / (2.0 * params.c_t)
            self._pa_e = ParallelAdaptor3(self._r3, self._r4)
            self._pa_t = ParallelAdaptor3(self._r7, self._r8)
            self._r5 = self._pa_e.r3
            self._r9 = self._pa_t.r3
        else:
            self._r4 = math.inf
            self._r8 = math.inf
            self._pa_e = None
            self._pa_t = None
            self._r5 = self._r3
            self._r9 = self._r7
        self._sa2 = SeriesAdaptor3(self._r5, self._r9)
        self._r2 = self._sa2.r3
        self._sa1 = SeriesAdaptor3(self._r1, self._r2)
        self._r6 = self._sa1.r3
        self._sum_r_sa1 = self._r1 + self._r2 + self._r6

        # per-instance mutable state
        self._b_ce = 0.0
        self._b_ct = 0.0
        self._integrator = WaveIntegrator(self.z0, T)
        self._z = self.z0
        self._b = [0.0, 0.0, 0.0]  # warm-start waves: Schottky, electrolyte, tunnel
        self._k = 0
        self._jinv = None
        self._j_age = 0

        # the adaptor chain plus source is affine in the element waves; probe
        # the constant 4x3 map (rows a_s, a_re, a_rt, u) once
        cols = []
        for j in range(3):
            unit = [0.0, 0.0, 0.0]
            unit[j] = 1.0
            out = self._propagate(*unit, 0.0, 0.0, 0.0)
            cols.append((out[0], out[1], out[2], out[3]))
        self._m = tuple(tuple(cols[j][i] for j in range(3)) for i in range(4))

        self.last_port_residual = 0.0
        self.last_decomposition_residual = 0.0
        self.last_iterations = 0
        self.last_resistances = (math.inf, math.inf, math.inf)

    # -- wave propagation ---------------------------------------------------

    def _propagate(self, b_s, b_re, b_rt, e, b_ce, b_ct):
        """One full pass: leaf emissions up, source reflection, waves back down.

        Returns (a_s, a_re, a_rt, u_term, i_term, a_ce, a_ct).
        """
        if self._with_caps:
            b5 = self._pa_e.d1 * b_re + self._pa_e.d2 * b_ce
            b9 = self._pa_t.d1 * b_rt + self._pa_t.d2 * b_ct
        else:
            b5 = b_re
            b9 = b_rt
        b_up = -(b5 + b9)  # series adaptor 2, reflection-free emission
        a2 = -b_up  # polarity inverter: series-series cascade flips loop orientation
        b6 = -(b_s + a2)  # series adaptor 1 emission toward the source
        alpha = -b6  # source sits as a rise in the loop: inverted connection
        beta = (2.0 * self._r6 * e - (self._r6 - self._r0) * alpha) / (
            self._r6 + self._r0
        )
        a6 = -beta
        s0 = b_s + a2 + a6
        a_s = b_s - self._sa1.gamma1 * s0
        a3_sa2 = -(a2 - self._sa1.gamma2 * s0)
        s2 = b5 + b9 + a3_sa2
        a5 = b5 - self._sa2.gamma1 * s2
        a9 = b9 - self._sa2.gamma2 * s2
        if self._with_caps:
            s_e = self._pa_e.d1 * b_re + self._pa_e.d2 * b_ce + a5
            a_re = s_e - b_re
            a_ce = s_e - b_ce
            s_t = self._pa_t.d1 * b_rt + self._pa_t.d2 * b_ct + a9
            a_rt = s_t - b_rt
            a_ct = s_t - b_ct
        else:
            a_re = a5
            a_ce = 0.0
            a_rt = a9
            a_ct = 0.0
        u_term = 0.5 * (alpha + beta)
        i_term = -s0 / self._sum_r_sa1
        return a_s, a_re, a_rt, u_term, i_term, a_ce, a_ct

    # -- per-instance nonlinear solve ---------------------------------------

    def _solve_state(self, z_guess, u, u_s, u_e):
        """Resolve the implicit trapezoidal state read z = b_z + (T/2) f(z, .)."""
        params = self.params
        if not self._integrator.primed:
            z = self._integrator.state(0.0)
            return z, dbmd_state_derivative(params, z, u, u_s, u_e)
        stored = self._integrator.stored_wave
        half = 0.5 * self.sampling_period
        z = z_guess
        f = dbmd_state_derivative(params, z, u, u_s, u_e)
        for _ in range(16):
            g = z - stored - half * f
            if abs(g) <= 1e-13 * (1.0 + abs(z)):
                break
            den = 1.0 - half * _state_derivative_dz(params, z, u, u_s, u_e)
            z -= g / den if den != 0.0 and math.isfinite(den) else g
            f = dbmd_state_derivative(params, z, u, u_s, u_e)
        return z, f

    def _residual(self, b, off):
        """Port-equation residual of the three nonlinear elements.

        b: candidate element emissions; off: per-instance affine offsets.
        Returns (residual triple, aux dict with converged physics values).
        """
        m = self._m
        b0, b1, b2 = b
        a_s = off[0] + m[0][0] * b0 + m[0][1] * b1 + m[0][2] * b2
        a_re = off[1] + m[1][0] * b0 + m[1][1] * b1 + m[1][2] * b2
        a_rt = off[2] + m[2][0] * b0 + m[2][1] * b1 + m[2][2] * b2
        u = off[3] + m[3][0] * b0 + m[3][1] * b1 + m[3][2] * b2
        u_s = 0.5 * (a_s + b0)
        u_e = 0.5 * (a_re + b1)
        u_t = 0.5 * (a_rt + b2)
        z_raw, f = self._solve_state(self._z, u, u_s, u_e)
        z = min(max(z_raw, 0.0), 1.0)
        r_s = self._schottky(u_s, z)
        r_e = self._electrolyte(z)
        r_t = self._tunnel(u_t, z)
        rho_s = 1.0 if math.isinf(r_s) else (r_s - self._r1) / (r_s + self._r1)
        rho_e = 1.0 if math.isinf(r_e) else (r_e - self._r3) / (r_e + self._r3)
        rho_t = 1.0 if math.isinf(r_t) else (r_t - self._r7) / (r_t + self._r7)
        res = (b0 - rho_s * a_s, b1 - rho_e * a_re, b2 - rho_t * a_rt)
        aux = {
            "z": z,
            "z_raw": z_raw,
            "f": f,
            "u": u,
            "u_s": u_s,
            "u_e": u_e,
            "u_t": u_t,
            "r_s": r_s,
            "r_e": r_e,
            "r_t": r_t,
        }
        return res, aux

    # resistance laws behind small indirections so tests can substitute them
    def _schottky(self, u_s, z):
        return schottky_resistance(self.params, u_s, z)

    def _electrolyte(self, z):
        return electrolyte_resistance(self.params, z)

    def _tunnel(self, u_t, z):
        return tunnel_resistance(self.params, u_t, z)

    def _build_jacobian(self, b, res, off):
        jac = [[0.0] * 3 for _ in range(3)]
        for j in range(3):
            h = 1e-6 * (1.0 + abs(b[j]))
            pert = list(b)
            pert[j] += h
            try:
                res_p, _ = self._residual(pert, off)
            except (DomainError, NumericError, OverflowError):
                pert[j] = b[j] - h
                res_p, _ = self._residual(pert, off)
                h = -h
            for i in range(3):
                jac[i][j] = (res_p[i] - res[i]) / h
        self._jinv = _inv3(tuple(tuple(row) for row in jac))
        self._j_age = 0

    def _newton(self, off, t):
        b = list(self._b)
        res, aux = self._residual(b, off)
        norm = max(abs(res[0]), abs(res[1]), abs(res[2]))
        initial_norm = norm
        iterations = 0
        budget = self.config.n_i
        while norm > self._tol and iterations < budget:
            if self._jinv is None or self._j_age > 32:
                self._build_jacobian(b, res, off)
            ji = self._jinv
            dx = [
                -(ji[0][0] * res[0] + ji[0][1] * res[1] + ji[0][2] * res[2]),
                -(ji[1][0] * res[0] + ji[1][1] * res[1] + ji[1][2] * res[2]),
                -(ji[2][0] * res[0] + ji[2][1] * res[1] + ji[2][2] * res[2]),
            ]
            accepted = False
            lam = 1.0
            while lam >= 1.0 / 32.0:
                trial = [b[0] + lam * dx[0], b[1] + lam * dx[1], b[2] + lam * dx[2]]
                try:
                    res_t, aux_t = self._residual(trial, off)
                except (DomainError, NumericError, OverflowError):
                    lam *= 0.5
                    continue
                norm_t = max(abs(res_t[0]), abs(res_t[1]), abs(res_t[2]))
                if norm_t < norm:
                    b, res, aux, norm = trial, res_t, aux_t, norm_t
                    accepted = True
                    break
                lam *= 0.5
            iterations += 1
            if not accepted:
                if self._j_age == 0:
                    break  # fresh Jacobian and still stuck: keep best iterate
                self._build_jacobian(b, res, off)
                continue
            self._j_age += 1
        if not math.isfinite(norm):
            raise NumericError("non-finite fixed-point residual", t=t)
        if norm > self._tol and norm > 10.0 * max(initial_norm, self._tol):
            raise NumericError(
                f"fixed-point residual grew to {norm:.3e} V "
                f"after {iterations} sweeps (started at {initial_norm:.3e} V)",
                t=t,
            )
        return b, res, aux, norm, iterations

    # -- public stepping interface -------------------------------------------

    @property
    def time(self):
        """Instant of the next emitted sample."""
        return self.t0 + self._k * self.sampling_period

    @property
    def state(self):
        return self._z

    @property
    def port_resistances(self):
        return {
            "R1": self._r1,
            "R2": self._r2,
            "R3": self._r3,
            "R4": self._r4,
            "R5": self._r5,
            "R6": self._r6,
            "R7": self._r7,
            "R8": self._r8,
            "R9": self._r9,
        }

    def step(self, e):
        """Advance one sampling instance under source EMF e; emit a record."""
        t = self.time
        e = float(e)
        out0 = self._propagate(0.0, 0.0, 0.0, e, self._b_ce, self._b_ct)
        off = (out0[0], out0[1], out0[2], out0[3])
        b, res, aux, norm, iterations = self._newton(off, t)

        final = self._propagate(b[0], b[1], b[2], e, self._b_ce, self._b_ct)
        a_s, a_re, a_rt, u_term, i_term, a_ce, a_ct = final
        u_s = 0.5 * (a_s + b[0])
        u_e = 0.5 * (a_re + b[1])
        u_t = 0.5 * (a_rt + b[2])

        # commit delays and the shared-state store exactly once per instance
        if self._with_caps:
            self._b_ce = a_ce
            self._b_ct = a_ct
        self._integrator.commit(aux["f"])
        stored = self._integrator.stored_wave
        if stored < -1e-4 or stored > 1.0 + 1e-4:
            raise NumericError(f"state left [0, 1] by more than 1e-4: {stored}", t=t)
        self._integrator.stored_wave = min(max(stored, 0.0), 1.0)
        self._z = aux["z"]
        self._b = b
        self._k += 1

        self.last_port_residual = norm
        self.last_decomposition_residual = abs(u_term - (u_s + u_e + u_t))
        self.last_iterations = iterations
        self.last_resistances = (aux["r_s"], aux["r_e"], aux["r_t"])

        if abs(u_term) > SMALL_SIGNAL_V:
            g_eff = i_term / u_term
        else:
            g_eff = 1.0 / (aux["r_s"] + aux["r_e"] + aux["r_t"])
        return TraceRecord(
            t=t,
            e=e,
            u=u_term,
            i=i_term,
            z=(self._z,),
            g_hat=g_eff,
            u_splits=(u_s, u_e, u_t),
        )
