import math

import numpy as np
import pytest

from wdmem import (
    ConfigurationError,
    DomainError,
    FixedPointConfig,
    MemristivePort,
    NumericError,
    ParallelAdaptor3,
    PassivityError,
    Port,
    SeriesAdaptor3,
    WaveIntegrator,
    integrator_step,
    kirchhoff_to_wave,
    reflection_coefficient,
    resistive_source_wave,
    wave_to_kirchhoff,
)


class ConstantCurveModel:
    """Memristor stand-in with a fixed memductance."""

    def __init__(self, g, z0=0.0):
        self.g = g
        self.initial_state = z0

    def state_derivative(self, z, u):
        return u

    def memductance(self, z, u):
        return self.g


class VoltageDependentModel:
    """Mildly voltage-dependent memductance; contractive red loop."""

    def __init__(self, g0):
        self.g0 = g0
        self.initial_state = 0.0

    def state_derivative(self, z, u):
        return u

    def memductance(self, z, u):
        return self.g0 * (1.0 + 0.4 * math.tanh(u))


def test_kirchhoff_to_wave_examples():
    assert kirchhoff_to_wave(2.0, 1.0, 1.0) == (3.0, 1.0)
    assert kirchhoff_to_wave(1.0, 0.0, 5.0) == (1.0, 1.0)  # open circuit: a = b = u
    assert kirchhoff_to_wave(0.0, 1.0, 2.0) == (2.0, -2.0)  # short: antisymmetric


def test_wave_to_kirchhoff_examples():
    assert wave_to_kirchhoff(3.0, 1.0, 1.0) == (2.0, 1.0)
    assert wave_to_kirchhoff(0.0, 0.0, 7.0) == (0.0, 0.0)


def test_wave_mapping_round_trip():
    rng = np.random.default_rng(7)
    u = rng.normal(size=1000)
    i = rng.normal(size=1000)
    r = 10.0 ** rng.uniform(-3, 12, size=1000)
    a, b = kirchhoff_to_wave(u, i, r)
    u2, i2 = wave_to_kirchhoff(a, b, r)
    scale_u = np.maximum(np.abs(u), r * np.abs(i)) + 1e-300
    scale_i = np.maximum(np.abs(i), np.abs(u) / r) + 1e-300
    assert np.max(np.abs(u2 - u) / scale_u) <= 1e-12
    assert np.max(np.abs(i2 - i) / scale_i) <= 1e-12


def test_nonpositive_resistance_rejected():
    with pytest.raises(DomainError):
        kirchhoff_to_wave(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        wave_to_kirchhoff(1.0, 1.0, -2.0)
    with pytest.raises(DomainError):
        reflection_coefficient(1.0, 0.0)
    with pytest.raises(DomainError):
        Port(resistance=0.0)


def test_reflection_coefficient_examples():
    assert reflection_coefficient(0.0, 1.0) == 1.0
    assert reflection_coefficient(1.0 / 50.0, 50.0) == 0.0
    assert reflection_coefficient(3.0, 1.0) == -0.5


def test_reflection_passivity():
    rng = np.random.default_rng(11)
    g = 10.0 ** rng.uniform(-9, 6, size=5000)
    r = 10.0 ** rng.uniform(-3, 9, size=5000)
    rho = reflection_coefficient(g, r)
    assert np.all(np.abs(rho) < 1.0)
    with pytest.raises(PassivityError):
        reflection_coefficient(-1e-9, 1.0)


def test_port_voltage_current():
    port = Port(resistance=2.0, incident=3.0, reflected=1.0)
    assert port.voltage == 2.0
    assert port.current == 0.5


def test_fixed_point_config_validation():
    with pytest.raises(ConfigurationError):
        FixedPointConfig(n_i=0)
    with pytest.raises(ConfigurationError):
        FixedPointConfig(n_i=1, tolerance=0.0)
    cfg = FixedPointConfig(n_i=6, tolerance=1e-9)
    assert cfg.n_i == 6


def test_integrator_zero_drift():
    integ = WaveIntegrator(0.5, 1e-3)
    for _ in range(100):
        assert integ.step(0.0) == 0.5


def test_integrator_constant_drift():
    T = 1e-3
    c = 2.5
    integ = WaveIntegrator(0.25, T)
    for k in range(1000):
        z = integrator_step(integ, c)
        assert abs(z - (0.25 + c * k * T)) <= 1e-12


def test_integrator_cosine_period():
    # the integral of cos over a full period vanishes
    T = 1e-3
    integ = WaveIntegrator(0.0, T)
    z = 0.0
    for k in range(1001):
        z = integ.step(math.cos(2.0 * math.pi * k * T))
    assert abs(z) <= 1e-5


def test_integrator_matches_offline_trapezoid():
    rng = np.random.default_rng(42)
    f = rng.normal(size=300)
    T = 0.01
    integ = WaveIntegrator(0.3, T)
    read = np.array([integ.step(v) for v in f])
    oracle = 0.3 + np.concatenate(([0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * T)))
    assert np.max(np.abs(read - oracle)) <= 1e-12


def test_integrator_second_order():
    def max_err(T):
        integ = WaveIntegrator(0.0, T)
        worst = 0.0
        for k in range(int(round(1.0 / T)) + 1):
            t = k * T
            z = integ.step(math.cos(2.0 * math.pi * t))
            worst = max(worst, abs(z - math.sin(2.0 * math.pi * t) / (2.0 * math.pi)))
        return worst

    assert max_err(1e-3) / max_err(5e-4) >= 3.9


def test_integrator_port_resistance():
    integ = WaveIntegrator(0.0, 2e-3)
    assert integ.port_resistance == 1e-3
    assert integ.stored_wave == 0.0
    with pytest.raises(DomainError):
        WaveIntegrator(0.0, 0.0)


def test_integrator_vector_state():
    integ = WaveIntegrator(np.array([0.0, 1.0]), 0.5)
    z = integ.step(np.array([2.0, -2.0]))
    assert np.allclose(z, [0.0, 1.0])
    z = integ.step(np.array([2.0, -2.0]))
    assert np.allclose(z, [0.0 + 2.0 * 0.5, 1.0 - 2.0 * 0.5])


def test_series_adaptor_hand_example():
    ad = SeriesAdaptor3(1.0, 1.0)
    assert ad.r3 == 2.0
    assert ad.scatter(0.0, 0.0, 0.0) == (0.0, 0.0, 0.0)
    b1, b2, b3 = ad.scatter(1.0, 1.0, 0.0)
    assert (b1, b2, b3) == (0.0, 0.0, -2.0)
    assert ad.gamma_s == 0.5


def test_series_adaptor_r3_mismatch():
    with pytest.raises(ConfigurationError):
        SeriesAdaptor3(1.0, 2.0, r3=4.0)
    with pytest.raises(ConfigurationError):
        ParallelAdaptor3(1.0, 1.0, r3=1.0)
    ParallelAdaptor3(1.0, 1.0, r3=0.5)  # consistent value accepted


@pytest.mark.parametrize("cls", [SeriesAdaptor3, ParallelAdaptor3])
def test_adaptor_losslessness(cls):
    rng = np.random.default_rng(3)
    for _ in range(50):
        r1, r2 = 10.0 ** rng.uniform(-2, 4, size=2)
        ad = cls(r1, r2)
        a = rng.normal(size=(1000, 3))
        b = np.stack(ad.scatter(a[:, 0], a[:, 1], a[:, 2]), axis=1)
        resist = np.array(ad.resistances)
        power = np.sum(a * a / resist, axis=1) - np.sum(b * b / resist, axis=1)
        p_in = np.sum(a * a / resist, axis=1)
        assert np.max(np.abs(power)) <= 1e-10 * max(1.0, p_in.max())


@pytest.mark.parametrize("cls", [SeriesAdaptor3, ParallelAdaptor3])
def test_reflection_free_port_exact(cls):
    ad = cls(2.0, 3.0)
    rng = np.random.default_rng(5)
    for _ in range(100):
        a1, a2, a3 = rng.normal(size=3)
        b3_base = ad.scatter(a1, a2, a3)[2]
        b3_pert = ad.scatter(a1, a2, a3 + 1.234)[2]
        assert b3_base == b3_pert  # bit-exact independence from a3


def test_parallel_adaptor_paper_coefficient():
    ad = ParallelAdaptor3(2.0, 6.0)
    # gamma_p = R2/(R1 + R2) coincides with the conductance weight d1
    assert ad.gamma_p == ad.d1 == 0.75


def test_resistive_source_wave():
    assert resistive_source_wave(5.0, 0.1) == 5.0
    assert resistive_source_wave(0.0, 0.1) == 0.0
    with pytest.raises(DomainError):
        resistive_source_wave(1.0, 0.0)


def test_matched_termination():
    model = ConstantCurveModel(1.0 / 0.1)
    port = MemristivePort(model, 0.1, 1e-3)
    for a in (1.0, -2.0, 0.5):
        assert port.step(a) == 0.0


def test_open_circuit_port():
    model = ConstantCurveModel(0.0)
    port = MemristivePort(model, 0.1, 1e-3)
    assert port.step(1.0) == 1.0


def test_source_loop_oracle():
    # e = 5 V source with R0 = 0.1 matched to the port, G = 3 S device:
    # the analog loop gives i = e*G/(1 + R0*G) = 150/13 A
    model = ConstantCurveModel(3.0)
    port = MemristivePort(model, 0.1, 1e-3)
    a = resistive_source_wave(5.0, 0.1)
    b = port.step(a)
    u, i = wave_to_kirchhoff(a, b, 0.1)
    assert abs(i - 150.0 / 13.0) <= 1e-12 * 150.0 / 13.0
    assert abs(u - 50.0 / 13.0) <= 1e-12 * 50.0 / 13.0


def test_port_passivity_bound():
    rng = np.random.default_rng(9)
    for g in 10.0 ** rng.uniform(-6, 3, size=30):
        port = MemristivePort(ConstantCurveModel(g), 0.5, 1e-3)
        for a in rng.normal(size=10):
            assert abs(port.step(a)) <= abs(a) + 1e-15


def test_port_fixed_point_residual():
    # smooth 10 mHz drive on a voltage-dependent device: after six sweeps the
    # port equation residual stays below 1e-9 V (converged run as oracle)
    model = VoltageDependentModel(2.0)
    cfg = FixedPointConfig(n_i=6)
    port = MemristivePort(model, 0.5, 1e-3, cfg)
    oracle_port = MemristivePort(VoltageDependentModel(2.0), 0.5, 1e-3, FixedPointConfig(n_i=80))
    worst = 0.0
    worst_gap = 0.0
    for k in range(2000):
        t = k * 1e-3
        a = math.sin(2.0 * math.pi * 0.01 * t)
        b = port.step(a)
        b_ref = oracle_port.step(a)
        worst = max(worst, port.residual())
        worst_gap = max(worst_gap, abs(b - b_ref))
    assert worst <= 1e-9
    assert worst_gap <= 1e-9


def test_port_tolerance_early_exit():
    model = ConstantCurveModel(2.0)  # voltage-independent: one sweep suffices
    port = MemristivePort(model, 0.5, 1e-3, FixedPointConfig(n_i=50, tolerance=1e-12))
    port.step(1.0)
    assert port.residual() <= 1e-12


def test_port_rejects_bad_models():
    class NegativeG(ConstantCurveModel):
        def memductance(self, z, u):
            return -1e-3

    class NanG(ConstantCurveModel):
        def memductance(self, z, u):
            return float("nan")

    with pytest.raises(PassivityError):
        MemristivePort(NegativeG(0.0), 0.1, 1e-3).step(1.0)
    with pytest.raises(NumericError):
        MemristivePort(NanG(0.0), 0.1, 1e-3).step(1.0)


def test_port_clamps_rounding_negative_memductance():
    model = ConstantCurveModel(-5e-16)  # rounding-level negative is tolerated
    port = MemristivePort(model, 0.1, 1e-3)
    assert port.step(1.0) == 1.0  # treated as open circuit


def test_port_determinism():
    def run():
        port = MemristivePort(VoltageDependentModel(1.5), 0.1, 1e-3, FixedPointConfig(n_i=3))
        return [port.step(math.sin(0.01 * k)) for k in range(500)]

    assert run() == run()
