"""Sample-rate emulation of memristive devices on wave-digital principles."""

from .errors import (
    AnalysisError,
    ConfigurationError,
    DomainError,
    FormatError,
    IdentificationError,
    NumericError,
    PassivityError,
    WdmemError,
)
from .wdf import (
    FixedPointConfig,
    MemristivePort,
    ParallelAdaptor3,
    Port,
    SeriesAdaptor3,
    WaveIntegrator,
    integrator_step,
    kirchhoff_to_wave,
    memristive_port_step,
    reflection_coefficient,
    resistive_source_wave,
    wave_to_kirchhoff,
)
from .models import (
    CharacteristicCurve,
    CurveMemristor,
    HpMemristor,
    HpParameters,
    MultilevelMemristor,
    MultilevelParameters,
    binary_switch_curve,
    continuous_curve,
    curve_model_from_characteristic,
    hp_lambda,
    hp_lambda_inverse,
    hp_resistance_of_charge,
    hp_state_derivative,
    hp_window,
    multilevel_h,
    multilevel_state_derivative,
)
from .identify import (
    SampleTrace,
    build_characteristic,
    cumulative_integral,
    identify_trace,
    memductance_from_qphi,
    resample_uniform,
)
from .scenario import (
    Excitation,
    Trace,
    TraceRecord,
    area_report,
    hysteresis_area,
    loop_area,
    run_scenario,
    sine_sample,
    sweep_frequencies,
    triangular_sample,
)
from .dbmd import (
    DbmdNetwork,
    DbmdParameters,
    dbmd_state_derivative,
    dbmd_window,
    electrolyte_resistance,
    schottky_resistance,
    tunnel_resistance,
)
from . import presets

__all__ = [
    "AnalysisError",
    "ConfigurationError",
    "DomainError",
    "FormatError",
    "IdentificationError",
    "NumericError",
    "PassivityError",
    "WdmemError",
    "FixedPointConfig",
    "MemristivePort",
    "ParallelAdaptor3",
    "Port",
    "SeriesAdaptor3",
    "WaveIntegrator",
    "integrator_step",
    "kirchhoff_to_wave",
    "memristive_port_step",
    "reflection_coefficient",
    "resistive_source_wave",
    "wave_to_kirchhoff",
    "CharacteristicCurve",
    "CurveMemristor",
    "HpMemristor",
    "HpParameters",
    "MultilevelMemristor",
    "MultilevelParameters",
    "binary_switch_curve",
    "continuous_curve",
    "curve_model_from_characteristic",
    "hp_lambda",
    "hp_lambda_inverse",
    "hp_resistance_of_charge",
    "hp_state_derivative",
    "hp_window",
    "multilevel_h",
    "multilevel_state_derivative",
    "SampleTrace",
    "build_characteristic",
    "cumulative_integral",
    "identify_trace",
    "memductance_from_qphi",
    "resample_uniform",
    "Excitation",
    "Trace",
    "TraceRecord",
    "area_report",
    "hysteresis_area",
    "loop_area",
    "run_scenario",
    "sine_sample",
    "sweep_frequencies",
    "triangular_sample",
    "DbmdNetwork",
    "DbmdParameters",
    "dbmd_state_derivative",
    "dbmd_window",
    "electrolyte_resistance",
    "schottky_resistance",
    "tunnel_resistance",
    "presets",
]

__version__ = "0.1.0"
