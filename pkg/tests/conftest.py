import pytest

from wdmem import presets
from wdmem.dbmd import DbmdNetwork, DbmdParameters
from wdmem.wdf import FixedPointConfig


def dbmd_reference_parameters():
    d = presets.DBMD
    return DbmdParameters(
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


def dbmd_reference_network(sampling_period=None, **kwargs):
    d = presets.DBMD
    if sampling_period is None:
        sampling_period = d["T_s"]
    kwargs.setdefault("config", FixedPointConfig(n_i=int(d["n_i"]), tolerance=1e-10))
    kwargs.setdefault("z0", d["z0"])
    kwargs.setdefault("schottky_port_ohms", d["R1_ohm"])
    kwargs.setdefault("electrolyte_port_ohms", d["R3_ohm"])
    kwargs.setdefault("tunnel_port_ohms", d["R7_ohm"])
    kwargs.setdefault("source_resistance", presets.SOURCE_RESISTANCE_OHM)
    return DbmdNetwork(dbmd_reference_parameters(), sampling_period, **kwargs)


@pytest.fixture
def dbmd_params():
    return dbmd_reference_parameters()
