import dataclasses
import math

import numpy as np
import pytest

from qfcsim.cli import default_config_path
from qfcsim.constants import C_LIGHT
from qfcsim.params import (
    ConfigError,
    coupling_from_gain,
    derive_params,
    dump_config,
    interaction_strength,
    load_config,
    molecule_count,
    parse_config_text,
    quantization_volume,
    with_pulse_energy,
)


def test_default_config_passes_invariants(default_cfg):
    default_cfg.validate()
    assert default_cfg.pressure == 70e5  # bar -> Pa conversion
    assert default_cfg.raman_shift == pytest.approx(2 * math.pi * 1.2457e14)


def test_gamma_t2_consistency(default_cfg):
    assert 0.995 <= default_cfg.damping_gamma * default_cfg.t2 <= 1.005


# --- single-operation reference values ---------------------------------------

def test_molecule_count_reference():
    n = molecule_count(70e5, 8.7723e-10, 298.0)
    assert n == pytest.approx(1.4925e18, rel=1e-3)


def test_molecule_count_linearity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p, v, t = rng.uniform(0.1, 10, size=3)
        base = molecule_count(p, v, t)
        assert molecule_count(2 * p, v, t) == pytest.approx(2 * base, rel=1e-14)
        assert molecule_count(p, 3 * v, t) == pytest.approx(3 * base, rel=1e-14)
        assert molecule_count(p, v, 2 * t) == pytest.approx(base / 2, rel=1e-14)


@pytest.mark.parametrize("bad", [(-1, 1, 1), (1, 0, 1), (1, 1, -300)])
def test_molecule_count_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        molecule_count(*bad)


def test_quantization_volume_reference():
    v = quantization_volume(8.5432e-9, 9.5033e-9)
    assert v == pytest.approx(2.434e-8, rel=2e-3)


def test_quantization_volume_scalings():
    assert quantization_volume(2.0, 3.0) == pytest.approx(
        2 * quantization_volume(1.0, 3.0)
    )
    assert quantization_volume(1.0, 1.0) == pytest.approx(C_LIGHT)


def test_coupling_from_gain_reference():
    n_rho = 1.4925e18 / 8.7723e-10
    omega_s = 2 * math.pi * (2.8176e14 - 1.2457e14)
    omega_m = 2 * math.pi * (3.3495e14 - 1.2457e14)
    k1p = coupling_from_gain(9.7644e-12, 1.0320e10, n_rho, omega_s)
    k1u = coupling_from_gain(1.3233e-11, 1.0320e10, n_rho, omega_m)
    assert k1p == pytest.approx(-8.9518e-8, rel=2e-3)
    assert k1u == pytest.approx(-9.0080e-8, rel=2e-3)


def test_coupling_sqrt_scaling():
    base = coupling_from_gain(1e-12, 1e10, 1e27, 1e15)
    assert coupling_from_gain(4e-12, 1e10, 1e27, 1e15) == pytest.approx(2 * base)


def test_interaction_strength_reference():
    vq = 2.434e-8
    g_s = interaction_strength(-8.9518e-8, 2.8176e14, 1.5719e14, vq)
    g_u = interaction_strength(-9.0080e-8, 3.3495e14, 2.1038e14, vq)
    assert g_s == pytest.approx(2.8962e-8, rel=3e-3)
    assert g_u == pytest.approx(3.6760e-8, rel=3e-3)


def test_interaction_strength_inverse_volume():
    base = interaction_strength(-1e-8, 2e14, 1e14, 1e-8)
    assert interaction_strength(-1e-8, 2e14, 1e14, 2e-8) == pytest.approx(base / 2)


def test_interaction_strength_sign_check():
    with pytest.raises(ValueError):
        interaction_strength(+1e-8, 2e14, 1e14, 1e-8)


# --- derive_params ------------------------------------------------------------

def test_derive_reference_values(default_params):
    assert default_params.n_molecules == pytest.approx(1.4925e18, rel=1e-3)
    assert default_params.alpha_p0 == pytest.approx(2.48e7, rel=5e-3)
    assert default_params.n_photons == pytest.approx(6.1598e14, rel=1e-3)
    assert default_params.g_s > 0 and default_params.g_u > 0


def test_derive_energy_scaling(default_cfg, default_params):
    boosted = derive_params(
        with_pulse_energy(default_cfg, 4 * default_cfg.pulse_energy)
    )
    assert boosted.alpha_p0 == pytest.approx(2 * default_params.alpha_p0, rel=1e-14)


def test_derive_deterministic(default_cfg):
    a = derive_params(default_cfg)
    b = derive_params(default_cfg)
    for field in dataclasses.fields(a):
        assert getattr(a, field.name) == getattr(b, field.name)


def test_config_round_trip(default_cfg):
    again = parse_config_text(dump_config(default_cfg), origin="<round-trip>")
    for field in dataclasses.fields(default_cfg):
        a, b = getattr(default_cfg, field.name), getattr(again, field.name)
        assert a == pytest.approx(b, rel=1e-12)


# --- error paths ----------------------------------------------------------------

def _default_text():
    with open(default_config_path()) as fh:
        return fh.read()


def test_missing_key_names_it():
    text = "\n".join(
        line for line in _default_text().splitlines() if not line.startswith("t2_s")
    )
    with pytest.raises(ConfigError, match="t2_s"):
        parse_config_text(text)


def test_negative_pressure_rejected():
    text = _default_text().replace("pressure_bar             = 70", "pressure_bar = -1")
    with pytest.raises(ConfigError, match="pressure"):
        parse_config_text(text)


def test_unknown_key_named():
    with pytest.raises(ConfigError, match="not_a_key"):
        parse_config_text(_default_text() + "\nnot_a_key = 3\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config_text(_default_text() + "\ntemperature_K = 300\n")


def test_non_numeric_value_rejected():
    text = _default_text().replace("= 298", "= room")
    with pytest.raises(ConfigError, match="non-numeric"):
        parse_config_text(text)


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config("/nonexistent/qfcsim.cfg")


def test_resonance_violation_detected():
    text = _default_text().replace("nu_stokes_hz             = 1.5719e14",
                                   "nu_stokes_hz = 1.60e14")
    with pytest.raises(ConfigError, match="resonance"):
        parse_config_text(text)


def test_optional_keys_accepted():
    cfg = parse_config_text(_default_text() + "\nstokes_seed = 2.5\n")
    assert cfg.stokes_seed == 2.5
    assert parse_config_text(_default_text()).stokes_seed == 1.0  # default
