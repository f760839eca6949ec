"""Experiment configuration and derived physical parameters.

The configuration mirrors the published parameter set of a 70-bar H2-filled
anti-resonant fiber frequency-conversion experiment: gas state, pump pulse,
fiber geometry, Raman transition data and the two phenomenological gain
coefficients.  From those inputs this module derives every constant the
dynamics needs: molecule numbers, the quantization volume, the microscopic
couplings kappa_1 and the interaction strengths G for both the pump/Stokes
and the mixing/up-converted pairs.

Frequencies are stored as ordinary frequencies nu (Hz) exactly as tabulated;
conversion to angular frequency happens in exactly one place
(:func:`load_config` for the Raman shift, ``2*pi*nu`` locally where an
angular frequency is required) to keep factor-of-2*pi bugs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .constants import BOLTZMANN_K, C_LIGHT, EPSILON_0, HBAR, PLANCK_H

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "DerivedParams",
    "load_config",
    "parse_config_text",
    "dump_config",
    "molecule_count",
    "quantization_volume",
    "coupling_from_gain",
    "interaction_strength",
    "collective_gain",
    "conversion_enhancement",
    "derive_params",
]


class ConfigError(ValueError):
    """Raised for malformed configuration files or invariant violations."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Raw physical inputs, SI units throughout.

    ``raman_shift`` is angular (rad/s); all ``freq_*`` entries are ordinary
    frequencies (Hz).  ``delta_beta`` is the phase mismatch beta_P - beta_S
    of the propagation constants (1/m); zero means phase matched.
    """

    pressure: float             # Pa
    temperature: float          # K
    pulse_energy: float         # J
    pulse_width: float          # s
    fiber_length: float         # m
    fiber_diameter: float       # m
    fiber_area_total: float     # m^2
    fiber_volume: float         # m^3
    mode_area_lp01: float       # m^2
    raman_shift: float          # rad/s
    t2: float                   # s
    damping_gamma: float        # 1/s
    freq_pump: float            # Hz
    freq_stokes: float          # Hz
    freq_mixing: float          # Hz
    freq_up: float              # Hz
    gain_pump_stokes: float     # m/W
    gain_mixing_up: float       # m/W
    delta_beta: float = 0.0     # 1/m
    stokes_seed: float = 1.0    # photons; semiclassical surrogate for noise

    def validate(self) -> None:
        """Check positivity and mutual-consistency invariants."""
        for f in fields(self):
            if f.name == "delta_beta":
                continue
            value = getattr(self, f.name)
            if not (value > 0.0) or not math.isfinite(value):
                raise ConfigError(f"{f.name} must be strictly positive, got {value!r}")
        if not math.isfinite(self.delta_beta):
            raise ConfigError(f"delta_beta must be finite, got {self.delta_beta!r}")

        shift_nu = self.raman_shift / (2.0 * math.pi)
        if abs((self.freq_pump - self.freq_stokes) / shift_nu - 1.0) > 5e-3:
            raise ConfigError(
                "Raman resonance violated: nu_pump - nu_stokes = "
                f"{self.freq_pump - self.freq_stokes:.6e} Hz, expected the Raman "
                f"shift {shift_nu:.6e} Hz within 0.5%"
            )
        if abs((self.freq_up - self.freq_mixing) / shift_nu - 1.0) > 5e-3:
            raise ConfigError(
                "conversion resonance violated: nu_up - nu_mixing = "
                f"{self.freq_up - self.freq_mixing:.6e} Hz, expected the Raman "
                f"shift {shift_nu:.6e} Hz within 0.5%"
            )
        if abs(self.damping_gamma * self.t2 - 1.0) > 5e-3:
            raise ConfigError(
                f"gamma_hz * t2_s = {self.damping_gamma * self.t2:.6f}, "
                "expected 1 within 0.5% (Gamma is the inverse dephasing time)"
            )


@dataclass(frozen=True)
class DerivedParams:
    """Constants computed from an :class:`ExperimentConfig`.

    ``g_s`` and ``g_u`` are the single-molecule interaction strengths of the
    pump/Stokes and mixing/up-converted pairs.  ``collective_gain`` and
    ``conversion_coupling`` are the effective collective couplings used by
    the propagation model; see :func:`collective_gain` and
    :func:`conversion_enhancement` for how they are fixed.
    """

    n_molecules: float          # molecules inside the fiber volume
    number_density: float       # 1/m^3
    quant_volume: float         # m^3
    kappa1_p: float             # m^2 C^2 J^-2 s^-1 (negative)
    kappa1_u: float             # m^2 C^2 J^-2 s^-1 (negative)
    g_s: float                  # Hz
    g_u: float                  # Hz
    alpha_p0: float             # initial pump coherent amplitude
    n_photons: float            # pump photons per pulse
    collective_gain: float      # 1/s, collective field-molecule coupling
    conversion_coupling: float  # Hz, effective mixing/up coupling g_u * eta


def molecule_count(pressure: float, volume: float, temperature: float) -> float:
    """Number of gas molecules in ``volume`` from the ideal gas law, P V / (k_B T)."""
    if not (pressure > 0 and volume > 0 and temperature > 0):
        raise ValueError("pressure, volume and temperature must be positive")
    return pressure * volume / (BOLTZMANN_K * temperature)


def quantization_volume(pulse_width: float, fiber_area_total: float) -> float:
    """Quantization volume c * T_width * A_fiber swept by the pulse."""
    if not (pulse_width > 0 and fiber_area_total > 0):
        raise ValueError("pulse_width and fiber_area_total must be positive")
    return C_LIGHT * pulse_width * fiber_area_total


def coupling_from_gain(
    gain: float, damping_gamma: float, number_density: float, omega_lower: float
) -> float:
    """Microscopic coupling kappa_1 from a measured steady-state gain coefficient.

    kappa_1 = -sqrt(2 gamma c^2 Gamma eps0^2 / (N_rho hbar omega_lower)),
    where ``omega_lower`` is the angular frequency of the lower (red) sideband
    of the pair: omega_P - Omega for pump/Stokes, omega_U - Omega for
    mixing/up-conversion.  The sign convention is negative.
    """
    if not (gain > 0 and damping_gamma > 0 and number_density > 0 and omega_lower > 0):
        raise ValueError("all inputs to coupling_from_gain must be positive")
    return -math.sqrt(
        2.0 * gain * C_LIGHT**2 * damping_gamma * EPSILON_0**2
        / (number_density * HBAR * omega_lower)
    )


def interaction_strength(
    kappa1: float, nu_a: float, nu_b: float, quant_volume: float
) -> float:
    """Two-photon interaction strength G = -kappa_1 h sqrt(nu_a nu_b) / (2 eps0 V)."""
    if not (quant_volume > 0):
        raise ValueError("quant_volume must be positive")
    if not (kappa1 < 0):
        raise ValueError("kappa1 must be negative (sign convention)")
    if not (nu_a > 0 and nu_b > 0):
        raise ValueError("frequencies must be positive")
    return -kappa1 * PLANCK_H * math.sqrt(nu_a * nu_b) / (2.0 * EPSILON_0 * quant_volume)


def conversion_enhancement(cfg: ExperimentConfig) -> float:
    """Geometric collective-enhancement factor for the conversion coupling.

    The single-molecule strengths g_s, g_u are quoted per molecule in the
    quantization volume V = c T A_fiber, while the coherence amplitude xi is
    reported per molecule in the fiber volume.  A mixing photon traversing
    the fiber therefore sees (V / V_fiber) times more coherently prepared
    molecules than the fiber-volume count, concentrated at the LP01 mode
    intensity, which is (A_fiber / A_01) above the fiber-area average:

        eta = (V / V_fiber) * (A_fiber / A_01)

    This single dimensionless number is the only place the modal geometry
    enters the conversion dynamics.
    """
    vq = quantization_volume(cfg.pulse_width, cfg.fiber_area_total)
    return (vq / cfg.fiber_volume) * (cfg.fiber_area_total / cfg.mode_area_lp01)


def collective_gain(cfg: ExperimentConfig, g_s: float) -> float:
    """Collective field-molecule coupling g_c (1/s) for the Raman field equations.

    The model is closed by requiring that the small-signal Stokes growth rate
    reproduce the tabulated gain coefficient at the physical pump intensity
    I_P = E / (T_width A_01):

        target amplitude growth  a0 = gamma_ps * I_P / 2      [1/m]

    In the co-moving (z = c t) picture the molecular coherence lags the
    exponentially growing beat note, which throttles the realized growth a
    of a coupling g_c below its adiabatic value:  a (a c + Gamma) = a_s c
    Gamma with a_s the adiabatic rate.  Solving for the coupling that makes
    the realized rate equal a0 gives the lag compensation (1 + a0 c / Gamma):

        g_c = g_s * N_rho * V * (A_fiber / A_01) * (1 + a0 c / Gamma)

    In the dephasing-dominated limit a0 c << Gamma this reduces exactly to
    the steady-state Raman gain gamma_ps * I_P.  This function is the single
    point where the field-propagation closure is fixed.
    """
    n_rho = cfg.pressure / (BOLTZMANN_K * cfg.temperature)
    vq = quantization_volume(cfg.pulse_width, cfg.fiber_area_total)
    intensity = cfg.pulse_energy / (cfg.pulse_width * cfg.mode_area_lp01)
    a0 = 0.5 * cfg.gain_pump_stokes * intensity
    lag = 1.0 + a0 * C_LIGHT / cfg.damping_gamma
    return g_s * n_rho * vq * (cfg.fiber_area_total / cfg.mode_area_lp01) * lag


def derive_params(cfg: ExperimentConfig) -> DerivedParams:
    """Compute every derived constant from a validated configuration."""
    cfg.validate()
    n_mol = molecule_count(cfg.pressure, cfg.fiber_volume, cfg.temperature)
    n_rho = n_mol / cfg.fiber_volume
    vq = quantization_volume(cfg.pulse_width, cfg.fiber_area_total)

    omega_p = 2.0 * math.pi * cfg.freq_pump
    omega_u = 2.0 * math.pi * cfg.freq_up
    k1p = coupling_from_gain(
        cfg.gain_pump_stokes, cfg.damping_gamma, n_rho, omega_p - cfg.raman_shift
    )
    k1u = coupling_from_gain(
        cfg.gain_mixing_up, cfg.damping_gamma, n_rho, omega_u - cfg.raman_shift
    )
    g_s = interaction_strength(k1p, cfg.freq_pump, cfg.freq_stokes, vq)
    g_u = interaction_strength(k1u, cfg.freq_up, cfg.freq_mixing, vq)

    n_photons = cfg.pulse_energy / (PLANCK_H * cfg.freq_pump)
    return DerivedParams(
        n_molecules=n_mol,
        number_density=n_rho,
        quant_volume=vq,
        kappa1_p=k1p,
        kappa1_u=k1u,
        g_s=g_s,
        g_u=g_u,
        alpha_p0=math.sqrt(n_photons),
        n_photons=n_photons,
        collective_gain=collective_gain(cfg, g_s),
        conversion_coupling=g_u * conversion_enhancement(cfg),
    )


# --- configuration file handling -------------------------------------------
#
# Flat "key = value" text, one entry per line, '#' starts a comment.
# pressure is given in bar and the Raman shift as an ordinary frequency
# (Omega / 2 pi); both are converted to SI here and nowhere else.

_REQUIRED_KEYS = {
    "pressure_bar": "pressure",
    "temperature_K": "temperature",
    "pulse_energy_J": "pulse_energy",
    "pulse_width_s": "pulse_width",
    "fiber_length_m": "fiber_length",
    "fiber_diameter_m": "fiber_diameter",
    "fiber_area_total_m2": "fiber_area_total",
    "fiber_volume_m3": "fiber_volume",
    "mode_area_lp01_m2": "mode_area_lp01",
    "raman_shift_hz": "raman_shift",
    "t2_s": "t2",
    "gamma_hz": "damping_gamma",
    "nu_pump_hz": "freq_pump",
    "nu_stokes_hz": "freq_stokes",
    "nu_mixing_hz": "freq_mixing",
    "nu_up_hz": "freq_up",
    "gain_pump_stokes_m_per_w": "gain_pump_stokes",
    "gain_mixing_up_m_per_w": "gain_mixing_up",
}
_OPTIONAL_KEYS = {
    "delta_beta_per_m": "delta_beta",
    "stokes_seed": "stokes_seed",
}
BAR_TO_PA = 1.0e5


def parse_config_text(text: str, origin: str = "<string>") -> ExperimentConfig:
    """Parse ``key = value`` configuration text into a validated config."""
    seen: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _REQUIRED_KEYS and key not in _OPTIONAL_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        try:
            seen[key] = float(value.strip())
        except ValueError:
            raise ConfigError(
                f"{origin}:{lineno}: non-numeric value for {key!r}: {value.strip()!r}"
            ) from None

    missing = [k for k in _REQUIRED_KEYS if k not in seen]
    if missing:
        raise ConfigError(f"{origin}: missing required key(s): {', '.join(missing)}")

    kwargs = {}
    for key, value in seen.items():
        field = _REQUIRED_KEYS.get(key) or _OPTIONAL_KEYS[key]
        if key == "pressure_bar":
            value *= BAR_TO_PA
        elif key == "raman_shift_hz":
            value *= 2.0 * math.pi  # the single nu -> omega conversion point
        kwargs[field] = value

    cfg = ExperimentConfig(**kwargs)
    cfg.validate()
    return cfg


def load_config(path) -> ExperimentConfig:
    """Load and validate a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"configuration file not found: {path}") from None
    return parse_config_text(text, origin=str(path))


def dump_config(cfg: ExperimentConfig) -> str:
    """Serialize a config back to file syntax (inverse of :func:`parse_config_text`)."""
    inverse = {
        "pressure_bar": cfg.pressure / BAR_TO_PA,
        "temperature_K": cfg.temperature,
        "pulse_energy_J": cfg.pulse_energy,
        "pulse_width_s": cfg.pulse_width,
        "fiber_length_m": cfg.fiber_length,
        "fiber_diameter_m": cfg.fiber_diameter,
        "fiber_area_total_m2": cfg.fiber_area_total,
        "fiber_volume_m3": cfg.fiber_volume,
        "mode_area_lp01_m2": cfg.mode_area_lp01,
        "raman_shift_hz": cfg.raman_shift / (2.0 * math.pi),
        "t2_s": cfg.t2,
        "gamma_hz": cfg.damping_gamma,
        "nu_pump_hz": cfg.freq_pump,
        "nu_stokes_hz": cfg.freq_stokes,
        "nu_mixing_hz": cfg.freq_mixing,
        "nu_up_hz": cfg.freq_up,
        "gain_pump_stokes_m_per_w": cfg.gain_pump_stokes,
        "gain_mixing_up_m_per_w": cfg.gain_mixing_up,
        "delta_beta_per_m": cfg.delta_beta,
        "stokes_seed": cfg.stokes_seed,
    }
    return "".join(f"{k} = {v:.17g}\n" for k, v in inverse.items())


def with_pulse_energy(cfg: ExperimentConfig, energy: float) -> ExperimentConfig:
    """Copy of ``cfg`` with a different pump pulse energy (used by energy scans)."""
    if not (energy > 0):
        raise ConfigError(f"pulse energy must be positive, got {energy!r}")
    return replace(cfg, pulse_energy=energy)
