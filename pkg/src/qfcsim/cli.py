"""Command-line front end: derive, propagate, convert, scan, validate.

Outputs are plain CSV (comma separated, header row, LF endings, 12
significant digits) so results can be diffed and replotted; reports are
fixed-format text.  Exit codes: 0 success, 1 validation failure, 2
usage/configuration error.  The configuration is resolved from --config,
then the QFCSIM_CONFIG environment variable, then the packaged default
(70-bar H2 experiment card).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from importlib import resources
from multiprocessing import Pool

import numpy as np

from .constants import C_LIGHT
from .conversion import ConversionTrace, conversion_trace
from .params import (
    ConfigError,
    ExperimentConfig,
    derive_params,
    load_config,
    with_pulse_energy,
)
from .srs import XI_MODES, propagate_fields
from .validation import REFERENCE_PARAMS, gap_table, run_all_checks

__all__ = ["main", "default_config_path"]

ENV_CONFIG = "QFCSIM_CONFIG"
DEFAULT_STEPS = 4000

# display-only wavelength references (m) for the derive report
_WAVELENGTH_REFS = {
    "freq_pump": ("lambda_pump", 1.064e-6),
    "freq_stokes": ("lambda_stokes", 1.9072e-6),
    "freq_mixing": ("lambda_mixing", 1.425e-6),
    "freq_up": ("lambda_up", 8.9503e-7),
}


def default_config_path() -> str:
    """Path of the packaged default configuration."""
    return str(resources.files("qfcsim").joinpath("data/h2_70bar.cfg"))


def _resolve_config(path_arg: str | None) -> str:
    if path_arg:
        return path_arg
    env = os.environ.get(ENV_CONFIG)
    if env:
        return env
    return default_config_path()


def _fmt(value: float) -> str:
    return f"{value:.11e}"


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


# --- subcommands -------------------------------------------------------------

def cmd_derive(args) -> int:
    cfg = load_config(_resolve_config(args.config))
    params = derive_params(cfg)
    lines = [
        f"derived parameters ({_resolve_config(args.config)})",
        f"{'parameter':<22} {'value':>16} {'unit':<20} {'reference':>14} {'dev':>8}",
    ]
    for field, (ref, _tol, unit) in REFERENCE_PARAMS.items():
        val = getattr(params, field)
        dev = abs(val / ref - 1.0)
        lines.append(
            f"{field:<22} {val:>16.6e} {unit or '-':<20} {ref:>14.6e} {dev:>7.3%}"
        )
    for freq_field, (name, ref) in _WAVELENGTH_REFS.items():
        lam = C_LIGHT / getattr(cfg, freq_field)
        dev = abs(lam / ref - 1.0)
        lines.append(f"{name:<22} {lam:>16.6e} {'m':<20} {ref:>14.6e} {dev:>7.3%}")
    for field, unit in (("number_density", "1/m^3"),
                        ("collective_gain", "1/s"),
                        ("conversion_coupling", "Hz")):
        lines.append(
            f"{field:<22} {getattr(params, field):>16.6e} {unit:<20} {'-':>14} {'-':>8}"
        )
    print("\n".join(lines))
    return 0


def cmd_propagate(args) -> int:
    cfg = load_config(_resolve_config(args.config))
    params = derive_params(cfg)
    profile = propagate_fields(params, cfg, n_steps=args.steps, xi_mode=args.xi_mode)
    _write_csv(
        args.out,
        ["z_m", "alpha_p_norm", "alpha_s_norm", "phi_rad", "xi_abs_over_Nhalf", "w"],
        [
            profile.z_grid,
            profile.alpha_p / params.alpha_p0,
            profile.alpha_s / params.alpha_p0,
            profile.phi,
            profile.xi_abs / (params.n_molecules / 2.0),
            profile.inversion,
        ],
    )
    print(f"wrote {len(profile.z_grid)} rows to {args.out}")
    return 0


def _trace_for(cfg: ExperimentConfig, n_steps: int, xi_mode: str) -> ConversionTrace:
    params = derive_params(cfg)
    profile = propagate_fields(params, cfg, n_steps=n_steps, xi_mode=xi_mode)
    return conversion_trace(profile, params)


def crossing_z(trace: ConversionTrace) -> float:
    """Fiber position where the two concurrences meet (argmin |c_im - c_iu|)."""
    return float(trace.z[int(np.argmin(np.abs(trace.c_im - trace.c_iu)))])


def cmd_convert(args) -> int:
    cfg = load_config(_resolve_config(args.config))
    trace = _trace_for(cfg, args.steps, args.xi_mode)
    _write_csv(
        args.out,
        ["z_m", "theta_rad", "n_i", "n_m", "n_u", "c_im", "c_iu", "eof_im", "eof_iu"],
        [trace.z, trace.theta, trace.n_i, trace.n_m, trace.n_u,
         trace.c_im, trace.c_iu, trace.eof_im, trace.eof_iu],
    )
    print(
        f"wrote {len(trace.z)} rows to {args.out}; "
        f"concurrence crossing at z = {crossing_z(trace):.4f} m"
    )
    return 0


@dataclass
class ScanResult:
    """Concurrence traces over a pump-energy sweep on a shared z grid.

    ``c_im`` and ``c_iu`` are (energy, z) matrices; ``crossing_z[k]`` is the
    argmin of |c_im - c_iu| on the trace grid for energy k (the fiber end
    when no crossing occurs inside).
    """

    energies: np.ndarray
    crossing_z: np.ndarray
    z: np.ndarray
    c_im: np.ndarray
    c_iu: np.ndarray


def _scan_worker(task):
    cfg, energy, n_steps, xi_mode = task
    trace = _trace_for(with_pulse_energy(cfg, energy), n_steps, xi_mode)
    return trace.z, trace.c_im, trace.c_iu, crossing_z(trace)


def run_scan(
    cfg: ExperimentConfig,
    energies: np.ndarray,
    n_steps: int,
    xi_mode: str,
    jobs: int = 1,
) -> ScanResult:
    """Per-energy conversion traces, collected in energy order."""
    tasks = [(cfg, float(e), n_steps, xi_mode) for e in energies]
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            results = pool.map(_scan_worker, tasks)  # ordered by energy index
    else:
        results = [_scan_worker(t) for t in tasks]
    return ScanResult(
        energies=np.asarray(energies, dtype=float),
        crossing_z=np.array([r[3] for r in results]),
        z=results[0][0],
        c_im=np.vstack([r[1] for r in results]),
        c_iu=np.vstack([r[2] for r in results]),
    )


def cmd_scan(args) -> int:
    if not (0.0 < args.e_min < args.e_max):
        raise ConfigError(
            f"need 0 < e_min < e_max, got e_min = {args.e_min}, e_max = {args.e_max}"
        )
    if args.scan_steps < 2:
        raise ConfigError(f"scan needs at least 2 energies, got {args.scan_steps}")
    cfg = load_config(_resolve_config(args.config))
    if args.spacing == "log":
        energies = np.geomspace(args.e_min, args.e_max, args.scan_steps)
    else:
        energies = np.linspace(args.e_min, args.e_max, args.scan_steps)

    result = run_scan(cfg, energies, args.steps, args.xi_mode, jobs=args.jobs)
    n_z = result.z.size
    cols_e, cols_z, cols_cim, cols_ciu, cols_cross = [], [], [], [], []
    for k, energy in enumerate(result.energies):
        cols_e.append(np.full(n_z, energy))
        cols_z.append(result.z)
        cols_cim.append(result.c_im[k])
        cols_ciu.append(result.c_iu[k])
        cols_cross.append(np.full(n_z, result.crossing_z[k]))
    _write_csv(
        args.out,
        ["energy_J", "z_m", "c_im", "c_iu", "crossing_z_m"],
        [np.concatenate(c) for c in (cols_e, cols_z, cols_cim, cols_ciu, cols_cross)],
    )
    print(f"wrote {len(result.energies)} energies x {n_z} rows to {args.out}")
    return 0


def cmd_validate(args) -> int:
    cfg = load_config(_resolve_config(args.config))
    print("semiclassical gap at fixed rotation angle:")
    print(gap_table())
    print()
    checks = run_all_checks(
        cfg, n_max=args.n_max, perturb_gu_percent=args.perturb_gu
    )
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name:<{width}} {c.detail}")
    n_pass = sum(c.passed for c in checks)
    print(f"\n{n_pass}/{len(checks)} checks passed")
    return 0 if n_pass == len(checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfcsim",
        description=(
            "Raman coherence buildup and entanglement-preserving frequency "
            "conversion in a gas-filled hollow-core fiber"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", help=f"configuration file (default: ${ENV_CONFIG} "
                                        "or the packaged 70-bar H2 card)")

    p = sub.add_parser("derive", help="print derived constants against references")
    add_config(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("propagate", help="pump/Stokes/coherence profile CSV")
    add_config(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--xi-mode", choices=XI_MODES, default="eom")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("convert", help="photon-number / concurrence trace CSV")
    add_config(p)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--xi-mode", choices=XI_MODES, default="eom")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("scan", help="pump-energy scan of the concurrence trace")
    add_config(p)
    p.add_argument("--out", required=True)
    p.add_argument("--e-min", type=float, required=True, help="J")
    p.add_argument("--e-max", type=float, required=True, help="J")
    p.add_argument("--scan-steps", type=int, default=16)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--xi-mode", choices=XI_MODES, default="eom")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="run cross-checks and invariant suites")
    add_config(p)
    p.add_argument("--n-max", type=int, default=1024,
                   help="largest molecule number for dense oracle checks")
    p.add_argument("--perturb-gu", type=float, default=0.0,
                   help="debug: perturb the derived conversion strength by this "
                        "percentage before checking (forces failures)")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
