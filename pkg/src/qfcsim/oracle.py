"""Exact finite-N treatment of conversion against a spin coherent ensemble.

For a molecular spin coherent state |s> of N two-level molecules, the
single-excitation conversion dynamics closes over doublets

    |1,1,0>|n>  <->  |1,0,1>|n-1>,   splitting  +- g_u sqrt(n(N-n+1)),

so the reduced idler-mixing and idler-up densities are governed by three
binomially weighted sums x, w, y.  Two independent routes compute them:

* :func:`exact_coefficients` evaluates the sums directly in log space with a
  two-sided truncation scan around the binomial peak (N up to 1e6);
* :func:`brute_force_coefficients` builds the dense joint photon-molecule
  state, rotates every doublet, and traces out molecules plus one photon
  mode numerically (N up to the dense cap).

Their agreement is the central correctness check of the whole package: the
semiclassical limit used at experimental scale (N ~ 1e18) replaces the sums
by x -> cos^2(theta)/2 etc. with theta = g_u |xi| t, |xi| = N|s|/(1+|s|^2),
and :func:`semiclassical_gap` / :func:`first_order_correction` quantify the
finite-N error of that replacement, which falls off as 1/N.

Phase conventions: sums are evaluated in the rotating frame with the spatial
phase-matching factor gauged away, so ``s`` carries the only physical phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import bloch
from .conversion import partial_trace

__all__ = [
    "N_MAX_EXACT",
    "TRUNCATION_RELATIVE",
    "CorrectionPoleError",
    "ReducedCoefficients",
    "exact_coefficients",
    "brute_force_coefficients",
    "semiclassical_xi",
    "semiclassical_coefficients",
    "semiclassical_gap",
    "first_order_correction",
    "density_im_from_coefficients",
    "density_iu_from_coefficients",
]

N_MAX_EXACT = 10**6
TRUNCATION_RELATIVE = 1e-18  # drop sum terms below this fraction of the peak


class CorrectionPoleError(ValueError):
    """Raised when the 1/N correction is evaluated at a drive-angle pole."""


@dataclass(frozen=True)
class ReducedCoefficients:
    """Entries (x, w, y) of the reduced idler-mixing / idler-up densities.

    x is the surviving mixing population, w the idler-mixing coherence, y the
    idler-up coherence; all bounded by 1/2 in magnitude.
    """

    x: float
    w: complex
    y: complex


def _binomial_log_weights(n_spins: int, s_mag: float):
    """log of binom(N,n) |s|^{2n} / (1+|s|^2)^N over n = 0..N (the pmf)."""
    n = np.arange(n_spins + 1)
    log_binom = gammaln(n_spins + 1) - gammaln(n + 1) - gammaln(n_spins - n + 1)
    if s_mag == 0.0:
        log_p = np.where(n == 0, 0.0, -np.inf)
        return log_binom + log_p - n_spins * 0.0
    return log_binom + 2.0 * n * np.log(s_mag) - n_spins * np.log1p(s_mag * s_mag)


def _truncation_window(log_w: np.ndarray, relative: float):
    """Contiguous index range around the weight peak above ``relative`` of it.

    The weight is unimodal in n, so scanning outward from the peak bounds the
    discarded tail by (number of dropped terms) * threshold.
    """
    if relative <= 0.0:
        return 0, log_w.size - 1
    peak = int(np.argmax(log_w))
    cut = log_w[peak] + math.log(relative)
    lo = peak
    while lo > 0 and log_w[lo - 1] >= cut:
        lo -= 1
    hi = peak
    while hi < log_w.size - 1 and log_w[hi + 1] >= cut:
        hi += 1
    return lo, hi


def exact_coefficients(
    n_spins: int,
    s: complex,
    g_u: float,
    t: float,
    truncation: float = TRUNCATION_RELATIVE,
) -> ReducedCoefficients:
    """Direct log-space evaluation of the x, w, y sums.

    ``truncation`` is the per-term cutoff relative to the peak binomial
    weight (0 disables truncation entirely).
    """
    if not (1 <= n_spins <= N_MAX_EXACT):
        raise ValueError(f"n_spins must be in [1, {N_MAX_EXACT}], got {n_spins}")
    tau = g_u * t
    s_mag = abs(s)
    log_w = _binomial_log_weights(n_spins, s_mag)
    lo, hi = _truncation_window(log_w, truncation)

    n = np.arange(lo, hi + 1)
    weights = np.exp(log_w[lo : hi + 1])
    # the weights form a probability distribution; dividing out their
    # numerically evaluated mass removes the common log-gamma rounding bias
    mass = float(np.sum(weights))
    weights /= mass
    angles = tau * np.sqrt(n * (n_spins - n + 1.0))
    cos_a = np.cos(angles)
    x = 0.5 * float(np.sum(weights * cos_a * cos_a))
    w = 0.5 * float(np.sum(weights * cos_a))

    if s_mag == 0.0:
        return ReducedCoefficients(x=x, w=complex(w), y=0.0 + 0.0j)

    # y couples neighboring levels; geometric-mean weight of n and n+1
    hi_y = min(hi, n_spins - 1)
    ny = np.arange(lo, hi_y + 1)
    log_wy = 0.5 * (log_w[lo : hi_y + 1] + log_w[lo + 1 : hi_y + 2])
    angles_y = tau * np.sqrt((ny + 1.0) * (n_spins - ny))
    y_mag = 0.5 * float(np.sum(np.exp(log_wy) * np.sin(angles_y))) / mass
    y = -1j * (s / s_mag) * y_mag
    return ReducedCoefficients(x=x, w=complex(w), y=y)


def brute_force_coefficients(
    n_spins: int, s: complex, g_u: float, t: float
) -> ReducedCoefficients:
    """Dense-evolution route: build, rotate, and trace the joint state.

    Starts from (|0,0,0> + |1,1,0>)/sqrt(2) times the spin coherent state,
    applies the per-doublet rotation exp(-i t kappa_n sigma_x) with
    kappa_n = g_u sqrt(n(N-n+1)), forms the photonic density matrix by
    tracing the molecules, then partial-traces one photon mode and reads
    the coefficients off the matrix entries.
    """
    if n_spins > bloch.N_MAX_DENSE:
        raise ValueError(
            f"n_spins = {n_spins} exceeds the dense cap {bloch.N_MAX_DENSE}"
        )
    amps = bloch.spin_coherent(n_spins, s).amps
    n = np.arange(n_spins + 1)
    kappa = np.sqrt(n * (n_spins - n + 1.0))
    cos_k = np.cos(g_u * t * kappa)
    sin_k = np.sin(g_u * t * kappa)

    # photon space idler x mixing x up (dim 8), molecular index as columns
    i000 = 0b000
    i110 = 0b110
    i101 = 0b101
    psi = np.zeros((8, n_spins + 1), dtype=complex)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    psi[i000] = amps * inv_sqrt2
    psi[i110] = amps * cos_k * inv_sqrt2
    psi[i101, :-1] = -1j * amps[1:] * sin_k[1:] * inv_sqrt2

    rho_photons = psi @ psi.conj().T  # molecules traced out
    rho_im = partial_trace(rho_photons, (2, 2, 2), keep=(0, 1))
    rho_iu = partial_trace(rho_photons, (2, 2, 2), keep=(0, 2))
    return ReducedCoefficients(
        x=float(rho_im[3, 3].real), w=complex(rho_im[3, 0]), y=complex(rho_iu[3, 0])
    )


def semiclassical_xi(n_spins: float, s: complex) -> float:
    """|xi| = N |s| / (1 + |s|^2), the coherence amplitude of |s>."""
    return n_spins * abs(s) / (1.0 + abs(s) ** 2)


def semiclassical_coefficients(n_spins: float, s: complex, g_u: float, t: float):
    """Large-N limits: x = cos^2(theta)/2, |w| = |cos theta|/2, |y| = |sin theta|/2."""
    theta = g_u * t * semiclassical_xi(n_spins, s)
    return 0.5 * math.cos(theta) ** 2, 0.5 * math.cos(theta), 0.5 * math.sin(theta)


def semiclassical_gap(n_spins: int, s: complex, g_u: float, t: float) -> float:
    """|w_exact - w_semiclassical| at matched drive parameters."""
    w_exact = exact_coefficients(n_spins, s, g_u, t).w
    _, w_sc, _ = semiclassical_coefficients(n_spins, s, g_u, t)
    return abs(w_exact - w_sc)


def first_order_correction(n_spins: int, s: complex, g_u: float, t: float) -> float:
    """Leading 1/N correction to w beyond the semiclassical limit.

    Writing the x/w sums as binomial averages with success probability
    p = |s|^2/(1+|s|^2) and expanding the summand about the mean occupation
    (including the mean shift of sqrt(n(N-n+1)) and the O(N) variance term)
    gives, with q = 1 - p and theta = g_u t N sqrt(p q):

        dw = [theta sin(theta) (1 - 4p) - theta^2 (q - p)^2 cos(theta)]
             / (16 N p q)

    The expression has poles where p q -> 0, i.e. where the Raman drive
    angle phi = atan|s| approaches a multiple of pi/2 (boundary cases of the
    pi/4 lattice); those are reported, not regularized.
    """
    if not (1 <= n_spins <= N_MAX_EXACT):
        raise ValueError(f"n_spins must be in [1, {N_MAX_EXACT}], got {n_spins}")
    s_mag = abs(s)
    p = s_mag**2 / (1.0 + s_mag**2)
    q = 1.0 - p
    # sin(2 phi) = 2 sqrt(p q) for phi = atan|s|
    if 2.0 * math.sqrt(p * q) < 1e-6:
        raise CorrectionPoleError(
            f"drive angle atan|s| = {math.atan(s_mag):.6g} rad sits at a "
            "pole of the 1/N correction (|s| -> 0 or infinity)"
        )
    theta = g_u * t * n_spins * math.sqrt(p * q)
    return (
        theta * math.sin(theta) * (1.0 - 4.0 * p)
        - theta**2 * (q - p) ** 2 * math.cos(theta)
    ) / (16.0 * n_spins * p * q)


def density_im_from_coefficients(coeff: ReducedCoefficients) -> np.ndarray:
    """Reduced idler-mixing density matrix built from (x, w)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5
    rho[2, 2] = 0.5 - coeff.x
    rho[3, 3] = coeff.x
    rho[3, 0] = coeff.w
    rho[0, 3] = np.conj(coeff.w)
    return rho


def density_iu_from_coefficients(coeff: ReducedCoefficients) -> np.ndarray:
    """Reduced idler-up density matrix built from (x, y)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5
    rho[2, 2] = coeff.x
    rho[3, 3] = 0.5 - coeff.x
    rho[3, 0] = coeff.y
    rho[0, 3] = np.conj(coeff.y)
    return rho
