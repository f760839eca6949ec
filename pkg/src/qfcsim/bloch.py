"""Collective-spin (Dicke) algebra for N two-level molecules at small N.

States live in the symmetric spin-N/2 multiplet and are stored as N+1
complex amplitudes over |N/2, -N/2 + n>, n = 0..N.  This module provides
the exact ladder action, SU(2) disentangling of the Raman drive propagator

    exp(-i t (eta J+ + eta* J-)) = exp(s J+) exp(s0 Jz) exp(s1 J-),

the resulting spin coherent state, and <J-> whose expectation is the
coherence amplitude xi.  Everything here is exact arithmetic used by the
finite-N oracle; the experimental regime N ~ 1e18 is covered by the
semiclassical closed forms instead.

Binomials are evaluated through log-gamma and per-term exponentiation with
running-max stabilization, so amplitudes stay finite up to the dense cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "N_MAX_DENSE",
    "DickeVector",
    "DisentangleCoeffs",
    "DisentangleSingularity",
    "dicke_ground",
    "jz_matrix",
    "jplus_matrix",
    "jminus_matrix",
    "disentangle",
    "spin_coherent",
    "expect_jminus",
    "apply_jplus_n",
]

N_MAX_DENSE = 4096  # largest N for dense Dicke vectors


class DisentangleSingularity(ValueError):
    """Raised at the |eta| t = pi/2 caustic of the disentangling map."""


@dataclass
class DickeVector:
    """Amplitudes over the Dicke ladder |N/2, -N/2 + n>, n = 0..N."""

    n_spins: int
    amps: np.ndarray

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be >= 1")
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (self.n_spins + 1,):
            raise ValueError(
                f"expected {self.n_spins + 1} amplitudes, got shape {self.amps.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class DisentangleCoeffs:
    """Coefficients of exp(s J+) exp(s0 Jz) exp(s1 J-)."""

    s: complex
    s0: float
    s1: complex


def dicke_ground(n_spins: int) -> DickeVector:
    """All molecules in the vibrational ground state, |N/2, -N/2>."""
    amps = np.zeros(n_spins + 1, dtype=complex)
    amps[0] = 1.0
    return DickeVector(n_spins, amps)


def _ladder_factors(n_spins: int) -> np.ndarray:
    """Matrix elements sqrt((n+1)(N-n)) of J+ between levels n and n+1."""
    n = np.arange(n_spins)
    return np.sqrt((n + 1.0) * (n_spins - n))


def jz_matrix(n_spins: int) -> np.ndarray:
    """Dense J_z in the Dicke basis (diagonal m_z = -N/2 + n)."""
    return np.diag(np.arange(n_spins + 1) - n_spins / 2.0).astype(complex)


def jplus_matrix(n_spins: int) -> np.ndarray:
    """Dense raising operator J+."""
    return np.diag(_ladder_factors(n_spins), -1).astype(complex)


def jminus_matrix(n_spins: int) -> np.ndarray:
    """Dense lowering operator J- = (J+)^dagger."""
    return np.diag(_ladder_factors(n_spins), +1).astype(complex)


def disentangle(eta: complex, t: float) -> DisentangleCoeffs:
    """Disentangling coefficients of exp(-i t (eta J+ + eta* J-)).

    s(t)  = -i sqrt(eta/eta*) tan(|eta| t)
    s0(t) = -2 log cos(|eta| t)
    s1(t) = -i sqrt(eta*/eta) tan(|eta| t)

    Valid for |eta| t < pi/2; beyond that the tangent caustic makes the
    normal-ordered product ill-defined and :class:`DisentangleSingularity`
    is raised.
    """
    mag = abs(eta)
    angle = mag * t
    if angle < 0:
        raise ValueError("t must be non-negative")
    if angle >= np.pi / 2:
        raise DisentangleSingularity(
            f"|eta| t = {angle:.6g} >= pi/2: disentangling caustic (tan singularity)"
        )
    if mag == 0.0 or angle == 0.0:
        return DisentangleCoeffs(s=0.0 + 0.0j, s0=0.0, s1=0.0 + 0.0j)
    phase = eta / mag  # sqrt(eta/eta*) for eta = |eta| e^{i a} is e^{i a}
    tan = np.tan(angle)
    return DisentangleCoeffs(
        s=-1j * phase * tan,
        s0=float(-2.0 * np.log(np.cos(angle))),
        s1=-1j * np.conj(phase) * tan,
    )


def spin_coherent(n_spins: int, s: complex) -> DickeVector:
    """Normalized spin coherent state (1+|s|^2)^{-N/2} sum_n binom(N,n)^{1/2} s^n |n>.

    The overall dynamical phase is dropped; every observable consumed
    downstream (|xi|, photon numbers, concurrence) is insensitive to it.
    """
    if n_spins < 1:
        raise ValueError("n_spins must be >= 1")
    if n_spins > N_MAX_DENSE:
        raise ValueError(f"n_spins = {n_spins} exceeds dense cap {N_MAX_DENSE}")
    n = np.arange(n_spins + 1)
    if s == 0:
        return dicke_ground(n_spins)
    mag = abs(s)
    log_mag = (
        0.5 * (gammaln(n_spins + 1) - gammaln(n + 1) - gammaln(n_spins - n + 1))
        + n * np.log(mag)
        - 0.5 * n_spins * np.log1p(mag * mag)
    )
    # exponentiate relative to the running peak, then restore unit norm
    shifted = np.exp(log_mag - log_mag.max())
    amps = shifted * (s / mag) ** n
    amps /= np.linalg.norm(amps)
    return DickeVector(n_spins, amps)


def expect_jminus(state: DickeVector) -> complex:
    """<J-> = sum_n conj(a_n) a_{n+1} sqrt((n+1)(N-n)).

    Equals N s / (1 + |s|^2) on a spin coherent state; bounded by N/2 in
    magnitude for any state (Cauchy-Schwarz).
    """
    a = state.amps
    return complex(np.sum(np.conj(a[:-1]) * a[1:] * _ladder_factors(state.n_spins)))


def apply_jplus_n(state: DickeVector, k: int) -> DickeVector:
    """Apply (J+)^k exactly; the result is NOT renormalized.

    (J+)^n on the ground state gives sqrt(N! n! / (N-n)!) on level n.
    k > N annihilates the whole multiplet and returns the zero vector.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    n_spins = state.n_spins
    if k > n_spins:
        return DickeVector(n_spins, np.zeros(n_spins + 1, dtype=complex))
    amps = state.amps.copy()
    factors = _ladder_factors(n_spins)
    for _ in range(k):
        shifted = np.zeros_like(amps)
        shifted[1:] = amps[:-1] * factors
        amps = shifted
    return DickeVector(n_spins, amps)
