"""Frequency conversion of one Bell-pair mode and the entanglement it carries.

The input is the single-excitation state (|0,0,0> + |1,1,0>)/sqrt(2) over the
idler, mixing and up-converted modes.  Scattering off the prepared molecular
coherence acts as a beamsplitter between mixing and up-converted modes with
accumulated rotation angle

    theta(z) = (g_u_eff / c) * int_0^z |xi(z')| dz',

so the state evolves to (|0,0,0> + cos(theta)|1,1,0> + e^{i phi} sin(theta)
|1,0,1>)/sqrt(2).  Photon numbers and the two pairwise concurrences follow in
closed form; the general Wootters eigenvalue route is implemented as well and
must agree with the closed form on this family.

Two-qubit density matrices are plain 4x4 complex ndarrays in the basis
|00>, |01>, |10>, |11>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .params import DerivedParams
from .srs import FieldProfile

__all__ = [
    "ThreeModePureState",
    "ConversionTrace",
    "bell_initial",
    "evolve_bell",
    "photon_numbers",
    "reduce_idler_mixing",
    "reduce_idler_up",
    "partial_trace",
    "check_two_qubit_density",
    "wootters_concurrence",
    "concurrence_closed_form",
    "entanglement_of_formation",
    "conversion_trace",
]

PSD_TOL = 1e-10


@dataclass(frozen=True)
class ThreeModePureState:
    """Amplitudes of |0,0,0>, |1,1,0>, |1,0,1> in idler/mixing/up order."""

    c000: complex
    c110: complex
    c101: complex

    def norm_sq(self) -> float:
        return abs(self.c000) ** 2 + abs(self.c110) ** 2 + abs(self.c101) ** 2


@dataclass
class ConversionTrace:
    """Per-z conversion observables along the fiber."""

    z: np.ndarray
    theta: np.ndarray
    n_i: np.ndarray
    n_m: np.ndarray
    n_u: np.ndarray
    c_im: np.ndarray
    c_iu: np.ndarray
    eof_im: np.ndarray
    eof_iu: np.ndarray


def bell_initial() -> ThreeModePureState:
    """(|0,0,0> + |1,1,0>)/sqrt(2): idler and mixing share one excitation."""
    r = 1.0 / np.sqrt(2.0)
    return ThreeModePureState(r, r, 0.0)


def evolve_bell(theta: float, conv_phase: float = 0.0) -> ThreeModePureState:
    """Beamsplitter rotation of the Bell state by angle ``theta``.

    ``conv_phase`` is the dynamical phase riding on the up-converted
    amplitude; no observable downstream depends on it.
    """
    if theta < 0:
        raise ValueError("theta must be non-negative")
    r = 1.0 / np.sqrt(2.0)
    return ThreeModePureState(
        c000=r,
        c110=r * np.cos(theta),
        c101=r * np.sin(theta) * np.exp(1j * conv_phase),
    )


def photon_numbers(state: ThreeModePureState):
    """(n_idler, n_mixing, n_up) of a normalized three-mode state."""
    if abs(state.norm_sq() - 1.0) > 1e-9:
        raise ValueError(f"state not normalized: |psi|^2 = {state.norm_sq():.12f}")
    n_m = abs(state.c110) ** 2
    n_u = abs(state.c101) ** 2
    return n_m + n_u, n_m, n_u


def _reduced(state: ThreeModePureState, pair_amp: complex, lone_amp: complex):
    # shared structure of both reductions: the kept pair carries coherence
    # between |00> and |11>, the traced-out photon leaves |10> weight behind
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(state.c000) ** 2
    rho[3, 3] = abs(pair_amp) ** 2
    rho[2, 2] = abs(lone_amp) ** 2
    rho[3, 0] = pair_amp * np.conj(state.c000)
    rho[0, 3] = np.conj(rho[3, 0])
    return rho


def reduce_idler_mixing(state: ThreeModePureState) -> np.ndarray:
    """Trace out the up-converted mode; basis |00>,|01>,|10>,|11> (idler,mixing)."""
    return _reduced(state, state.c110, state.c101)


def reduce_idler_up(state: ThreeModePureState) -> np.ndarray:
    """Trace out the mixing mode; basis |00>,|01>,|10>,|11> (idler,up)."""
    return _reduced(state, state.c101, state.c110)


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep`` from a density matrix.

    ``dims`` are the subsystem dimensions in tensor order; ``keep`` the
    indices (in order) of the subsystems to retain.
    """
    dims = tuple(dims)
    keep = tuple(keep)
    reshaped = np.asarray(rho).reshape(dims + dims)
    for sub in sorted(set(range(len(dims))) - set(keep), reverse=True):
        reshaped = np.trace(reshaped, axis1=sub, axis2=sub + reshaped.ndim // 2)
    d = int(np.prod(reshaped.shape[: reshaped.ndim // 2]))
    return reshaped.reshape(d, d)


def check_two_qubit_density(rho: np.ndarray, tol: float = 1e-9) -> None:
    """Validate shape, Hermiticity, unit trace and positivity of a 4x4 density."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"trace is {np.trace(rho).real:.12f}, expected 1")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals.min() < -PSD_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3e}")


_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence C = max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix.

    The l_i are the descending square roots of the eigenvalues of rho rho~,
    rho~ = (sy x sy) rho* (sy x sy).  rho rho~ is similar to a PSD matrix, so
    its spectrum is computed through the Hermitian similar form
    sqrt(rho) rho~ sqrt(rho).  Eigenvalues inside the solver noise floor
    (1e-14 of the largest, including small negatives) are clamped to zero
    before the square root: the sqrt would otherwise amplify O(eps) dust
    into O(1e-8) concurrence error.
    """
    rho = np.asarray(rho, dtype=complex)
    check_two_qubit_density(rho)
    rho_tilde = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP

    evals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    root = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
    herm = root @ rho_tilde @ root
    lam_sq = np.linalg.eigvalsh((herm + herm.conj().T) / 2.0)
    noise_floor = 1e-14 * max(float(lam_sq.max()), 0.0)
    lam_sq = np.where(lam_sq < noise_floor, 0.0, lam_sq)
    lam = np.sqrt(lam_sq)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_closed_form(theta):
    """(C_idler-mixing, C_idler-up) = (|cos theta|, |sin theta|)."""
    theta = np.asarray(theta, dtype=float)
    return np.abs(np.cos(theta)), np.abs(np.sin(theta))


def entanglement_of_formation(c) -> np.ndarray | float:
    """Entanglement of formation from concurrence via the binary-entropy formula.

    E = 1 - h((1 + sqrt(1 - C^2)) / 2) with h the base-2 binary entropy and
    the convention 0 log2 0 = 0.
    """
    c_arr = np.asarray(c, dtype=float)
    if np.any(c_arr < -1e-12) or np.any(c_arr > 1.0 + 1e-12):
        raise ValueError("concurrence must lie in [0, 1]")
    tau = np.sqrt(np.clip(1.0 - np.clip(c_arr, 0.0, 1.0) ** 2, 0.0, 1.0))
    plus = 1.0 + tau
    minus = 1.0 - tau
    ent = np.where(minus > 0.0, minus * np.log2(np.where(minus > 0.0, minus, 1.0)), 0.0)
    e = 1.0 - 0.5 * (plus * np.log2(plus) + ent)
    e = np.clip(e, 0.0, 1.0)
    return float(e) if np.isscalar(c) or np.ndim(c) == 0 else e


def conversion_trace(profile: FieldProfile, params: DerivedParams) -> ConversionTrace:
    """Accumulate the conversion angle along a field profile and evaluate observables.

    theta(z) integrates params.conversion_coupling * |xi| / c with the
    trapezoid rule on the profile grid; photon numbers and concurrences use
    the closed forms, which the Wootters eigenvalue route reproduces.
    """
    z = profile.z_grid
    rate = params.conversion_coupling * profile.xi_abs / C_LIGHT
    theta = np.concatenate(
        [[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(z))]
    )
    n_m = 0.5 * np.cos(theta) ** 2
    n_u = 0.5 * np.sin(theta) ** 2
    c_im, c_iu = concurrence_closed_form(theta)
    return ConversionTrace(
        z=z,
        theta=theta,
        n_i=np.full_like(theta, 0.5),
        n_m=n_m,
        n_u=n_u,
        c_im=c_im,
        c_iu=c_iu,
        eof_im=entanglement_of_formation(c_im),
        eof_iu=entanglement_of_formation(c_iu),
    )
