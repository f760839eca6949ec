import dataclasses

import numpy as np
import pytest

from qfcsim.constants import C_LIGHT
from qfcsim.conversion import (
    bell_initial,
    check_two_qubit_density,
    concurrence_closed_form,
    conversion_trace,
    entanglement_of_formation,
    evolve_bell,
    partial_trace,
    photon_numbers,
    reduce_idler_mixing,
    reduce_idler_up,
    wootters_concurrence,
)
from qfcsim.srs import FieldProfile

# frozen against a 50-digit evaluation of the binary-entropy formula
EOF_AT_HALF = 0.3545789026652698842
EOF_AT_QUARTER = 0.11761887377091791167


def _bell_projector():
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())


# --- state evolution -----------------------------------------------------------

def test_initial_state_is_preserved_at_theta_zero():
    state = evolve_bell(0.0)
    ref = bell_initial()
    assert state.c000 == ref.c000 and state.c110 == ref.c110 and state.c101 == ref.c101
    assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_full_transfer_at_quarter_oscillation():
    state = evolve_bell(np.pi / 2, conv_phase=0.7)
    assert abs(state.c110) == pytest.approx(0.0, abs=1e-16)
    assert abs(state.c101) == pytest.approx(1 / np.sqrt(2), rel=1e-12)


def test_balanced_point():
    state = evolve_bell(np.pi / 4)
    assert abs(state.c110) == pytest.approx(0.5, rel=1e-12)
    assert abs(state.c101) == pytest.approx(0.5, rel=1e-12)


def test_negative_theta_rejected():
    with pytest.raises(ValueError):
        evolve_bell(-0.1)


# --- photon numbers ---------------------------------------------------------------

@pytest.mark.parametrize(
    "theta,expected",
    [(0.0, (0.5, 0.5, 0.0)), (np.pi / 2, (0.5, 0.0, 0.5)), (np.pi / 4, (0.5, 0.25, 0.25))],
)
def test_photon_numbers_reference_points(theta, expected):
    np.testing.assert_allclose(photon_numbers(evolve_bell(theta)), expected, atol=1e-12)


def test_photon_numbers_rejects_unnormalized():
    bad = dataclasses.replace(evolve_bell(0.3), c000=0.9)
    with pytest.raises(ValueError, match="normalized"):
        photon_numbers(bad)


def test_photon_number_identities_bulk():
    theta = np.random.default_rng(1).uniform(0, 4 * np.pi, size=100_000)
    n_m = 0.5 * np.cos(theta) ** 2
    n_u = 0.5 * np.sin(theta) ** 2
    assert np.abs(n_m + n_u - 0.5).max() < 1e-12


# --- reduced density matrices ------------------------------------------------------

def test_reduction_at_theta_zero_is_bell_projector():
    np.testing.assert_allclose(
        reduce_idler_mixing(evolve_bell(0.0)), _bell_projector(), atol=1e-15
    )


def test_reduction_at_full_swap():
    rho_im = reduce_idler_mixing(evolve_bell(np.pi / 2))
    assert np.abs(rho_im - np.diag(np.diag(rho_im))).max() < 1e-15  # no coherence left
    np.testing.assert_allclose(
        reduce_idler_up(evolve_bell(np.pi / 2)), _bell_projector(), atol=1e-15
    )


def test_reduction_entry_at_pi_third():
    rho_im = reduce_idler_mixing(evolve_bell(np.pi / 3))
    assert rho_im[3, 3].real == pytest.approx(np.cos(np.pi / 3) ** 2 / 2, rel=1e-12)
    assert rho_im[3, 3].real == pytest.approx(1 / 8, rel=1e-12)


def test_reduced_matrices_are_valid_densities():
    for theta in np.linspace(0, 2 * np.pi, 25):
        state = evolve_bell(theta, conv_phase=0.3)
        for rho in (reduce_idler_mixing(state), reduce_idler_up(state)):
            check_two_qubit_density(rho)  # hermitian, unit trace, PSD


def test_density_validator_rejects_bad_matrices():
    with pytest.raises(ValueError, match="Hermitian"):
        check_two_qubit_density(np.eye(4) + 1j * np.eye(4)[::-1])
    with pytest.raises(ValueError, match="trace"):
        check_two_qubit_density(np.eye(4, dtype=complex))
    neg = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="negative eigenvalue"):
        check_two_qubit_density(neg)


def test_partial_trace_consistency():
    rng = np.random.default_rng(9)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    for keep in [(0, 1), (0, 2), (1, 2)]:
        red = partial_trace(rho, (2, 2, 2), keep)
        assert red.shape == (4, 4)
        assert np.trace(red).real == pytest.approx(1.0, abs=1e-12)
        assert np.abs(red - red.conj().T).max() < 1e-12
    # tracing everything but one qubit agrees with doing it in two stages
    one = partial_trace(rho, (2, 2, 2), (0,))
    via_pair = partial_trace(partial_trace(rho, (2, 2, 2), (0, 1)), (2, 2), (0,))
    np.testing.assert_allclose(one, via_pair, atol=1e-14)


# --- concurrence ---------------------------------------------------------------------

def test_wootters_bell_state_is_maximal():
    assert wootters_concurrence(_bell_projector()) == pytest.approx(1.0, abs=1e-12)


def test_wootters_product_state_is_zero():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    assert wootters_concurrence(rho) == 0.0


def test_wootters_at_pi_third_is_half():
    rho = reduce_idler_mixing(evolve_bell(np.pi / 3))
    assert wootters_concurrence(rho) == pytest.approx(0.5, abs=1e-12)


def test_wootters_matches_closed_form():
    rng = np.random.default_rng(42)
    for theta in rng.uniform(0, 2 * np.pi, size=200):
        state = evolve_bell(theta, conv_phase=rng.uniform(0, 2 * np.pi))
        c_im, c_iu = concurrence_closed_form(theta)
        assert abs(wootters_concurrence(reduce_idler_mixing(state)) - c_im) < 1e-10
        assert abs(wootters_concurrence(reduce_idler_up(state)) - c_iu) < 1e-10


def test_closed_form_reference_points():
    assert concurrence_closed_form(0.0) == (1.0, 0.0)
    c_im, c_iu = concurrence_closed_form(np.pi / 4)
    assert c_im == pytest.approx(np.sqrt(2) / 2)
    assert c_iu == pytest.approx(np.sqrt(2) / 2)


def test_concurrence_identity_bulk():
    theta = np.random.default_rng(2).uniform(0, 4 * np.pi, size=100_000)
    c_im, c_iu = concurrence_closed_form(theta)
    assert np.abs(c_im**2 + c_iu**2 - 1.0).max() < 1e-12


# --- entanglement of formation ---------------------------------------------------------

def test_eof_endpoints():
    assert entanglement_of_formation(0.0) == 0.0
    assert entanglement_of_formation(1.0) == pytest.approx(1.0, abs=1e-15)


def test_eof_frozen_values():
    assert entanglement_of_formation(0.5) == pytest.approx(EOF_AT_HALF, abs=1e-14)
    assert entanglement_of_formation(0.25) == pytest.approx(EOF_AT_QUARTER, abs=1e-14)


def test_eof_monotone_on_fine_grid():
    grid = np.arange(0.0, 1.0 + 1e-3, 1e-3)
    vals = entanglement_of_formation(grid)
    assert np.all(np.diff(vals) >= 0.0)


def test_eof_out_of_range_rejected():
    with pytest.raises(ValueError):
        entanglement_of_formation(1.2)
    with pytest.raises(ValueError):
        entanglement_of_formation(-0.1)


# --- trace along the fiber ---------------------------------------------------------------

def _profile_with_xi(xi, length=0.6):
    z = np.linspace(0.0, length, len(xi))
    zero = np.zeros_like(z)
    return FieldProfile(
        z_grid=z, alpha_p=zero + 1.0, alpha_s=zero, phi=zero,
        xi_abs=np.asarray(xi, dtype=float), inversion=zero - 1.0,
        coherence=zero.astype(complex), xi_mode="eom",
    )


def test_trace_without_coherence_is_static(default_params):
    trace = conversion_trace(_profile_with_xi(np.zeros(101)), default_params)
    assert np.all(trace.n_m == 0.5)
    assert np.all(trace.n_u == 0.0)
    assert np.all(trace.c_im == 1.0)
    assert np.all(trace.n_i == 0.5)


def test_trace_constant_xi_reaches_full_transfer(default_params):
    # g_u_eff (N/2) L / c = pi/2 converts everything by the fiber end
    n = default_params.n_molecules
    length = 0.6
    coupling = np.pi * C_LIGHT / (n * length)
    params = dataclasses.replace(default_params, conversion_coupling=coupling)
    trace = conversion_trace(_profile_with_xi(np.full(4001, n / 2), length), params)
    assert trace.theta[-1] == pytest.approx(np.pi / 2, rel=1e-12)
    assert trace.n_u[-1] == pytest.approx(0.5, rel=1e-12)
    assert trace.c_iu[-1] == pytest.approx(1.0, rel=1e-12)


def test_trace_invariants_on_default(default_trace):
    assert np.all(default_trace.n_i == 0.5)
    assert np.abs(default_trace.n_m + default_trace.n_u - 0.5).max() < 1e-12
    assert np.abs(default_trace.c_im**2 + default_trace.c_iu**2 - 1.0).max() < 1e-12
    assert np.all(np.diff(default_trace.theta) >= 0.0)


def test_crossing_indices_coincide(default_trace):
    i_photon = int(np.argmin(np.abs(default_trace.n_m - default_trace.n_u)))
    i_conc = int(np.argmin(np.abs(default_trace.c_im - default_trace.c_iu)))
    assert i_photon == i_conc
