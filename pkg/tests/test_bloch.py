import numpy as np
import pytest
from scipy.linalg import expm

from qfcsim.bloch import (
    N_MAX_DENSE,
    DickeVector,
    DisentangleSingularity,
    apply_jplus_n,
    dicke_ground,
    disentangle,
    expect_jminus,
    jminus_matrix,
    jplus_matrix,
    jz_matrix,
    spin_coherent,
)


@pytest.mark.parametrize("n", [1, 2, 4, 7, 10])
def test_commutators(n):
    jz, jp, jm = jz_matrix(n), jplus_matrix(n), jminus_matrix(n)
    assert np.abs(jz @ jp - jp @ jz - jp).max() < 1e-12
    assert np.abs(jz @ jm - jm @ jz + jm).max() < 1e-12
    assert np.abs(jp @ jm - jm @ jp - 2 * jz).max() < 1e-12


# --- disentangling -----------------------------------------------------------

def test_disentangle_identity_at_t0():
    c = disentangle(0.3 + 0.2j, 0.0)
    assert c.s == 0.0 and c.s0 == 0.0 and c.s1 == 0.0


def test_disentangle_quarter_turn():
    eta = 0.5
    c = disentangle(eta, (np.pi / 4) / eta)
    assert abs(c.s) == pytest.approx(1.0, rel=1e-12)
    assert c.s0 == pytest.approx(np.log(2.0), rel=1e-12)


def test_disentangle_real_drive_phase():
    eta, t = 0.7, 0.9
    c = disentangle(eta, t)
    assert c.s == pytest.approx(np.exp(-1j * np.pi / 2) * np.tan(eta * t))


def test_disentangle_invariants():
    rng = np.random.default_rng(11)
    for _ in range(50):
        eta = rng.uniform(0.1, 3.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        t = rng.uniform(0.0, 1.5) / abs(eta)
        c = disentangle(eta, t)
        assert np.exp(-c.s0) * (1 + abs(c.s) ** 2) == pytest.approx(1.0, rel=1e-12)
        assert abs(c.s1) == pytest.approx(abs(c.s), rel=1e-12, abs=1e-15)


def test_disentangle_caustic_raises():
    with pytest.raises(DisentangleSingularity, match="caustic"):
        disentangle(1.0, np.pi / 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_disentangle_reproduces_matrix_exponential(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(20):
        eta = rng.uniform(0.1, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        t = rng.uniform(0.0, 1.4 / abs(eta))
        via_coeffs = spin_coherent(n, disentangle(eta, t).s).amps
        h = eta * jplus_matrix(n) + np.conj(eta) * jminus_matrix(n)
        via_expm = expm(-1j * t * h) @ dicke_ground(n).amps
        np.testing.assert_allclose(via_coeffs, via_expm, atol=1e-9)


def test_disentangle_n2_single_case():
    eta, t = 0.9 * np.exp(0.4j), 0.8
    via_coeffs = spin_coherent(2, disentangle(eta, t).s).amps
    h = eta * jplus_matrix(2) + np.conj(eta) * jminus_matrix(2)
    via_expm = expm(-1j * t * h) @ dicke_ground(2).amps
    np.testing.assert_allclose(via_coeffs, via_expm, atol=1e-10)


# --- spin coherent states ------------------------------------------------------

def test_spin_coherent_ground():
    state = spin_coherent(5, 0.0)
    assert state.amps[0] == 1.0
    assert np.all(state.amps[1:] == 0.0)


def test_spin_coherent_single_spin_balanced():
    state = spin_coherent(1, 1.0)
    np.testing.assert_allclose(state.amps, [1 / np.sqrt(2), 1 / np.sqrt(2)], rtol=1e-14)


@pytest.mark.parametrize("n,s", [(8, 0.3 + 0.4j), (64, 2.0 - 1.0j), (4096, 0.9)])
def test_spin_coherent_normalized(n, s):
    assert spin_coherent(n, s).norm() == pytest.approx(1.0, abs=1e-12)


def test_spin_coherent_dense_cap():
    with pytest.raises(ValueError, match="dense cap"):
        spin_coherent(N_MAX_DENSE + 1, 0.5)


# --- <J-> ------------------------------------------------------------------------

def test_expect_jminus_ground_is_zero():
    assert expect_jminus(dicke_ground(6)) == 0.0


def test_expect_jminus_closed_form_unit_s():
    got = expect_jminus(spin_coherent(4, 1j))
    assert got == pytest.approx(2j, abs=1e-12)


def test_expect_jminus_direct_sum():
    n, s = 16, 0.7
    state = spin_coherent(n, s)
    direct = sum(
        np.conj(state.amps[k]) * state.amps[k + 1] * np.sqrt((k + 1) * (n - k))
        for k in range(n)
    )
    assert expect_jminus(state) == pytest.approx(direct, abs=1e-12)
    assert expect_jminus(state) == pytest.approx(n * s / (1 + s * s), abs=1e-10)


def test_expect_jminus_closed_form_random():
    rng = np.random.default_rng(5)
    for n in (2, 8, 23, 64):
        s = complex(rng.normal(), rng.normal())
        got = expect_jminus(spin_coherent(n, s))
        assert got == pytest.approx(n * s / (1 + abs(s) ** 2), abs=1e-10)


def test_expect_jminus_cauchy_schwarz_bound():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n = int(rng.integers(1, 50))
        amps = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        state = DickeVector(n, amps / np.linalg.norm(amps))
        assert abs(expect_jminus(state)) <= n / 2 + 1e-12


# --- ladder action ----------------------------------------------------------------

def test_apply_jplus_identity():
    state = spin_coherent(4, 0.3)
    np.testing.assert_array_equal(apply_jplus_n(state, 0).amps, state.amps)


def test_apply_jplus_ground_factorials():
    lifted = apply_jplus_n(dicke_ground(3), 3)
    # sqrt(3! 3! / 0!) = 6 on the top level
    assert lifted.amps[3] == pytest.approx(6.0)
    assert np.all(lifted.amps[:3] == 0.0)


def test_apply_jplus_annihilates_past_top():
    state = spin_coherent(3, 0.5 + 0.1j)
    gone = apply_jplus_n(state, 4)
    assert np.all(gone.amps == 0.0)
