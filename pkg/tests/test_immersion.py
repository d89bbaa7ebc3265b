import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import hsltori as h
from hsltori.fourier import character
from hsltori.frame import FRAME, exp_J
from hsltori.immersion import translated_coordinates
from conftest import random_t, torus


def test_frame_invariants():
    J, L, v = FRAME.J, FRAME.L, FRAME.v
    e = np.eye(4)
    assert np.allclose(J @ e[0], e[1]) and np.allclose(J @ e[2], e[3])
    assert np.allclose(L @ e[0], e[2]) and np.allclose(L @ e[1], -e[3])
    assert np.allclose(J @ J, -np.eye(4)) and np.allclose(L @ L, -np.eye(4))
    assert np.allclose(J @ L, -L @ J)
    assert np.allclose(v[1], L @ v[0].conj()) and np.allclose(v[3], L @ v[0])
    assert np.allclose(v.conj() @ v.T, np.eye(4))


def test_exp_J_matches_series():
    from scipy.linalg import expm

    assert np.allclose(exp_J(0.7), expm(0.7 * FRAME.J))


def test_build_example_n2():
    L = h.Lattice(1, 1j)
    b = h.MaslovClass(2, L)
    F = h.enumerate_maslov_frequencies(L, b)
    R = h.roots_from_frequencies(F, b)
    T = h.build_immersion(L, b, F, R, [1, 1])
    assert np.allclose(R.s, [1j, -1j])
    assert T.A[0] == pytest.approx(-(1 + 1j) / 2)
    assert T.A[1] == pytest.approx((1 - 1j) / 2)
    _, d, dt = h.vandermonde(R)
    assert np.allclose(T.B / T.A, dt / (1j * d))


def test_build_rejects_bad_t():
    T = torus(2)
    with pytest.raises(ValueError):
        h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, [0, 0])
    with pytest.raises(ValueError):
        h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, [1, 2, 3])


@pytest.mark.parametrize("beta0", [2, 1 + 3j, 2 + 4j])
def test_base_point(beta0):
    T = torus(beta0, seed=2)
    A, B = h.evaluate_A_B(T, 0)
    assert abs(A) < 1e-13 and abs(B) < 1e-13
    assert np.max(np.abs(h.evaluate_f(T, 0))) < 1e-13


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_A_term_by_term(beta0, rng):
    T = torus(beta0, seed=3)
    g, b0 = T.frequencies.gammas, T.beta0
    for z in rng.standard_normal(5) + 1j * rng.standard_normal(5):
        want_A = sum(T.A[j] * (np.exp(2j * np.pi * (np.conj(b0 / 2 - g[j]) * z).real) - 1) for j in range(T.N))
        want_B = sum(T.B[j] * (np.exp(2j * np.pi * (np.conj(-g[j] - b0 / 2) * z).real) - 1) for j in range(T.N))
        A, B = h.evaluate_A_B(T, z)
        assert abs(A - want_A) <= 1e-12 * max(1, abs(want_A))
        assert abs(B - want_B) <= 1e-12 * max(1, abs(want_B))


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_f_real_and_two_routes(beta0, rng):
    T = torus(beta0, seed=4)
    z = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    fc = T.f_series(z)
    scale = np.max(np.abs(fc))
    assert np.max(np.abs(fc.imag)) <= 1e-12 * scale
    assert np.max(np.abs(h.evaluate_f(T, z) - h.evaluate_f_chi(T, z))) <= 1e-10 * scale


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_chi1_examples(beta0, rng):
    T = torus(beta0, seed=5)
    z = complex(rng.standard_normal(), rng.standard_normal())
    assert h.evaluate_chi1(T, 0.0, z) == 0
    for j, s in enumerate(T.roots.s):
        assert h.evaluate_chi1(T, s, 0) == pytest.approx(s * T.t[j] * T.roots.V, rel=1e-12)
        ratio = h.evaluate_chi1(T, s, z) / h.evaluate_chi1(T, s, 0)
        assert ratio == pytest.approx(character(-T.frequencies.gammas[j], z), rel=1e-12)


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_f_z_finite_differences(beta0, rng):
    T = torus(beta0, seed=6)
    step = 1e-5
    for z in rng.standard_normal(4) + 1j * rng.standard_normal(4):
        fx = (h.evaluate_f(T, z + step) - h.evaluate_f(T, z - step)) / (2 * step)
        fy = (h.evaluate_f(T, z + 1j * step) - h.evaluate_f(T, z - 1j * step)) / (2 * step)
        fd = 0.5 * (fx - 1j * fy)
        fz = h.evaluate_f_z(T, z)
        assert np.max(np.abs(fz - fd)) <= 1e-7 * np.max(np.abs(fz))


@pytest.mark.parametrize("beta0", [2, 1 + 3j, 2 + 4j])
def test_weak_conformality_and_S_holomorphic(beta0, rng):
    T = torus(beta0, seed=7)
    z = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    fz = h.evaluate_f_z(T, z)
    cf = np.sum(np.abs(fz) ** 2, axis=-1)
    assert np.max(np.abs(np.sum(fz * fz, axis=-1)) / cf) <= 1e-9
    S = exp_J(h.lagrangian_angle(T.maslov, z)) @ FRAME.L
    r = np.einsum("zij,zj->zi", S, fz) - 1j * fz
    assert np.max(np.linalg.norm(r, axis=-1) / np.sqrt(cf)) <= 1e-9


@pytest.mark.parametrize("beta0", [2, 1 + 3j, 2 + 4j])
def test_gamma_periodicity(beta0, rng):
    # every frequency of f is in the dual lattice, for both coset types
    T = torus(beta0, seed=8)
    z = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    f = h.evaluate_f(T, z)
    scale = np.max(np.abs(f))
    for tau in (T.lattice.tau1, T.lattice.tau2):
        assert np.max(np.abs(h.evaluate_f(T, z + tau) - f)) <= 1e-10 * scale


def _equivariance_error(T, z0, z):
    # raw translated coordinates keep the dilation fixed
    t2 = translated_coordinates(T, z0)
    T2 = h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, t2)
    beta = h.lagrangian_angle(T.maslov, z0)
    want = (h.evaluate_f(T, z + z0) - h.evaluate_f(T, z0)) @ exp_J(-beta / 2).T
    got = h.evaluate_f(T2, z)
    return np.max(np.abs(got - want)) / np.max(np.abs(h.evaluate_f(T, z)))


@pytest.mark.parametrize("beta0", [2, 1 + 3j, 2 + 4j])
def test_base_translation_equivariance(beta0, rng):
    T = torus(beta0, seed=9)
    z0 = complex(rng.standard_normal(), rng.standard_normal())
    z = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    assert _equivariance_error(T, z0, z) <= 1e-9


def test_base_translate_examples(rng):
    T = torus(2 + 4j, seed=1)
    assert h.base_translate(T, 0).distance(T.t) < 1e-15
    assert h.base_translate(T, T.lattice.tau1 - 2 * T.lattice.tau2).distance(T.t) < 1e-12
    p = h.base_translate(T, 0.3 + 0.1j)
    assert np.allclose(np.abs(p.t), np.abs(T.t) / np.linalg.norm(T.t))


def test_sample_grid(square_13):
    T = square_13
    n = h.bandwidth_grid(T)
    S = h.sample_grid(T, *n)
    assert S.f.shape == n + (4,)
    assert np.max(np.abs(S.f[0, 0])) < 1e-12
    assert np.allclose(S.f, h.evaluate_f(T, S.z), atol=1e-12)
    # seam periodicity of the conformal factor
    cf_edge = np.sum(np.abs(h.evaluate_f_z(T, S.z[0] + T.lattice.tau1)) ** 2, axis=-1)
    assert np.allclose(cf_edge, S.conformal_factor[0], rtol=1e-10)


def test_sample_grid_warns_below_resolution(square_13):
    with pytest.warns(UserWarning):
        h.sample_grid(square_13, 3, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        h.sample_grid(square_13, *h.bandwidth_grid(square_13))


@given(st.complex_numbers(max_magnitude=5, min_magnitude=1e-3))
def test_f_is_real_linear_dilation(c):
    T = torus(1 + 3j, seed=10)
    T2 = h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, abs(c) * T.t)
    z = np.array([0.3 + 0.7j, -1.1 + 0.2j])
    assert np.allclose(h.evaluate_f(T2, z), abs(c) * h.evaluate_f(T, z), rtol=1e-12, atol=1e-12)
