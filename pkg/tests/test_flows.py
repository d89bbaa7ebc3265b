import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import hsltori as h
from hsltori import flows as F
from hsltori import verification as V
from conftest import random_t, torus

S2 = h.SpectralRoots([1j, -1j])


def test_flow_apply_examples(rng):
    t = random_t(rng, 6)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert F.flow_apply(t, a, 0).distance(t) < 1e-15
    assert F.flow_apply(t, np.full(6, 0.3 - 2j), 1.7).distance(t) < 1e-15
    b = 1j * rng.standard_normal(6)
    assert np.allclose(np.abs(F.flow_raw(t, b, 2.3)), np.abs(t))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_flow_group_law(s, u):
    rng = np.random.default_rng(0)
    t = random_t(rng, 4)
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    one = F.flow_raw(F.flow_raw(t, a, s), a, u)
    assert np.allclose(one, F.flow_raw(t, a, s + u), rtol=1e-13)


def test_hamiltonian_examples():
    assert F.hamiltonian_test(S2, [1, 1], [1j, -2j]) == (0.0, 0.0, True)
    s1, s2, ok = F.hamiltonian_test(S2, [1, 1], [1, -1])
    assert s1 == 0 and s2 == 0 and ok
    s1, s2, ok = F.hamiltonian_test(S2, [1, 1], [1, 1])
    assert s1 == pytest.approx(0.5) and not ok


def test_projection_is_hamiltonian(rng):
    T = torus(1 + 3j, seed=3)
    for _ in range(10):
        a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        ah = F.hamiltonian_projection(T.roots, T.t, a)
        assert F.hamiltonian_test(T.roots, T.t, ah)[2]
        assert np.allclose(ah.imag, a.imag)


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_hodge_oracle_matches_closed_form(beta0, rng):
    T = torus(beta0, seed=4)
    a = rng.standard_normal(T.N) + 1j * rng.standard_normal(T.N)
    got = F.hodge_pairing_oracle(T, a)
    want = F.hodge_pairing_closed_form(T.roots, T.t, a, T.maslov)
    scale = max(abs(want[0]), abs(want[1]), 1e-300)
    assert abs(got[0] - want[0]) <= 1e-6 * scale
    assert abs(got[1] - want[1]) <= 1e-6 * scale


def test_hodge_oracle_linear_in_a(rng):
    T = torus(1 + 3j, seed=5)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    pa, pb, pab = (F.hodge_pairing_oracle(T, x) for x in (a, b, a + b))
    scale = max(map(abs, pab))
    assert np.allclose(np.add(pa, pb), pab, atol=1e-10 * scale)


def test_hodge_direct_pairing_oracle(rng):
    # independent route: pair sigma_T with d beta via f_x, f_y on the grid
    T = torus(1 + 3j, seed=6)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    n1, n2 = h.bandwidth_grid(T)
    u, v = np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij")
    z = T.lattice.point(u, v)
    Tv = F.variation(T, a).f_series(z).real @ h.FRAME.J.T
    fz = T.f_z_series(z)
    P = np.mean(np.sum(Tv * 2 * fz.real, -1))
    Q = np.mean(np.sum(Tv * -2 * fz.imag, -1))
    b1, b2 = T.beta0.real, T.beta0.imag
    want = (2 * np.pi * (P * b1 + Q * b2) * T.lattice.area, 2 * np.pi * (-P * b2 + Q * b1) * T.lattice.area)
    got = F.hodge_pairing_oracle(T, a)
    assert np.allclose(got, want, rtol=1e-9)


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_area_derivative_finite_difference(beta0, rng):
    T = torus(beta0, seed=7)
    a = rng.standard_normal(T.N) + 1j * rng.standard_normal(T.N)
    d = F.area_derivative(T.roots, T.t, a, T.lattice, T.maslov)
    step = 1e-5
    ap = V.area_closed_form(T.roots, F.flow_raw(T.t, a, step), T.lattice, T.maslov)
    am = V.area_closed_form(T.roots, F.flow_raw(T.t, a, -step), T.lattice, T.maslov)
    assert d == pytest.approx((ap - am) / (2 * step), rel=1e-5)


def test_area_derivative_zero_cases(rng):
    T = torus(1 + 3j, seed=8)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    ah = F.hamiltonian_projection(T.roots, T.t, a)
    scale = F.area_derivative(T.roots, T.t, a.real, T.lattice, T.maslov)
    assert abs(F.area_derivative(T.roots, T.t, ah, T.lattice, T.maslov)) <= 1e-12 * abs(scale)
    assert F.area_derivative(T.roots, T.t, 1j * a.imag, T.lattice, T.maslov) == 0


def test_projected_flow_keeps_area(rng):
    T = torus(1 + 3j, seed=9)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    rows = F.flow_trajectory(T.roots, T.t, a, T.lattice, T.maslov, np.linspace(0, 1, 11), "projected")
    assert np.ptp(rows[:, 1]) <= 1e-8 * rows[0, 1]


def test_quaternion_product():
    i, j, k = np.eye(4)[1:]
    assert np.allclose(F.qmul(i, j), k) and np.allclose(F.qmul(j, i), -k)
    q = F.random_unit_quaternion(3)
    assert np.allclose(F.qmul(q, F.qconj(q)), [1, 0, 0, 0])


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_quaternion_roundtrip(beta0, rng):
    T = torus(beta0, seed=10)
    W = F.t_to_quaternions(T.roots, T.t)
    assert W.w.shape == (T.N // 2, 4)
    assert h.projective_distance(F.quaternions_to_t(T.roots, W), T.t) <= 1e-10


def test_quaternion_pairing_example():
    T = torus(1 + 3j, seed=11)
    t = T.t * np.array([1, 1, 1, 0, 1, 1])
    W = F.t_to_quaternions(T.roots, t).w
    assert np.allclose(W[0, 2:], 0) and not np.allclose(W[1, 2:], 0)


def test_g0_identity_and_errors():
    T = torus(1 + 3j, seed=12)
    assert F.g0_act(T.roots, T.t, [1, 0, 0, 0]).distance(T.t) < 1e-15
    with pytest.raises(ValueError):
        F.g0_act(T.roots, T.t, [1, 1, 0, 0])


@pytest.mark.parametrize("beta0", [2, 1 + 3j])
def test_g0_is_right_multiplication(beta0, rng):
    T = torus(beta0, seed=13)
    q = F.random_unit_quaternion(rng)
    T2 = h.build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, F.g0_act(T.roots, T.t, q))
    z = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    f = h.evaluate_f(T, z)
    assert np.max(np.abs(h.evaluate_f(T2, z) - F.qmul(f, q))) <= 1e-12 * np.abs(f).max()


def test_g0_composition(rng):
    T = torus(1 + 3j, seed=14)
    q1, q2 = F.random_unit_quaternion(rng), F.random_unit_quaternion(rng)
    a = F.g0_act(T.roots, F.g0_act(T.roots, T.t, q1), q2)
    b = F.g0_act(T.roots, T.t, F.qmul(q1, q2))
    assert a.distance(b) <= 1e-10


def test_circle_action_only_changes_phases():
    T = torus(1 + 3j, seed=15)
    th = 0.8
    q = np.array([np.cos(th), np.sin(th), 0, 0])
    t2 = F.g0_act(T.roots, T.t, q).t
    assert np.allclose(np.abs(t2), np.abs(T.t) / np.linalg.norm(T.t))
    # right multiplication by e^{i th} rotates chi1 by e^{i th} and chi2 by
    # e^{-i th}; both halves of t pick up the same phase e^{i th}
    assert np.allclose(t2 / T.t, np.exp(1j * th))
