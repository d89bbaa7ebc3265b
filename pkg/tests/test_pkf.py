import numpy as np
import pytest

from hsltori import pkf
from conftest import torus

CASES = [2, 1 + 3j, 2 + 4j]


@pytest.fixture(params=CASES)
def built(request):
    T = torus(request.param, seed=21)
    z = pkf.sample_points(T)
    return T, z, pkf.pkf_build_from_recursion(T), pkf.pkf_build_from_chi(T)


def test_two_routes_agree(built):
    T, z, X, Y = built
    assert pkf.pkf_difference(X, Y, z) <= 1e-8


def test_lax_equations(built):
    T, z, X, Y = built
    assert pkf.lax_residual(X, T, z) <= 1e-8
    assert pkf.lax_residual(Y, T, z) <= 1e-8


def test_shuffled_p_breaks_lax(built):
    T, z, X, _ = built
    p = X.p[::-1].copy()
    if np.allclose(p, X.p):
        p = X.p * np.exp(0.7j)
    assert pkf.lax_residual(X, T, z, p=p) > 1e-3


def test_terminal_and_u_zbar(built):
    T, z, _, _ = built
    assert pkf.terminal_residual(T, z) <= 1e-8
    assert pkf.u_zbar_residual(T, z) <= 1e-9


def test_symmetries(built):
    T, z, X, Y = built
    for P in (X, Y):
        assert pkf.reality_residual(P, z) <= 1e-9
        assert pkf.tau_symmetry_residual(P, z) <= 1e-8
        assert pkf.chi_relations_residual(P, z) <= 1e-8


def test_evolution_and_top_coefficient(built):
    T, z, X, Y = built
    for P in (X, Y):
        assert pkf.evolution_residual(P, z) <= 1e-8
        assert pkf.top_coefficient_residual(P, z) <= 1e-8


def test_coefficients_vanish_outside_range(built):
    T, z, X, _ = built
    assert np.all(X.coefficient(0)(z) == 0)
    assert np.all(X.coefficient(T.N + 1)(z) == 0)


def test_x1_is_minus_M_p0_u(built):
    T, z, X, _ = built
    from hsltori.frame import FRAME

    M = (2 / (np.pi * np.conj(T.beta0))) * FRAME.J
    want = -T.roots.p0 * T.u_series(z) @ M.T
    assert np.allclose(X.x[0](z), want, atol=1e-12 * np.abs(want).max())


def test_chi_route_at_roots(built):
    # x(s_j, z) carries chi1(s_j, z) as its v1 component
    import hsltori as h

    T, z, X, Y = built
    for s in T.roots.s:
        want = h.evaluate_chi1(T, s, z)
        for P in (X, Y):
            assert np.allclose(P.chi(s, z)[..., 0], want, rtol=1e-10)
