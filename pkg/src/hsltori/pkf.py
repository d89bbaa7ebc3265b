"""The polynomial Killing field ``(p(lam) I, x(lam))`` of a reconstructed torus.

``x(lam, z) = sum_{j=1..N} x_j(z) lam^j`` with each ``x_j`` a C^4-valued
trigonometric series.  It is built two ways:

* from ``u = exp(-J beta/2) f_z`` by the recursion
  ``x_{j+1} = M (d x_j/dz - p_j u)``, ``M = (2/(pi conj(beta0))) J``;
* from the values ``x(s_j, z) = sum_k chi_k(s_j, z) v_k`` at the roots,
  with chi1 from the interpolant and chi2..chi4 from the symmetries, by a
  Vandermonde solve.

Both are exact on the Fourier series, so every residual below is a round-off
measurement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import TrigSeries
from .frame import FRAME, exp_J
from .immersion import TorusImmersion
from .spectral import solve_vandermonde

__all__ = [
    "PKFData",
    "chi_relations_residual",
    "evolution_residual",
    "lax_residual",
    "pkf_build_from_chi",
    "pkf_build_from_recursion",
    "pkf_difference",
    "reality_residual",
    "sample_points",
    "tau_symmetry_residual",
    "terminal_residual",
    "top_coefficient_residual",
    "u_zbar_residual",
]


def _rotate_half(T: TorusImmersion, series: TrigSeries) -> TrigSeries:
    """``exp(-J beta/2) * series`` as a series (J = +-i on P_plus/P_minus)."""
    h = T.beta0 / 2
    return series.matmul(FRAME.P_plus).shift(-h) + series.matmul(FRAME.P_minus).shift(h)


def _M(T: TorusImmersion) -> np.ndarray:
    return (2 / (np.pi * np.conj(T.beta0))) * FRAME.J


def _K(T: TorusImmersion) -> np.ndarray:
    return -(np.pi * np.conj(T.beta0) / 2) * FRAME.J


@dataclass(frozen=True, eq=False)
class PKFData:
    """Coefficients ``x[0..N-1]`` standing for x_1..x_N, and p_0..p_N."""

    T: TorusImmersion
    x: tuple[TrigSeries, ...]
    p: np.ndarray
    route: str

    @property
    def N(self) -> int:
        return len(self.x)

    def coefficient(self, j: int) -> TrigSeries:
        """x_j with the convention x_j = 0 outside 1..N."""
        if 1 <= j <= self.N:
            return self.x[j - 1]
        return TrigSeries.zero(4)

    def evaluate(self, lam, z) -> np.ndarray:
        """``x(lam, z)``; lam scalar, z array -> (..., 4)."""
        out = 0
        for j, xj in enumerate(self.x, start=1):
            out = out + xj(z) * lam**j
        return out

    def chi(self, lam, z) -> np.ndarray:
        """Components of x in the basis v: (..., 4) with chi_k = <x, v_k>."""
        return FRAME.to_v(self.evaluate(lam, z))


def pkf_build_from_recursion(T: TorusImmersion) -> PKFData:
    M = _M(T)
    p = T.roots.p_coefficients
    u = T.u_series
    xs = []
    prev = TrigSeries.zero(4)
    for j in range(T.N):
        nxt = (prev.d_z() - u.scale(p[j])).matmul(M)
        xs.append(nxt)
        prev = nxt
    return PKFData(T, tuple(xs), p, "recursion")


def _chi_at_roots(T: TorusImmersion):
    """Mode data of chi_k(s_j, z): (coefficient at e_{-gamma_j}, at e_{+gamma_j}) per root.

    chi1(s_j, z) = s_j V_N t_j e_{-gamma_j}(z); then
    chi2(s_j) = i c_j conj(chi1(s_tj)), chi3(s_j) = c_j conj(chi1(s_j)),
    chi4(s_j) = -i chi1(s_tj), where c_j = s_j^(N+1) p_0 and tj = tau(j).
    """
    R = T.roots
    s, N, tau = R.s, R.N, R.tau_permutation
    a1 = s * R.V * np.asarray(T.t)  # chi1 coefficient, mode -gamma_j
    c = s ** (N + 1) * R.p0
    chi2 = 1j * c * np.conj(a1[tau])  # mode +gamma_tj = -gamma_j
    chi3 = c * np.conj(a1)  # mode +gamma_j
    chi4 = -1j * a1[tau]  # mode -gamma_tj = +gamma_j
    v = FRAME.v
    minus = a1[:, None] * v[0] + chi2[:, None] * v[1]
    plus = chi3[:, None] * v[2] + chi4[:, None] * v[3]
    return minus, plus


def pkf_build_from_chi(T: TorusImmersion) -> PKFData:
    R = T.roots
    N, s, g = R.N, R.s, T.frequencies.gammas
    minus, plus = _chi_at_roots(T)
    # rhs[node j, mode m, :] with modes (-gamma_1..-gamma_N, +gamma_1..+gamma_N)
    rhs = np.zeros((N, 2 * N, 4), dtype=complex)
    idx = np.arange(N)
    rhs[idx, idx] = minus / s[:, None]
    rhs[idx, N + idx] = plus / s[:, None]
    coef = solve_vandermonde(s, rhs)  # (N powers, 2N modes, 4)
    freqs = np.concatenate([-g, g])
    xs = tuple(TrigSeries(freqs, coef[k]) for k in range(N))
    return PKFData(T, xs, R.p_coefficients, "chi")


def sample_points(T: TorusImmersion, n: int = 7, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return T.lattice.point(rng.random(n), rng.random(n))


def _scale(P: PKFData, z) -> float:
    return max(float(np.max(np.abs(xj(z)))) for xj in P.x)


def pkf_difference(P: PKFData, Q: PKFData, z) -> float:
    """Max coefficientwise difference over z, relative to the largest x_j."""
    d = max(float(np.max(np.abs(a(z) - b(z)))) for a, b in zip(P.x, Q.x))
    return d / _scale(P, z)


def lax_residual(P: PKFData, T: TorusImmersion, z, p=None) -> float:
    """Residual of the two Lax equations, relative to max_j |x_j|.

    ``dx_j/dz + (pi/2) conj(beta0) J x_{j+1} - p_j u`` for j = 0..N and
    ``dx_j/dzbar + (pi/2) beta0 J x_{j-1} - p_{j-1} exp(-J beta/2) f_zbar``
    for j = 1..N+1.  ``p`` overrides the polynomial coefficients.
    """
    p = P.p if p is None else np.asarray(p)
    u = T.u_series(z)
    w = _rotate_half(T, T.f_z_series.conj())(z)
    Jz = (np.pi / 2) * np.conj(T.beta0) * FRAME.J
    Jzb = (np.pi / 2) * T.beta0 * FRAME.J
    worst = 0.0
    N = P.N
    for j in range(0, N + 1):
        r = P.coefficient(j).d_z()(z) + P.coefficient(j + 1)(z) @ Jz.T - p[j] * u
        worst = max(worst, float(np.max(np.abs(r))))
    for j in range(1, N + 2):
        r = P.coefficient(j).d_zbar()(z) + P.coefficient(j - 1)(z) @ Jzb.T - p[j - 1] * w
        worst = max(worst, float(np.max(np.abs(r))))
    return worst / _scale(P, z)


def terminal_residual(T: TorusImmersion, z) -> float:
    """``sum_k K^k p_k d^(N-k) u / dz^(N-k)`` relative to its largest term."""
    K = _K(T)
    p = T.roots.p_coefficients
    total = 0
    big = 0.0
    for k in range(T.N + 1):
        term = T.u_series.d_z(T.N - k)(z) @ np.linalg.matrix_power(K, k).T * p[k]
        total = total + term
        big = max(big, float(np.max(np.abs(term))))
    return float(np.max(np.abs(total))) / big


def u_zbar_residual(T: TorusImmersion, z) -> float:
    """``u_zbar - (pi/2) conj(beta0) J conj(u)`` relative to max |u_zbar|."""
    u = T.u_series
    lhs = u.d_zbar()(z)
    rhs = np.conj(u(z)) @ ((np.pi / 2) * np.conj(T.beta0) * FRAME.J).T
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(lhs)))


def _unit_lams(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.exp(2j * np.pi * rng.random(n))


def reality_residual(P: PKFData, z, n_lam: int = 5, seed: int = 1) -> float:
    """``lam conj x(1/conj lam) = conj(p0) lam^-N x(lam)`` and the same for p."""
    N, p0 = P.N, P.p[0]
    worst = 0.0
    for lam in _unit_lams(n_lam, seed):
        mu = 1 / np.conj(lam)
        lhs = lam * np.conj(P.evaluate(mu, z))
        rhs = np.conj(p0) * lam**-N * P.evaluate(lam, z)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        pl = np.polynomial.polynomial.polyval(lam, P.p)
        pm = np.polynomial.polynomial.polyval(mu, P.p)
        worst = max(worst, abs(np.conj(pm) - np.conj(p0) * lam**-N * pl) / abs(pl))
    return worst / _scale(P, z)


def tau_symmetry_residual(P: PKFData, z, n_lam: int = 5, seed: int = 2) -> float:
    """``-i L x(-lam) = x(lam)``."""
    worst = 0.0
    for lam in _unit_lams(n_lam, seed) * 1.3:
        r = -1j * P.evaluate(-lam, z) @ FRAME.L.T - P.evaluate(lam, z)
        worst = max(worst, float(np.max(np.abs(r))))
    return worst / _scale(P, z)


def chi_relations_residual(P: PKFData, z, n_lam: int = 5, seed: int = 3) -> float:
    """The component relations at unit-modulus lam.

    chi2(lam) = i lam^(N+1) p0 conj(chi1(-lam)), chi3(lam) = lam^(N+1) p0 conj(chi1(lam)),
    chi4(lam) = -i chi1(-lam), using 1/conj(lam) = lam on the unit circle.
    """
    N, p0 = P.N, P.p[0]
    worst = 0.0
    for lam in _unit_lams(n_lam, seed):
        c = P.chi(lam, z)
        cm = P.chi(-lam, z)
        c2 = 1j * lam ** (N + 1) * p0 * np.conj(cm[..., 0])
        c3 = lam ** (N + 1) * p0 * np.conj(c[..., 0])
        c4 = -1j * cm[..., 0]
        r = np.abs(np.stack([c[..., 1] - c2, c[..., 2] - c3, c[..., 3] - c4]))
        worst = max(worst, float(r.max()))
    return worst / _scale(P, z)


def evolution_residual(P: PKFData, z) -> float:
    """``x(s_j, z) = exp(-beta(s_j, z) J / 2) x(s_j, 0)`` with
    ``beta_lam(z) = pi (conj(beta0) z / lam + lam beta0 conj(z))``.
    """
    T = P.T
    z = np.asarray(z, dtype=complex)
    worst = 0.0
    for s in T.roots.s:
        beta = (np.pi * (np.conj(T.beta0) * z / s + s * T.beta0 * np.conj(z))).real
        x0 = P.evaluate(s, np.zeros(1))[0]
        r = P.evaluate(s, z) - exp_J(-beta / 2) @ x0
        worst = max(worst, float(np.max(np.abs(r))))
    return worst / _scale(P, z)


def top_coefficient_residual(P: PKFData, z) -> float:
    """``x_N = p0 conj(x_1)``."""
    r = P.x[-1](z) - P.p[0] * np.conj(P.x[0](z))
    return float(np.max(np.abs(r))) / _scale(P, z)
