"""Higher flows on spectral data, the Hamiltonian criterion and the G0 action.

A flow direction ``a`` moves ``t_j -> t_j exp(time a_j)``.  The variation
is Hamiltonian exactly when

    sum1 = sum_j Re(a_j) w_j = 0   and   sum2 = sum_j (Re s_j / Im s_j) Re(a_j) w_j = 0,

with ``w_j = |t_j|^2 / prod_{k != j} |s_k - s_j|^2``.

Quaternions are real 4-vectors (a, b, c, d) = a + b i + c j + d k; J and L
on R^4 are left multiplication by i and j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .frame import FRAME
from .immersion import TorusImmersion, build_immersion
from .lattice import Lattice, MaslovClass
from .spectral import SpectralPoint, SpectralRoots

__all__ = [
    "FlowDirection",
    "QuaternionCoords",
    "area_derivative",
    "flow_apply",
    "flow_raw",
    "flow_trajectory",
    "g0_act",
    "hamiltonian_projection",
    "hamiltonian_test",
    "hodge_pairing_closed_form",
    "hodge_pairing_oracle",
    "qconj",
    "qmul",
    "quaternions_to_t",
    "random_unit_quaternion",
    "t_to_quaternions",
    "variation",
]

HAMILTONIAN_RTOL = 1e-12


def _t(t) -> np.ndarray:
    return np.asarray(getattr(t, "t", t), dtype=complex)


@dataclass(frozen=True)
class FlowDirection:
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex).ravel()
        if not np.all(np.isfinite(a)):
            raise ValueError("flow direction must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)


def _a(a) -> np.ndarray:
    return a.a if isinstance(a, FlowDirection) else np.asarray(a, dtype=complex)


def flow_raw(t, a, time: float) -> np.ndarray:
    """``t_j exp(time a_j)`` without renormalizing."""
    return _t(t) * np.exp(time * _a(a))


def flow_apply(t, a, time: float) -> SpectralPoint:
    return SpectralPoint(flow_raw(t, a, time))


def _mode_weights(R: SpectralRoots, t) -> np.ndarray:
    return np.abs(_t(t)) ** 2 / R.mode_weights


def hamiltonian_test(R: SpectralRoots, t, a):
    """Returns ``(sum1, sum2, is_hamiltonian)``.

    Both sums are compared against 1e-12 times the sum of the absolute
    values of their summands.
    """
    w = _mode_weights(R, t)
    ra = _a(a).real
    r = R.s.real / R.s.imag
    x1, x2 = ra * w, r * ra * w
    s1, s2 = float(x1.sum()), float(x2.sum())
    scale = float(np.abs(x1).sum() + np.abs(x2).sum())
    ok = abs(s1) <= HAMILTONIAN_RTOL * scale and abs(s2) <= HAMILTONIAN_RTOL * scale
    return s1, s2, bool(ok or scale == 0.0)


def hamiltonian_projection(R: SpectralRoots, t, a) -> np.ndarray:
    """Remove from Re(a) its component that violates the two conditions.

    The two conditions are Euclidean-orthogonal to ``w`` and ``r w``; the
    imaginary part of ``a`` is untouched.
    """
    a = _a(a)
    w = _mode_weights(R, t)
    C = np.stack([w, R.s.real / R.s.imag * w])
    ra = a.real
    # C may be rank one (e.g. all roots on the imaginary axis)
    coef, *_ = np.linalg.lstsq(C @ C.T, C @ ra, rcond=None)
    return ra - C.T @ coef + 1j * a.imag


def _closed_constant(R: SpectralRoots, b: MaslovClass) -> float:
    return float(np.pi**2 * abs(b.beta0) ** 2 * abs(R.V) ** 2)


def area_derivative(R: SpectralRoots, t, a, L: Lattice, b: MaslovClass) -> float:
    """d/dtime at 0 of the area closed form along ``t exp(time a)`` (raw t).

    ``2 A(C/Gamma) pi^2 |beta0|^2 |V_N|^2 sum_j Re(a_j) w_j``.
    """
    w = _mode_weights(R, t)
    return 2 * L.area * _closed_constant(R, b) * float(np.sum(_a(a).real * w))


def variation(T: TorusImmersion, a) -> TorusImmersion:
    """The torus built from ``a * t``; f depends real-linearly on t, so its
    values are d/dtime f(t exp(time a)) at time 0.
    """
    return build_immersion(T.lattice, T.maslov, T.frequencies, T.roots, _a(a) * T.t)


def hodge_pairing_oracle(T: TorusImmersion, a, grid=None):
    """``((sigma_T, d beta), (sigma_T, *d beta))`` by quadrature.

    ``sigma_T = <J T, df>``; with ``c = <J T, f_z>`` (bilinear) the pairings
    are ``4 pi Re(c0 beta0)`` and ``-4 pi Im(c0 beta0)``, c0 the mean of c.
    """
    from .immersion import bandwidth_grid

    n1, n2 = grid if grid is not None else bandwidth_grid(T)
    u, v = np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij")
    z = T.lattice.point(u, v)
    Tv = variation(T, a).f_series(z).real
    fz = T.f_z_series(z)
    c0 = np.mean(np.einsum("...i,...i->...", Tv @ FRAME.J.T, fz))
    cb = c0 * T.beta0
    return float(4 * np.pi * cb.real), float(-4 * np.pi * cb.imag)


def hodge_pairing_closed_form(R: SpectralRoots, t, a, b: MaslovClass):
    """``(4 pi^2 |beta0|^2 |V_N|^2 sum1, -4 pi^2 |beta0|^2 |V_N|^2 sum2)``."""
    s1, s2, _ = hamiltonian_test(R, t, a)
    k = 4 * _closed_constant(R, b)
    return k * s1, -k * s2


def flow_trajectory(R: SpectralRoots, t, a, L: Lattice, b: MaslovClass, times, mode: str = "fixed"):
    """Rows ``(time, area, sum1, sum2)`` along the flow from raw t.

    ``mode="fixed"`` uses ``t exp(time a)``.  ``mode="projected"`` solves
    ``dt/dtime = a(time) * t`` where a(time) is re-projected onto the
    Hamiltonian directions at the current t, so the area stays exactly
    critical along the path.
    """
    from .verification import area_closed_form

    t0 = _t(t)
    a = _a(a)
    times = np.asarray(times, dtype=float)
    if mode == "fixed":
        ts = [flow_raw(t0, a, s) for s in times]
        dirs = [a] * len(times)
    elif mode == "projected":
        n = t0.size

        def rhs(_, y):
            tt = y[:n] + 1j * y[n:]
            d = hamiltonian_projection(R, tt, a) * tt
            return np.concatenate([d.real, d.imag])

        sol = solve_ivp(
            rhs, (0.0, float(times.max())), np.concatenate([t0.real, t0.imag]),
            method="DOP853", t_eval=times, rtol=1e-13, atol=1e-15 * np.linalg.norm(t0),
        )
        if not sol.success:
            raise RuntimeError(sol.message)
        ts = [sol.y[:n, k] + 1j * sol.y[n:, k] for k in range(len(times))]
        dirs = [hamiltonian_projection(R, tt, a) for tt in ts]
    else:
        raise ValueError(f"unknown flow mode {mode!r}")
    rows = []
    for s, tt, d in zip(times, ts, dirs):
        s1, s2, _ = hamiltonian_test(R, tt, d)
        rows.append((float(s), area_closed_form(R, tt, L, b), s1, s2))
    return np.array(rows)


# ------------------------------------------------------------------ quaternions


def qmul(p, q) -> np.ndarray:
    """Hamilton product, broadcast over leading axes."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    return np.asarray(q, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def random_unit_quaternion(rng=None) -> np.ndarray:
    q = np.random.default_rng(rng).standard_normal(4)
    return q / np.linalg.norm(q)


@dataclass(frozen=True)
class QuaternionCoords:
    """``w[j]`` for j < N/2, each a real 4-vector."""

    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if w.ndim != 2 or w.shape[1] != 4:
            raise ValueError("expected an (n, 4) array of quaternions")
        if not np.any(w):
            raise ValueError("quaternion coordinates must not all vanish")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)


def _root_factors(R: SpectralRoots) -> tuple[np.ndarray, np.ndarray]:
    """``c_j = s_j^(N+1) p0`` and the principal ``sqrt(c_j / 2)`` for j < N/2."""
    h = R.N // 2
    c = R.s[:h] ** (R.N + 1) * R.p0
    return c, np.sqrt(c / 2)


def t_to_quaternions(R: SpectralRoots, t) -> QuaternionCoords:
    t = _t(t)
    h = R.N // 2
    c, r = _root_factors(R)
    chi1 = R.s * R.V * t  # chi1(s_j, 0) for all j
    chi2 = 1j * c * np.conj(chi1[h:])  # chi2(s_j, 0), j < N/2
    p, q = chi1[:h] / r, chi2 / r
    return QuaternionCoords(np.stack([p.real, p.imag, q.real, q.imag], axis=1))


def quaternions_to_t(R: SpectralRoots, W) -> np.ndarray:
    """Inverse of :func:`t_to_quaternions` (raw, not renormalized)."""
    w = W.w if isinstance(W, QuaternionCoords) else np.asarray(W, dtype=float)
    c, r = _root_factors(R)
    chi1_lo = r * (w[:, 0] + 1j * w[:, 1])
    chi2 = r * (w[:, 2] + 1j * w[:, 3])
    chi1_hi = np.conj(chi2 / (1j * c))
    chi1 = np.concatenate([chi1_lo, chi1_hi])
    return chi1 / (R.s * R.V)


def g0_act(R: SpectralRoots, t, q) -> SpectralPoint:
    """Right-multiply every ``w_j`` by the unit quaternion q.

    The norm of t is preserved, so for unit-norm t the new torus is the old
    one with each value right-multiplied by q.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4,) or abs(np.linalg.norm(q) - 1) > 1e-12:
        raise ValueError(f"g0_act needs a unit quaternion, got {q}")
    W = t_to_quaternions(R, t)
    return SpectralPoint(quaternions_to_t(R, qmul(W.w, q)))
