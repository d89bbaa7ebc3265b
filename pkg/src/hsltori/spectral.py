"""Spectral roots, the polynomial p, the interpolant phi and the theta hyperplanes.

Homogeneous coordinates ``t`` on the space of spectral data are the values
``t_j = h(s_j)`` of a polynomial ``h`` of degree < N at the spectral roots.
Functions here accept either a :class:`SpectralPoint` or a raw complex array
for ``t``; raw arrays may carry leading batch axes (shape ``(..., N)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .lattice import FrequencySet, MaslovClass

__all__ = [
    "CurveReport",
    "RootCollision",
    "SpectralPoint",
    "SpectralRoots",
    "curve_report",
    "evaluate_p",
    "iota",
    "iota_inverse",
    "phi",
    "projective_distance",
    "roots_from_frequencies",
    "solve_vandermonde",
    "theta_infinity",
    "theta_zero",
    "vandermonde",
]

SUPPORT_RTOL = 1e-12
ROOT_ATOL = 1e-10


class RootCollision(ValueError):
    """Two spectral roots coincide, or a root hits +-1."""


def _vdet(nodes) -> complex:
    """Vandermonde determinant ``prod_{k<l} (x_l - x_k)`` in the given order."""
    x = np.asarray(nodes, dtype=complex)
    out = 1.0 + 0j
    for k in range(x.size):
        out *= np.prod(x[k + 1 :] - x[k])
    return complex(out)


@dataclass(frozen=True, eq=False)
class SpectralRoots:
    """Roots ``s_j = 2 gamma_j / beta0`` of the even polynomial ``p``."""

    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=complex)
        s.setflags(write=False)
        object.__setattr__(self, "s", s)
        n = s.size
        if n == 0 or n % 2:
            raise ValueError(f"need an even positive number of roots, got {n}")
        if np.any(np.abs(np.abs(s) - 1) > 1e-12):
            raise ValueError("spectral roots must lie on the unit circle")
        h = n // 2
        if np.any(np.abs(s[h:] + s[:h]) > 1e-12):
            raise ValueError("roots must be ordered with s[j + N/2] = -s[j]")
        if np.any(np.abs(s - 1) < ROOT_ATOL) or np.any(np.abs(s + 1) < ROOT_ATOL):
            raise RootCollision("a spectral root coincides with +-1")
        gap = np.abs(s[:, None] - s[None, :]) + np.eye(n) * 4
        if gap.min() < ROOT_ATOL:
            raise RootCollision(f"spectral roots collide (min gap {gap.min():.3e})")

    @property
    def N(self) -> int:
        return int(self.s.size)

    @cached_property
    def node_products(self) -> np.ndarray:
        """``prod_{m != j} (s_m - s_j)`` for each j."""
        d = self.s[None, :] - self.s[:, None]
        np.fill_diagonal(d, 1.0)
        return np.prod(d, axis=1)

    @cached_property
    def weights(self) -> np.ndarray:
        """Barycentric weights ``1 / prod_{m != j} (s_j - s_m)``."""
        # N - 1 is odd, so flipping every factor flips the sign
        return -1.0 / self.node_products

    @cached_property
    def V(self) -> complex:
        return _vdet(self.s)

    @cached_property
    def p_coefficients(self) -> np.ndarray:
        """Coefficients p_0..p_N of the monic polynomial, lowest first."""
        return np.poly(self.s)[::-1].astype(complex)

    @property
    def p0(self) -> complex:
        return complex(np.prod(-self.s))

    @property
    def p1(self) -> complex:
        return complex(np.prod(1 - self.s))

    @cached_property
    def tau_permutation(self) -> np.ndarray:
        h = self.N // 2
        return np.concatenate([np.arange(h, self.N), np.arange(h)])

    @cached_property
    def mode_weights(self) -> np.ndarray:
        """``prod_{k != j} |s_k - s_j|^2``, the denominators of the area sums."""
        return np.abs(self.node_products) ** 2


@dataclass(frozen=True, eq=False)
class SpectralPoint:
    """A point of CP^{N-1}, stored as a unit-norm representative."""

    t: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=complex).ravel()
        nrm = np.linalg.norm(t)
        if t.size == 0 or not np.isfinite(nrm) or nrm < 1e-300:
            raise ValueError("homogeneous coordinates must not all vanish")
        t = t / nrm
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def N(self) -> int:
        return int(self.t.size)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.t, dtype=dtype)

    def distance(self, other) -> float:
        return projective_distance(self.t, _coords(other))


@dataclass(frozen=True)
class CurveReport:
    N: int
    full_genus: int
    support: tuple[int, ...]
    N1: int
    stratum_genus: int
    tau_permutation: tuple[int, ...]


def _coords(t) -> np.ndarray:
    if isinstance(t, SpectralPoint):
        return t.t
    return np.asarray(t, dtype=complex)


def projective_distance(s, t) -> float:
    """Chordal Fubini-Study distance ``sqrt(1 - |<s,t>|^2 / (|s|^2 |t|^2))``.

    Computed as the norm of the part of s/|s| orthogonal to t, which keeps
    full relative accuracy for nearby points.
    """
    s, t = _coords(s).ravel(), _coords(t).ravel()
    s = s / np.linalg.norm(s)
    t = t / np.linalg.norm(t)
    r = s - np.vdot(t, s) * t
    return float(min(1.0, np.linalg.norm(r)))


def roots_from_frequencies(F: FrequencySet, b: MaslovClass | complex | None = None):
    beta0 = F.beta0 if b is None else complex(getattr(b, "beta0", b))
    return SpectralRoots(2 * F.gammas / beta0)


def evaluate_p(R: SpectralRoots, lam):
    lam = np.asarray(lam, dtype=complex)
    return np.prod(lam[..., None] - R.s, axis=-1)


def vandermonde(R: SpectralRoots):
    """``(V_N, Delta, DeltaTilde)``.

    ``Delta[j]`` is the Vandermonde determinant of ``(1, s_1, .., s_N)`` with
    ``s_j`` removed; ``DeltaTilde[j]`` that of ``(s_1, .., s_N, -1)`` with
    ``s_j`` removed.
    """
    s = R.s
    delta = np.array([_vdet(np.concatenate([[1.0], np.delete(s, j)])) for j in range(R.N)])
    delta_t = np.array([_vdet(np.concatenate([np.delete(s, j), [-1.0]])) for j in range(R.N)])
    return R.V, delta, delta_t


def phi(R: SpectralRoots, t, lam):
    """The polynomial of degree < N with ``phi(s_j) = t_j V_N``.

    Evaluated in the first barycentric form
    ``V_N p(lam) sum_j w_j t_j / (lam - s_j)``; exact at the nodes.
    """
    t = _coords(t)
    lam = np.asarray(lam, dtype=complex)
    diff = lam[..., None] - R.s
    hit = diff == 0
    safe = np.where(hit, 1.0, diff)
    val = R.V * np.prod(safe, axis=-1) * np.sum(R.weights * t / safe, axis=-1)
    if np.any(hit):
        exact = R.V * np.sum(np.where(hit, t, 0), axis=-1)
        val = np.where(hit.any(axis=-1), exact, val)
    return val


def solve_vandermonde(x, rhs):
    """Solve ``sum_k x_i^k c_k = rhs_i`` (Bjorck-Pereyra, O(n^2)).

    ``rhs`` may carry trailing axes; the solve acts along axis 0.
    """
    x = np.asarray(x, dtype=complex)
    c = np.array(rhs, dtype=complex, copy=True)
    n = x.size
    xs = x.reshape((n,) + (1,) * (c.ndim - 1))
    for k in range(n - 1):
        c[k + 1 :] = (c[k + 1 :] - c[k:-1]) / (xs[k + 1 :] - xs[: n - k - 1])
    for k in range(n - 2, -1, -1):
        c[k : n - 1] -= x[k] * c[k + 1 : n]
    return c


def iota(R: SpectralRoots, h) -> SpectralPoint:
    """``[h] -> [h(s_1), .., h(s_N)]`` for coefficients h_0..h_{N-1}."""
    h = np.asarray(h, dtype=complex)
    if h.size != R.N:
        raise ValueError(f"expected {R.N} coefficients, got {h.size}")
    return SpectralPoint(np.polynomial.polynomial.polyval(R.s, h))


def iota_inverse(R: SpectralRoots, t) -> np.ndarray:
    """Coefficients h_0..h_{N-1} of ``phi(., t) / V_N``."""
    return solve_vandermonde(R.s, _coords(t))


def theta_infinity(R: SpectralRoots, t):
    """Vanishes exactly when phi(., t) drops below degree N - 1."""
    return np.sum(_coords(t) / R.node_products, axis=-1)


def theta_zero(R: SpectralRoots, t):
    """Vanishes exactly when phi(0, t) = 0."""
    return np.sum(_coords(t) / (R.node_products * R.s), axis=-1)


def curve_report(R: SpectralRoots, t) -> CurveReport:
    t = _coords(t)
    mag = np.abs(t)
    support = tuple(int(j) for j in np.flatnonzero(mag > SUPPORT_RTOL * np.linalg.norm(t)))
    n1 = len(support)
    return CurveReport(
        N=R.N,
        full_genus=4 * (R.N - 1),
        support=support,
        N1=n1,
        stratum_genus=4 * (n1 - 1),
        tau_permutation=tuple(int(j) for j in R.tau_permutation),
    )
