"""Reconstruction of the torus ``f: C/Gamma -> R^4`` from spectral data.

The immersion is ``f = A v1 + conj(A) conj(v1) + conj(B) v2 + B conj(v2)`` where

    A = sum_j A_j (e_{beta0/2 - gamma_j} - 1),   A_j = (-1)^(j-1) Delta_j t_j / p(1)
    B = sum_j B_j (e_{-gamma_j - beta0/2} - 1),  B_j = (-1)^(j-1) DeltaTilde_j t_j / (i p(1))

(indices j from 1).  In terms of ``chi1(lam, z) = lam * phi(lam, t(z))`` with
``t_j(z) = t_j e_{-gamma_j}(z)`` these read ``A e_{beta0/2} + const = chi1(1, z) / p(1)``
and ``B e_{beta0/2} + const = -i chi1(-1, z) / p(1)``.  The stored ``t`` is used verbatim,
so the scale and phase of ``t`` fix the dilation and T0 rotation of ``f``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fourier import TrigSeries, character
from .frame import FRAME
from .lattice import (
    FrequencySet,
    Lattice,
    MaslovClass,
    enumerate_maslov_frequencies,
    lagrangian_angle,
)
from .spectral import (
    SpectralPoint,
    SpectralRoots,
    phi,
    roots_from_frequencies,
    vandermonde,
)

__all__ = [
    "SurfaceSample",
    "TorusImmersion",
    "bandwidth_grid",
    "base_translate",
    "build_immersion",
    "evaluate_A_B",
    "evaluate_chi1",
    "evaluate_f",
    "evaluate_f_chi",
    "evaluate_f_z",
    "evaluate_f_zzbar",
    "immersion_from_config",
    "sample_grid",
]


def _outer(series: TrigSeries, vec) -> TrigSeries:
    return TrigSeries(series.freqs, series.coefs[:, :1] * np.asarray(vec)[None, :])


@dataclass(frozen=True, eq=False)
class TorusImmersion:
    lattice: Lattice
    maslov: MaslovClass
    frequencies: FrequencySet
    roots: SpectralRoots
    t: np.ndarray
    A: np.ndarray
    B: np.ndarray
    p1: complex

    @property
    def N(self) -> int:
        return self.roots.N

    @property
    def beta0(self) -> complex:
        return self.maslov.beta0

    @cached_property
    def A_series(self) -> TrigSeries:
        w = self.beta0 / 2 - self.frequencies.gammas
        return TrigSeries(np.append(w, 0), np.append(self.A, -self.A.sum()))

    @cached_property
    def B_series(self) -> TrigSeries:
        w = -self.frequencies.gammas - self.beta0 / 2
        return TrigSeries(np.append(w, 0), np.append(self.B, -self.B.sum()))

    @cached_property
    def f_series(self) -> TrigSeries:
        v1, v2, v3, v4 = FRAME.v
        a, b = self.A_series, self.B_series
        return _outer(a, v1) + _outer(a.conj(), v3) + _outer(b.conj(), v2) + _outer(b, v4)

    @cached_property
    def f_z_series(self) -> TrigSeries:
        return self.f_series.d_z()

    @cached_property
    def u_series(self) -> TrigSeries:
        """``u = exp(-J beta/2) f_z``; its frequencies are the +-gamma_j."""
        fz = self.f_z_series
        h = self.beta0 / 2
        return fz.matmul(FRAME.P_plus).shift(-h) + fz.matmul(FRAME.P_minus).shift(h)

    @cached_property
    def max_index(self) -> tuple[int, int]:
        """Largest |<w, tau_i>| over the frequencies w of f."""
        w = self.A_series.freqs
        w = np.concatenate([w, -w, self.B_series.freqs, -self.B_series.freqs])
        l1 = np.abs((w * np.conj(self.lattice.tau1)).real)
        l2 = np.abs((w * np.conj(self.lattice.tau2)).real)
        return int(np.ceil(l1.max() - 1e-9)), int(np.ceil(l2.max() - 1e-9))


def build_immersion(L: Lattice, b: MaslovClass, F: FrequencySet, R: SpectralRoots, t) -> TorusImmersion:
    t = np.array(t.t if isinstance(t, SpectralPoint) else t, dtype=complex).ravel()
    if t.size != R.N or F.N != R.N:
        raise ValueError(f"t has {t.size} entries, roots {R.N}, frequencies {F.N}")
    if not np.any(np.abs(t) > 0) or not np.all(np.isfinite(t)):
        raise ValueError("homogeneous coordinates must be finite and not all zero")
    _, delta, delta_t = vandermonde(R)
    sign = (-1.0) ** np.arange(R.N)  # (-1)^(j-1) for j = 1..N
    p1 = R.p1
    A = sign * delta * t / p1
    B = sign * delta_t * t / (1j * p1)
    return TorusImmersion(L, b, F, R, t, A, B, p1)


def immersion_from_config(tau1, tau2, beta0, t=None, seed=None) -> TorusImmersion:
    """Convenience: enumerate frequencies, form roots and build the torus.

    With ``t`` omitted a random unit-norm representative is drawn from ``seed``.
    """
    L = Lattice(tau1, tau2)
    b = MaslovClass(beta0, L)
    F = enumerate_maslov_frequencies(L, b)
    R = roots_from_frequencies(F, b)
    if t is None:
        rng = np.random.default_rng(seed)
        t = rng.standard_normal(R.N) + 1j * rng.standard_normal(R.N)
        t /= np.linalg.norm(t)
    return build_immersion(L, b, F, R, t)


def evaluate_A_B(T: TorusImmersion, z):
    return T.A_series(z)[..., 0], T.B_series(z)[..., 0]


def evaluate_f(T: TorusImmersion, z) -> np.ndarray:
    return T.f_series(z).real


def evaluate_f_z(T: TorusImmersion, z) -> np.ndarray:
    return T.f_z_series(z)


def evaluate_f_zzbar(T: TorusImmersion, z) -> np.ndarray:
    return T.f_series.d_z().d_zbar()(z).real


def evaluate_chi1(T: TorusImmersion, lam, z):
    """``chi1(lam, z) = lam phi(lam, t(z))`` with ``t_j(z) = t_j e_{-gamma_j}(z)``."""
    tz = T.t * character(-T.frequencies.gammas, z)
    lam = np.asarray(lam, dtype=complex)
    return lam * phi(T.roots, tz, lam)


def evaluate_f_chi(T: TorusImmersion, z) -> np.ndarray:
    """f through chi1 at lam = +-1; an independent route to :func:`evaluate_f`."""
    z = np.asarray(z, dtype=complex)
    h = T.beta0 / 2
    v1 = FRAME.v[0]
    Lv1 = FRAME.L @ v1
    e_h = character(h, z)[..., 0]
    a = (evaluate_chi1(T, 1.0, z) * e_h - evaluate_chi1(T, 1.0, 0)) / T.p1
    c = (evaluate_chi1(T, -1.0, z) / e_h - evaluate_chi1(T, -1.0, 0)) / T.p1
    return 2 * np.real(a[..., None] * v1) + 2 * np.imag(c[..., None] * Lv1)


def translated_coordinates(T: TorusImmersion, z0) -> np.ndarray:
    return T.t * character(-T.frequencies.gammas, z0)


def base_translate(T: TorusImmersion, z0) -> SpectralPoint:
    """Spectral point of the torus re-based at z0: ``t_j e_{-gamma_j}(z0)``."""
    return SpectralPoint(translated_coordinates(T, z0))


@dataclass(frozen=True, eq=False)
class SurfaceSample:
    """Values on the grid ``z = (k1/n1) tau1 + (k2/n2) tau2``; arrays are (n1, n2, ...)."""

    lattice: Lattice
    n1: int
    n2: int
    uv: np.ndarray
    z: np.ndarray
    f: np.ndarray
    f_z: np.ndarray
    f_zzbar: np.ndarray
    beta: np.ndarray

    @property
    def conformal_factor(self) -> np.ndarray:
        return np.sum(np.abs(self.f_z) ** 2, axis=-1)

    @property
    def cell_area(self) -> float:
        return self.lattice.area / (self.n1 * self.n2)


def bandwidth_grid(T: TorusImmersion) -> tuple[int, int]:
    """Smallest grid on which products of two modes of f integrate exactly."""
    l, m = T.max_index
    return 2 * l + 3, 2 * m + 3


def sample_grid(T: TorusImmersion, n1: int, n2: int) -> SurfaceSample:
    l, m = T.max_index
    if n1 < 2 * l + 1 or n2 < 2 * m + 1:
        warnings.warn(
            f"grid {n1}x{n2} is below the resolving size {2 * l + 1}x{2 * m + 1}",
            stacklevel=2,
        )
    u, v = np.meshgrid(np.arange(n1) / n1, np.arange(n2) / n2, indexing="ij")
    z = T.lattice.point(u, v)
    f_c = T.f_series(z)
    return SurfaceSample(
        lattice=T.lattice,
        n1=n1,
        n2=n2,
        uv=np.stack([u, v], axis=-1),
        z=z,
        f=f_c.real,
        f_z=T.f_z_series(z),
        f_zzbar=T.f_series.d_z().d_zbar()(z).real,
        beta=lagrangian_angle(T.maslov, z),
    )

