"""Lattices, dual lattices, the Maslov frequency set and the Lagrangian angle.

Complex numbers stand in for vectors of the plane throughout; the real
inner product is ``<z, w> = Re(z * conj(w))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EmptyFrequencySet",
    "FrequencySet",
    "Lattice",
    "MaslovClass",
    "MaslovIndices",
    "dual_basis",
    "enumerate_maslov_frequencies",
    "lagrangian_angle",
    "maslov_indices",
    "real_pairing",
]

# ||gamma|^2 - |beta0|^2/4| <= CIRCLE_RTOL * |beta0|^2 accepts a coset point
CIRCLE_RTOL = 1e-9
INTEGRAL_ATOL = 1e-9


class EmptyFrequencySet(ValueError):
    """No coset point lies on the circle other than +-beta0/2."""


def real_pairing(z, w):
    """Real inner product ``Re(z * conj(w))``; broadcasts over arrays."""
    return np.real(np.asarray(z) * np.conj(w))


@dataclass(frozen=True)
class Lattice:
    """The lattice ``Gamma = Z tau1 + Z tau2`` of the torus ``C / Gamma``."""

    tau1: complex
    tau2: complex

    def __post_init__(self):
        object.__setattr__(self, "tau1", complex(self.tau1))
        object.__setattr__(self, "tau2", complex(self.tau2))
        if not self.area > 0:
            raise ValueError(
                f"lattice basis ({self.tau1}, {self.tau2}) is degenerate or "
                "negatively oriented: need Im(conj(tau1) * tau2) > 0"
            )

    @property
    def area(self) -> float:
        """Area of the flat torus with metric |dz|^2."""
        return float((np.conj(self.tau1) * self.tau2).imag)

    @property
    def gram(self) -> np.ndarray:
        b = (self.tau1, self.tau2)
        return np.array([[real_pairing(a, c) for c in b] for a in b], dtype=float)

    def point(self, u, v):
        """Torus point ``u * tau1 + v * tau2`` for real coordinates (u, v)."""
        return np.asarray(u) * self.tau1 + np.asarray(v) * self.tau2

    def coordinates(self, z):
        """Inverse of :meth:`point`: real (u, v) with z = u tau1 + v tau2."""
        d1, d2 = dual_basis(self)
        return real_pairing(z, d1), real_pairing(z, d2)

    def in_dual(self, w, atol: float = INTEGRAL_ATOL) -> bool:
        p = np.array([real_pairing(w, self.tau1), real_pairing(w, self.tau2)])
        return bool(np.all(np.abs(p - np.round(p)) <= atol))


@dataclass(frozen=True)
class MaslovClass:
    """The Maslov class beta0, an element of the dual lattice."""

    beta0: complex
    lattice: Lattice | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "beta0", complex(self.beta0))
        if self.beta0 == 0:
            raise ValueError("beta0 must be non-zero")
        if self.lattice is not None and not self.lattice.in_dual(self.beta0):
            raise ValueError(f"beta0 = {self.beta0} is not in the dual lattice")

    def truly_periodic(self, lattice: Lattice) -> bool:
        """True when beta0/2 is itself in the dual lattice."""
        return lattice.in_dual(self.beta0 / 2)


@dataclass(frozen=True)
class FrequencySet:
    """Antipodally ordered frequencies: ``gammas[j + N/2] == -gammas[j]``."""

    gammas: np.ndarray
    beta0: complex

    def __post_init__(self):
        g = np.array(self.gammas, dtype=complex)
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "beta0", complex(self.beta0))
        n = g.size
        if n == 0 or n % 2:
            raise ValueError(f"frequency set must have even positive size, got {n}")
        h = n // 2
        if not np.allclose(g[h:], -g[:h], rtol=0, atol=1e-12 * abs(self.beta0)):
            raise ValueError("frequencies are not antipodally paired")
        r2 = abs(self.beta0) ** 2
        if np.any(np.abs(np.abs(g) ** 2 - r2 / 4) > CIRCLE_RTOL * r2):
            raise ValueError("frequencies must lie on the circle |gamma| = |beta0|/2")
        if np.any(
            np.minimum(np.abs(g - self.beta0 / 2), np.abs(g + self.beta0 / 2))
            <= 1e-12 * abs(self.beta0)
        ):
            raise ValueError("frequencies must exclude +-beta0/2")

    @property
    def N(self) -> int:
        return int(self.gammas.size)

    def __len__(self):
        return self.N


def dual_basis(L: Lattice) -> tuple[complex, complex]:
    """Dual basis ``(t1*, t2*)`` with ``<ti*, tj> = delta_ij``."""
    g = L.gram
    ginv = np.linalg.inv(g)
    b = np.array([L.tau1, L.tau2])
    d = ginv @ b
    return complex(d[0]), complex(d[1])


def _sort_key(s: complex) -> float:
    return float(np.angle(s) % (2 * np.pi))


def enumerate_maslov_frequencies(L: Lattice, b: MaslovClass) -> FrequencySet:
    """All points of ``Gamma* + beta0/2`` on the circle of radius |beta0|/2,
    except +-beta0/2.

    Raises :class:`EmptyFrequencySet` when nothing is left, in which case no
    non-trivial torus has this Maslov class.
    """
    beta0 = b.beta0
    if not L.in_dual(beta0):
        raise ValueError(f"beta0 = {beta0} is not in the dual lattice")
    d1, d2 = dual_basis(L)
    half = beta0 / 2
    # gamma - beta0/2 = a t1* + b t2* has a = <gamma - beta0/2, tau1> and
    # |gamma - beta0/2| <= |beta0|
    ka = math.ceil(abs(beta0) * abs(L.tau1)) + 1
    kb = math.ceil(abs(beta0) * abs(L.tau2)) + 1
    ia, ib = np.meshgrid(np.arange(-ka, ka + 1), np.arange(-kb, kb + 1), indexing="ij")
    pts = half + ia.ravel() * d1 + ib.ravel() * d2
    r2 = abs(beta0) ** 2
    on_circle = np.abs(np.abs(pts) ** 2 - r2 / 4) <= CIRCLE_RTOL * r2
    tol = 1e-9 * abs(beta0)
    not_trivial = (np.abs(pts - half) > tol) & (np.abs(pts + half) > tol)
    found = pts[on_circle & not_trivial]
    if found.size == 0:
        raise EmptyFrequencySet(
            f"no non-trivial frequencies for beta0 = {beta0} on lattice "
            f"({L.tau1}, {L.tau2})"
        )
    s = 2 * found / beta0
    upper = found[(np.angle(s) % (2 * np.pi)) < np.pi]
    upper = np.array(sorted(upper, key=lambda g: _sort_key(2 * g / beta0)))
    if 2 * upper.size != found.size:
        raise AssertionError("frequency set is not closed under negation")
    return FrequencySet(np.concatenate([upper, -upper]), beta0)


@dataclass(frozen=True)
class MaslovIndices:
    """Winding indices ``l_j = -<gamma_j, tau1>``, ``m_j = -<gamma_j, tau2>``.

    They are integers only in the truly periodic case; otherwise they are
    half-integers and ``integral`` is False.
    """

    l: np.ndarray
    m: np.ndarray
    integral: bool

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return [(float(a), float(c)) for a, c in zip(self.l, self.m)]


def maslov_indices(F: FrequencySet, L: Lattice) -> MaslovIndices:
    g = F.gammas
    l = -real_pairing(g, L.tau1)
    m = -real_pairing(g, L.tau2)
    integral = bool(
        np.all(np.abs(l - np.round(l)) <= INTEGRAL_ATOL)
        and np.all(np.abs(m - np.round(m)) <= INTEGRAL_ATOL)
    )
    if integral:
        l, m = np.round(l), np.round(m)
    else:
        l, m = np.round(2 * l) / 2, np.round(2 * m) / 2
    return MaslovIndices(l, m, integral)


def lagrangian_angle(b: MaslovClass, z):
    """``beta(z) = 2 pi <beta0, z>``."""
    return 2 * np.pi * real_pairing(b.beta0, z)
