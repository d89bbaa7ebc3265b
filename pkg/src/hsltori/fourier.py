"""Finite vector-valued Fourier series on the plane.

A series is ``sum_k c_k e_{w_k}(z)`` with ``e_w(z) = exp(2 pi i <w, z>)``,
frequencies ``w_k`` complex and coefficients ``c_k`` vectors in C^d.  Since
``d/dz e_w = i pi conj(w) e_w`` and ``d/dzbar e_w = i pi w e_w``, all
derivatives are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import real_pairing


def character(w, z):
    """``e_w(z)`` broadcast as ``z[..., None]`` against ``w``."""
    z = np.asarray(z, dtype=complex)
    return np.exp(2j * np.pi * real_pairing(z[..., None], np.asarray(w)))


@dataclass(frozen=True, eq=False)
class TrigSeries:
    freqs: np.ndarray  # (K,)
    coefs: np.ndarray  # (K, d)

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=complex).ravel()
        c = np.asarray(self.coefs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[0] != f.size:
            raise ValueError("one coefficient row per frequency")
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "coefs", c)

    @property
    def dim(self) -> int:
        return self.coefs.shape[1]

    def __call__(self, z):
        return character(self.freqs, z) @ self.coefs

    def d_z(self, order: int = 1) -> "TrigSeries":
        return TrigSeries(self.freqs, (1j * np.pi * np.conj(self.freqs))[:, None] ** order * self.coefs)

    def d_zbar(self, order: int = 1) -> "TrigSeries":
        return TrigSeries(self.freqs, (1j * np.pi * self.freqs)[:, None] ** order * self.coefs)

    def conj(self) -> "TrigSeries":
        return TrigSeries(-self.freqs, np.conj(self.coefs))

    def shift(self, w) -> "TrigSeries":
        """Multiply by ``e_w``."""
        return TrigSeries(self.freqs + w, self.coefs)

    def matmul(self, M) -> "TrigSeries":
        """Pointwise ``M @ value``."""
        return TrigSeries(self.freqs, self.coefs @ np.asarray(M).T)

    def scale(self, c) -> "TrigSeries":
        return TrigSeries(self.freqs, c * self.coefs)

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        return TrigSeries(
            np.concatenate([self.freqs, other.freqs]),
            np.concatenate([self.coefs, other.coefs]),
        )

    def __sub__(self, other: "TrigSeries") -> "TrigSeries":
        return self + other.scale(-1)

    @classmethod
    def zero(cls, dim: int) -> "TrigSeries":
        return cls(np.zeros(1, complex), np.zeros((1, dim), complex))
