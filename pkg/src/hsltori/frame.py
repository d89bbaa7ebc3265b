"""The ambient frame of R^4: complex structures J, L and the unitary basis v."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["AmbientFrame", "FRAME", "exp_J"]


def _build():
    eps = np.eye(4)
    J = np.zeros((4, 4))
    J[:, 0], J[:, 1], J[:, 2], J[:, 3] = eps[1], -eps[0], eps[3], -eps[2]
    L = np.zeros((4, 4))
    L[:, 0], L[:, 1], L[:, 2], L[:, 3] = eps[2], -eps[3], -eps[0], eps[1]
    v1 = (eps[0] - 1j * eps[1]) / np.sqrt(2)
    v2 = (eps[2] - 1j * eps[3]) / np.sqrt(2)
    v = np.array([v1, v2, v1.conj(), v2.conj()])
    return eps, J, L, v


@dataclass(frozen=True, eq=False)
class AmbientFrame:
    """``J e1 = e2, J e3 = e4``; ``L e1 = e3, L e2 = -e4``;
    ``v1 = (e1 - i e2)/sqrt2, v2 = (e3 - i e4)/sqrt2, v3 = conj v1, v4 = conj v2``.
    """

    epsilon: np.ndarray = field(init=False)
    J: np.ndarray = field(init=False)
    L: np.ndarray = field(init=False)
    v: np.ndarray = field(init=False)  # rows v1..v4

    def __post_init__(self):
        for name, val in zip(("epsilon", "J", "L", "v"), _build()):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def P_plus(self) -> np.ndarray:
        """Projector onto the +i eigenspace of J."""
        return (np.eye(4) - 1j * self.J) / 2

    @property
    def P_minus(self) -> np.ndarray:
        return (np.eye(4) + 1j * self.J) / 2

    def to_v(self, x):
        """Components of x in the basis v (Hermitian orthonormal)."""
        return np.asarray(x) @ self.v.conj().T

    def from_v(self, c):
        return np.asarray(c) @ self.v


FRAME = AmbientFrame()


def exp_J(theta):
    """``exp(theta J) = cos(theta) I + sin(theta) J``, batched over theta."""
    theta = np.asarray(theta)
    return (
        np.cos(theta)[..., None, None] * np.eye(4)
        + np.sin(theta)[..., None, None] * FRAME.J
    )
