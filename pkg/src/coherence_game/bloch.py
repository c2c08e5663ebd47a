"""Binary qubit observables parametrized on the Bloch sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class BlochObservable:
    """sigma = sin(theta)cos(phi) X + sin(theta)sin(phi) Y + cos(theta) Z.

    theta in [0, pi], phi in [0, 2 pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi) or not math.isfinite(self.theta):
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi < TWO_PI) or not math.isfinite(self.phi):
            raise ValidationError(f"phi must lie in [0, 2 pi), got {self.phi!r}")

    @classmethod
    def x(cls) -> "BlochObservable":
        return cls(math.pi / 2, 0.0)

    @classmethod
    def y(cls) -> "BlochObservable":
        return cls(math.pi / 2, math.pi / 2)

    @classmethod
    def z(cls) -> "BlochObservable":
        return cls(0.0, 0.0)

    @classmethod
    def wrapped(cls, theta: float, phi: float) -> "BlochObservable":
        """Build with phi reduced modulo 2 pi."""
        phi = math.fmod(phi, TWO_PI)
        if phi < 0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        return cls(theta, phi)

    def negated(self) -> "BlochObservable":
        """The observable -sigma, i.e. the reversed Bloch vector."""
        return BlochObservable.wrapped(math.pi - self.theta, self.phi + math.pi)

    @property
    def off_diagonal(self) -> complex:
        """<0|sigma|1> = sin(theta) exp(-i phi)."""
        return math.sin(self.theta) * complex(math.cos(self.phi), -math.sin(self.phi))

    @property
    def matrix(self) -> np.ndarray:
        return observable_matrix(self)

    def eigenbasis(self) -> np.ndarray:
        """SU(2) matrix whose columns are the +1 and -1 eigenvectors."""
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        ph = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[c, -s * ph.conjugate()], [s * ph, c]], dtype=complex)


def observable_matrix(o: BlochObservable) -> np.ndarray:
    st = math.sin(o.theta)
    return (
        st * math.cos(o.phi) * SIGMA_X
        + st * math.sin(o.phi) * SIGMA_Y
        + math.cos(o.theta) * SIGMA_Z
    )


def projector(o: BlochObservable, outcome: int) -> np.ndarray:
    """Projector (1 + (-1)^outcome sigma) / 2."""
    if outcome not in (0, 1):
        raise ValidationError(f"outcome must be 0 or 1, got {outcome!r}")
    return 0.5 * (IDENTITY2 + (-1) ** outcome * observable_matrix(o))
