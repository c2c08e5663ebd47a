"""Single particle in a superposition of the two paths, read out in the
vacuum/one-particle basis of each local mode.

Two-mode basis order: |0_A 0_B>, |0_A 1_B>, |1_A 0_B>, |1_A 1_B> (A occupancy first).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochObservable, projector
from .errors import SuperselectionError, ValidationError
from .fock import Statistics
from .game import BITS, ConditionalDistribution, interference_terms, win_probability

HERMITIAN_TOL = 1e-12
PSD_FLOOR = -1e-10

VACUUM = np.array([[1, 0], [0, 0]], dtype=complex)

PHYSICALITY_NOTE = (
    "bosons only: reading out a vacuum/one-particle superposition does not "
    "conserve local particle number"
)


@dataclass(frozen=True)
class SourceAmplitudes:
    s0: complex
    s1: complex

    def __post_init__(self):
        s0, s1 = complex(self.s0), complex(self.s1)
        if abs(abs(s0) ** 2 + abs(s1) ** 2 - 1) > 1e-12:
            raise ValidationError(f"|s0|^2 + |s1|^2 must be 1, got {abs(s0) ** 2 + abs(s1) ** 2!r}")
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "s1", s1)

    @classmethod
    def from_angles(cls, chi: float, delta: float = 0.0) -> "SourceAmplitudes":
        """s0 = cos(chi), s1 = sin(chi) exp(i delta)."""
        return cls(complex(math.cos(chi)), math.sin(chi) * cmath.exp(1j * delta))

    @classmethod
    def balanced(cls) -> "SourceAmplitudes":
        return cls.from_angles(math.pi / 4)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValidationError(f"expected a 4x4 matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > HERMITIAN_TOL:
            raise ValidationError(f"density matrix trace is {np.trace(m)!r}")
        if np.linalg.eigvalsh(m).min() < PSD_FLOOR:
            raise ValidationError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = other.entries if isinstance(other, DensityMatrix) else np.asarray(other)
        return bool(np.allclose(self.entries, other, atol=atol, rtol=0))


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduced 2x2 state of side ``keep`` ('A' or 'B')."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)  # [a, b, a', b']
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("jijk->ik", r)
    raise ValidationError(f"side must be 'A' or 'B', got {keep!r}")


def prepare_state(s: SourceAmplitudes) -> DensityMatrix:
    psi = np.array([0, s.s1, s.s0, 0], dtype=complex)
    return DensityMatrix(np.outer(psi, psi.conj()))


def blocking_channel(rho: DensityMatrix, side: str) -> DensityMatrix:
    """Replace ``side`` by vacuum, keeping the other side's reduced state."""
    if side == "A":
        return DensityMatrix(np.kron(VACUUM, partial_trace(rho.entries, "B")))
    if side == "B":
        return DensityMatrix(np.kron(partial_trace(rho.entries, "A"), VACUUM))
    raise ValidationError(f"side must be 'A' or 'B', got {side!r}")


def encoded_state(s: SourceAmplitudes, x: int, y: int) -> DensityMatrix:
    """x = 1 blocks mode A, y = 1 blocks mode B."""
    rho = prepare_state(s)
    if y:
        rho = blocking_channel(rho, "B")
    if x:
        rho = blocking_channel(rho, "A")
    return rho


def measurement_distribution(
    s: SourceAmplitudes, obs_A: BlochObservable, obs_B: BlochObservable
) -> ConditionalDistribution:
    table = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(BITS, BITS):
        rho = encoded_state(s, x, y).entries
        for a, b in itertools.product(BITS, BITS):
            op = np.kron(projector(obs_A, a), projector(obs_B, b))
            table[x, y, a, b] = float(np.real(np.trace(rho @ op)))
    return ConditionalDistribution(table)


def interference_closed_form(s: SourceAmplitudes, obs_A: BlochObservable, obs_B: BlochObservable, a: int, b: int) -> float:
    """s0 s1* <0|Pa|1><1|Pb|0> + c.c."""
    pa, pb = projector(obs_A, a), projector(obs_B, b)
    term = s.s0 * s.s1.conjugate() * pa[0, 1] * pb[1, 0]
    return float(2 * term.real)


def win_probability_closed_form(s: SourceAmplitudes, obs_A: BlochObservable, obs_B: BlochObservable) -> float:
    """1/2 + (1/8)(s0 s1* <0|sA|1><1|sB|0> + c.c.)."""
    term = s.s0 * s.s1.conjugate() * obs_A.off_diagonal * obs_B.off_diagonal.conjugate()
    return 0.5 + 2 * term.real / 8


def closed_form_grid(chi, delta, theta_a, phi_a, theta_b, phi_b):
    """Vectorized closed form with s0 = cos(chi), s1 = sin(chi) exp(i delta)."""
    amp = 0.25 * np.sin(chi) * np.cos(chi) * np.sin(theta_a)
    return 0.5 + (amp * np.sin(theta_b)) * np.cos(phi_b - phi_a - delta)


def assert_physicality(stats: Statistics) -> str:
    """Return the advisory note for bosons; refuse fermions."""
    if Statistics.parse(stats) is Statistics.FERMION:
        raise SuperselectionError(
            "the parity superselection rule forbids measuring superpositions of "
            "vacuum and a single fermion; this scheme cannot run with fermions"
        )
    return PHYSICALITY_NOTE


def report(s: SourceAmplitudes, obs_A: BlochObservable, obs_B: BlochObservable, stats=Statistics.BOSON) -> dict:
    note = assert_physicality(stats)
    dist = measurement_distribution(s, obs_A, obs_B)
    return {
        "scheme": "scheme2",
        "s0": [s.s0.real, s.s0.imag],
        "s1": [s.s1.real, s.s1.imag],
        "angles": {"theta_a": obs_A.theta, "phi_a": obs_A.phi, "theta_b": obs_B.theta, "phi_b": obs_B.phi},
        "p_table": dist.to_json_dict()["p"],
        "I": {f"{a}{b}": v for (a, b), v in interference_terms(dist).items()},
        "p_win_pipeline": win_probability(dist),
        "p_win_closed_form": win_probability_closed_form(s, obs_A, obs_B),
        "physicality_note": note,
    }
