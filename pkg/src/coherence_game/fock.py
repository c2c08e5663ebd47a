"""Binary-occupancy second quantization.

States live on labelled modes with occupation 0 or 1. Creation operators follow
bosonic (commuting) or fermionic (Jordan-Wigner signed) statistics, blockers
move a particle into a per-mode loss record, and 2x2 unitaries are lifted to
mode pairs.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterator, Mapping

import numpy as np

from .errors import ConfigurationError, UnsupportedOccupancyError, ValidationError

MAX_MODES = 8

# Canonical labels for the two-particle (source + ancilla) scheme.
AS, AM, BS, BM = 0, 1, 2, 3
MODE_NAMES = ("AS", "AM", "BS", "BM")


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"

    @classmethod
    def parse(cls, value: "str | Statistics") -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown statistics {value!r}; expected 'boson' or 'fermion'") from None


@dataclass(frozen=True, order=True)
class FockBasisElement:
    """Occupation-number ket plus a record of particles absorbed per mode.

    Two elements with the same occupancy but different loss records are
    orthogonal: the absorbed particle sits in a distinguishable environment.
    """

    occupancy: tuple[int, ...]
    lost: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.lost:
            object.__setattr__(self, "lost", (0,) * len(self.occupancy))
        if len(self.lost) != len(self.occupancy):
            raise ValidationError("loss record length must match the mode count")
        if any(n not in (0, 1) for n in self.occupancy):
            raise UnsupportedOccupancyError(f"occupancy {self.occupancy} outside the binary regime")
        if any(n < 0 for n in self.lost):
            raise ValidationError("loss counts must be non-negative")

    @property
    def absorbed(self) -> int:
        return sum(self.lost)

    @property
    def particle_number(self) -> int:
        return sum(self.occupancy) + self.absorbed

    def with_mode(self, mode: int, value: int) -> "FockBasisElement":
        occ = list(self.occupancy)
        occ[mode] = value
        return FockBasisElement(tuple(occ), self.lost)


@dataclass(frozen=True)
class StateVector:
    """Immutable sparse vector over :class:`FockBasisElement` keys.

    Zero amplitudes are dropped. ``normalized`` is False for intermediate
    branches (e.g. after a Pauli-blocked creation) whose norm may differ from 1.
    """

    mode_count: int
    amplitudes: Mapping[FockBasisElement, complex] = field(default_factory=dict)
    normalized: bool = True

    def __post_init__(self):
        clean = {}
        for key, amp in self.amplitudes.items():
            if len(key.occupancy) != self.mode_count:
                raise ValidationError(f"basis element {key} does not have {self.mode_count} modes")
            amp = complex(amp)
            if amp != 0:
                clean[key] = amp
        object.__setattr__(self, "amplitudes", MappingProxyType(dict(sorted(clean.items()))))

    def __iter__(self) -> Iterator[tuple[FockBasisElement, complex]]:
        return iter(self.amplitudes.items())

    def __len__(self) -> int:
        return len(self.amplitudes)

    def amplitude(self, occupancy, lost=None) -> complex:
        key = FockBasisElement(tuple(occupancy), tuple(lost) if lost is not None else ())
        return self.amplitudes.get(key, 0j)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def is_empty(self) -> bool:
        return not self.amplitudes

    def __add__(self, other: "StateVector") -> "StateVector":
        if other.mode_count != self.mode_count:
            raise ValidationError("cannot add states over different mode counts")
        out = dict(self.amplitudes)
        for key, amp in other:
            out[key] = out.get(key, 0j) + amp
        return StateVector(self.mode_count, out, normalized=False)

    def __mul__(self, scalar: complex) -> "StateVector":
        return StateVector(self.mode_count, {k: scalar * a for k, a in self}, normalized=False)

    __rmul__ = __mul__

    def normalize(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return StateVector(self.mode_count, {k: a / nrm for k, a in self}, normalized=True)

    def inner(self, other: "StateVector") -> complex:
        """Return <self|other>."""
        return complex(sum(np.conj(a) * other.amplitudes.get(k, 0j) for k, a in self))

    def occupancy_probabilities(self) -> dict[tuple[int, ...], float]:
        """Detection statistics: loss records are traced out incoherently."""
        probs: dict[tuple[int, ...], float] = {}
        for key, amp in self:
            probs[key.occupancy] = probs.get(key.occupancy, 0.0) + abs(amp) ** 2
        return probs


def _check_mode(state: StateVector, mode: int) -> None:
    if not 0 <= mode < state.mode_count:
        raise ConfigurationError(f"mode {mode} out of range for {state.mode_count} modes")


def enumerate_occupancies(mode_count: int) -> list[tuple[int, ...]]:
    """All 2**mode_count binary occupancy tuples in lexicographic order."""
    return list(itertools.product((0, 1), repeat=mode_count))


def make_vacuum(mode_count: int) -> StateVector:
    if not 1 <= mode_count <= MAX_MODES:
        raise ConfigurationError(f"mode_count must be in [1, {MAX_MODES}], got {mode_count}")
    return StateVector(mode_count, {FockBasisElement((0,) * mode_count): 1.0})


def apply_creation(state: StateVector, mode: int, stats: Statistics) -> StateVector:
    """Apply a creation operator on ``mode``.

    Fermionic sign is (-1)**(occupied modes with lower ordinal). Fermionic
    components already holding a particle are annihilated; bosonic double
    occupancy raises :class:`UnsupportedOccupancyError`.
    """
    _check_mode(state, mode)
    stats = Statistics.parse(stats)
    out: dict[FockBasisElement, complex] = {}
    dropped = False
    for key, amp in state:
        if key.occupancy[mode]:
            if stats is Statistics.BOSON:
                raise UnsupportedOccupancyError(
                    f"bosonic creation on occupied mode {mode} leaves the binary-occupancy regime"
                )
            dropped = True
            continue
        sign = 1
        if stats is Statistics.FERMION and sum(key.occupancy[:mode]) % 2:
            sign = -1
        new = key.with_mode(mode, 1)
        out[new] = out.get(new, 0j) + sign * amp
    return StateVector(state.mode_count, out, normalized=state.normalized and not dropped)


def apply_blocker(state: StateVector, mode: int) -> StateVector:
    """Absorb any particle in ``mode`` into the environment, keeping amplitudes.

    The map is injective unless ``mode`` was refilled after an earlier
    absorption in a superposed branch; that case raises
    :class:`UnsupportedOccupancyError` instead of merging orthogonal branches.
    """
    _check_mode(state, mode)
    out: dict[FockBasisElement, complex] = {}
    for key, amp in state:
        if key.occupancy[mode]:
            lost = list(key.lost)
            lost[mode] += 1
            key = FockBasisElement(key.with_mode(mode, 0).occupancy, tuple(lost))
        if key in out:
            raise UnsupportedOccupancyError(
                f"blocking mode {mode} would merge two orthogonal branches into {key}"
            )
        out[key] = amp
    return StateVector(state.mode_count, out, normalized=state.normalized)


def _check_unitary(u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(2), atol=tol, rtol=0):
        raise ValidationError("matrix is not unitary within 1e-10")
    return u


@dataclass(frozen=True)
class LiftedUnitary:
    """Fock-space action of a 2x2 unitary on the ordered mode pair ``pair``.

    Single-particle block: u in the basis (particle in pair[0], particle in
    pair[1]). Empty pair: identity. Doubly occupied pair: phase det(u).
    Fermionic hops between non-adjacent modes pick up the Jordan-Wigner sign
    of the occupied modes in between.
    """

    u: np.ndarray
    pair: tuple[int, int]
    stats: Statistics = Statistics.BOSON

    def __call__(self, state: StateVector) -> StateVector:
        p, q = self.pair
        _check_mode(state, p)
        _check_mode(state, q)
        det = complex(np.linalg.det(self.u))
        lo, hi = min(p, q), max(p, q)
        out: dict[FockBasisElement, complex] = {}

        def add(key, amp):
            if amp != 0:
                out[key] = out.get(key, 0j) + amp

        for key, amp in state:
            n_p, n_q = key.occupancy[p], key.occupancy[q]
            if n_p == n_q == 0:
                add(key, amp)
            elif n_p and n_q:
                add(key, det * amp)
            else:
                sign = 1
                if self.stats is Statistics.FERMION and sum(key.occupancy[lo + 1:hi]) % 2:
                    sign = -1
                col = 0 if n_p else 1
                at_p = FockBasisElement(key.with_mode(q, 0).with_mode(p, 1).occupancy, key.lost)
                at_q = FockBasisElement(key.with_mode(p, 0).with_mode(q, 1).occupancy, key.lost)
                # The hop to the other mode carries the sign; staying put does not.
                add(at_p, self.u[0, col] * amp * (1 if col == 0 else sign))
                add(at_q, self.u[1, col] * amp * (1 if col == 1 else sign))
        return StateVector(state.mode_count, out, normalized=state.normalized)


def lift_su2(u, pair: tuple[int, int], stats: Statistics = Statistics.BOSON) -> LiftedUnitary:
    u = _check_unitary(u)
    p, q = pair
    if p == q:
        raise ValidationError("lifted unitary needs two distinct modes")
    return LiftedUnitary(u, (int(p), int(q)), Statistics.parse(stats))


def occupancy_sector(
    state: StateVector, predicate: Callable[[tuple[int, ...]], bool]
) -> tuple[float, StateVector]:
    """Probability of the occupancy event and the renormalized restriction.

    Loss records are summed over. A zero-probability event returns ``(0.0, empty)``.
    """
    kept = {key: amp for key, amp in state if predicate(key.occupancy)}
    prob = float(sum(abs(a) ** 2 for a in kept.values()))
    if prob == 0.0:
        return 0.0, StateVector(state.mode_count, {})
    scale = 1 / np.sqrt(prob)
    return prob, StateVector(state.mode_count, {k: a * scale for k, a in kept.items()})
