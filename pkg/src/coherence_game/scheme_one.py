"""Source particle plus pre-shared ancilla, post-selected on one particle per side.

Modes are ordered AS < AM < BS < BM (source/ancilla at Alice, source/ancilla at
Bob). Each party's qubit is |0> = source mode occupied, |1> = ancilla mode
occupied. Rounds where a party sees zero or two particles produce independent
uniform bits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import fock
from .bloch import BlochObservable, projector
from .errors import ValidationError
from .fock import AM, AS, BM, BS, StateVector, Statistics
from .game import BITS, ConditionalDistribution, interference_terms, win_probability

MODE_COUNT = 4
ALICE_MODES = (AS, AM)
BOB_MODES = (BS, BM)


@dataclass(frozen=True)
class SchemeOneConfig:
    stats: Statistics
    obs_A: BlochObservable
    obs_B: BlochObservable

    def __post_init__(self):
        object.__setattr__(self, "stats", Statistics.parse(self.stats))
        for o in (self.obs_A, self.obs_B):
            if not isinstance(o, BlochObservable):
                raise ValidationError(f"expected BlochObservable, got {type(o).__name__}")


@dataclass(frozen=True)
class PostselectedState:
    prob_one_per_side: float
    qubit_state: np.ndarray  # amplitudes on |00>,|01>,|10>,|11> (A bit first); empty if prob == 0

    @property
    def is_empty(self) -> bool:
        return self.qubit_state.size == 0


def one_particle_per_side(occupancy: tuple[int, ...]) -> bool:
    return sum(occupancy[m] for m in ALICE_MODES) == 1 and sum(occupancy[m] for m in BOB_MODES) == 1


def prepare_joint_state(stats: Statistics) -> StateVector:
    """(1/2)(a_S^+ + b_S^+)(a_M^+ + b_M^+)|vac> built from signed creations."""
    stats = Statistics.parse(stats)
    vac = fock.make_vacuum(MODE_COUNT)
    ancilla = fock.apply_creation(vac, AM, stats) + fock.apply_creation(vac, BM, stats)
    both = fock.apply_creation(ancilla, AS, stats) + fock.apply_creation(ancilla, BS, stats)
    return (0.5 * both).normalize()


def encode(state: StateVector, x: int, y: int) -> StateVector:
    """Close the blocker on the source path to A if x == 1, to B if y == 1."""
    if x:
        state = fock.apply_blocker(state, AS)
    if y:
        state = fock.apply_blocker(state, BS)
    return state


def _qubit_index(occupancy: tuple[int, ...]) -> int:
    qa = 0 if occupancy[AS] else 1
    qb = 0 if occupancy[BS] else 1
    return 2 * qa + qb


def encode_and_postselect(stats: Statistics, x: int, y: int) -> PostselectedState:
    encoded = encode(prepare_joint_state(stats), x, y)
    prob, sector = fock.occupancy_sector(encoded, one_particle_per_side)
    if prob == 0.0:
        return PostselectedState(0.0, np.zeros(0, dtype=complex))
    psi = np.zeros(4, dtype=complex)
    for key, amp in sector:
        if key.absorbed:
            # both particles are detected, so nothing can have been absorbed
            raise AssertionError(f"post-selected component {key} carries a loss record")
        psi[_qubit_index(key.occupancy)] += amp
    return PostselectedState(prob, psi)


def _qubit_outcome_probs(psi: np.ndarray, obs_A: BlochObservable, obs_B: BlochObservable) -> np.ndarray:
    out = np.zeros((2, 2))
    for a, b in itertools.product(BITS, BITS):
        op = np.kron(projector(obs_A, a), projector(obs_B, b))
        out[a, b] = float(np.real(np.vdot(psi, op @ psi)))
    return out


def measurement_distribution(config: SchemeOneConfig) -> ConditionalDistribution:
    """Exact table: post-selected qubit statistics mixed with uniform fallback."""
    table = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(BITS, BITS):
        post = encode_and_postselect(config.stats, x, y)
        table[x, y] = (1 - post.prob_one_per_side) * 0.25
        if not post.is_empty:
            table[x, y] += post.prob_one_per_side * _qubit_outcome_probs(post.qubit_state, config.obs_A, config.obs_B)
    return ConditionalDistribution(table)


def measurement_distribution_fock(config: SchemeOneConfig) -> ConditionalDistribution:
    """Same table computed entirely in Fock space.

    Each party rotates its mode pair so the observable's eigenbasis lands on
    (source mode, ancilla mode), then counts particles. Outcome 0 means the
    particle was found in the source mode.
    """
    stats = config.stats
    rot_A = fock.lift_su2(config.obs_A.eigenbasis().conj().T, ALICE_MODES, stats)
    rot_B = fock.lift_su2(config.obs_B.eigenbasis().conj().T, BOB_MODES, stats)
    joint = prepare_joint_state(stats)
    table = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(BITS, BITS):
        final = rot_B(rot_A(encode(joint, x, y)))
        for occ, prob in final.occupancy_probabilities().items():
            if one_particle_per_side(occ):
                a = 0 if occ[AS] else 1
                b = 0 if occ[BS] else 1
                table[x, y, a, b] += prob
            else:
                table[x, y] += prob / 4
    return ConditionalDistribution(table)


def win_probability_closed_form(config: SchemeOneConfig) -> float:
    """1/2 +- (1/32)(<0|sA|1><1|sB|0> + <1|sA|0><0|sB|1>), + for bosons."""
    sa, sb = config.obs_A.matrix, config.obs_B.matrix
    corr = sa[0, 1] * sb[1, 0] + sa[1, 0] * sb[0, 1]
    sign = 1 if config.stats is Statistics.BOSON else -1
    return float(0.5 + sign * np.real(corr) / 32)


def closed_form_grid(theta_a, phi_a, theta_b, phi_b, stats: Statistics = Statistics.BOSON):
    """Vectorized closed form over broadcastable angle arrays."""
    sign = 1 if Statistics.parse(stats) is Statistics.BOSON else -1
    return 0.5 + sign * np.sin(theta_a) * np.sin(theta_b) * np.cos(phi_b - phi_a) / 16


def report(config: SchemeOneConfig) -> dict:
    dist = measurement_distribution(config)
    return {
        "scheme": "scheme1",
        "stats": config.stats.value,
        "angles": {
            "theta_a": config.obs_A.theta,
            "phi_a": config.obs_A.phi,
            "theta_b": config.obs_B.theta,
            "phi_b": config.obs_B.phi,
        },
        "p_table": dist.to_json_dict()["p"],
        "I": {f"{a}{b}": v for (a, b), v in interference_terms(dist).items()},
        "postselection": {
            f"{x}{y}": encode_and_postselect(config.stats, x, y).prob_one_per_side
            for x, y in itertools.product(BITS, BITS)
        },
        "p_win_simulated": win_probability(dist),
        "p_win_fock": win_probability(measurement_distribution_fock(config)),
        "p_win_closed_form": win_probability_closed_form(config),
    }
