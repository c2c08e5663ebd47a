"""Probability algebra of the coherence game.

Inputs x, y are the blocker settings on the channels to A and B, outputs a, b
are the parties' bits, and the game is won when ``a ^ b == x ^ y``.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ValidationError

NORM_TOL = 1e-12
BITS = (0, 1)

# Deterministic one-bit response functions, stored as (f(0), f(1)).
Response = tuple[int, int]
CONST_ZERO: Response = (0, 0)
IDENTITY: Response = (0, 1)
NEGATION: Response = (1, 0)
CONST_ONE: Response = (1, 1)
RESPONSES: tuple[Response, ...] = (CONST_ZERO, IDENTITY, NEGATION, CONST_ONE)


def wins(x: int, y: int, a: int, b: int) -> bool:
    return (a ^ b) == (x ^ y)


@dataclass(frozen=True, eq=False)
class ConditionalDistribution:
    """The table p(ab|xy), stored as an array indexed ``[x, y, a, b]``."""

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.shape == (4, 4):
            t = t.reshape(2, 2, 2, 2)
        if t.shape != (2, 2, 2, 2):
            raise ValidationError(f"table must have shape (2,2,2,2) or (4,4), got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ValidationError("table has non-finite entries")
        if t.min() < -NORM_TOL:
            raise ValidationError(f"negative probability {t.min()!r}")
        sums = t.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1)) > NORM_TOL:
            raise ValidationError(f"rows not normalized: per-(x,y) sums {sums.ravel().tolist()}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def p(self, a: int, b: int, x: int, y: int) -> float:
        return float(self.table[x, y, a, b])

    def rows(self) -> np.ndarray:
        """4x4 view: row 2x+y, column 2a+b."""
        return self.table.reshape(4, 4)

    def __eq__(self, other):
        if not isinstance(other, ConditionalDistribution):
            return NotImplemented
        return bool(np.array_equal(self.table, other.table))

    def allclose(self, other: "ConditionalDistribution", atol: float = NORM_TOL) -> bool:
        return bool(np.allclose(self.table, other.table, atol=atol, rtol=0))

    @classmethod
    def uniform(cls) -> "ConditionalDistribution":
        return cls(np.full((2, 2, 2, 2), 0.25))

    @classmethod
    def mixture(cls, parts: Sequence[tuple[float, "ConditionalDistribution"]]) -> "ConditionalDistribution":
        weights = np.array([w for w, _ in parts], dtype=float)
        if weights.min() < 0 or abs(weights.sum() - 1) > NORM_TOL:
            raise ValidationError("mixture weights must be non-negative and sum to 1")
        return cls(sum(w * d.table for w, d in parts))

    # serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"p": self.rows().tolist()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConditionalDistribution":
        if set(data) - {"p"}:
            raise ValidationError(f"unexpected keys {sorted(set(data) - {'p'})}")
        return cls(np.asarray(data["p"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConditionalDistribution":
        return cls.from_json_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "a", "b", "p"])
        for x, y, a, b in itertools.product(BITS, repeat=4):
            writer.writerow([x, y, a, b, repr(float(self.table[x, y, a, b]))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ConditionalDistribution":
        table = np.full((2, 2, 2, 2), np.nan)
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["x", "y", "a", "b", "p"]:
            raise ValidationError(f"bad CSV header {reader.fieldnames}")
        for row in reader:
            table[int(row["x"]), int(row["y"]), int(row["a"]), int(row["b"])] = float(row["p"])
        if np.isnan(table).any():
            raise ValidationError("CSV does not cover all 16 (x, y, a, b) entries")
        return cls(table)


def interference_term(dist: ConditionalDistribution, a: int, b: int) -> float:
    """Signed sum over blocker settings: sum_xy (-1)^(x xor y) p(ab|xy)."""
    return float(sum((-1) ** (x ^ y) * dist.table[x, y, a, b] for x, y in itertools.product(BITS, BITS)))


def interference_terms(dist: ConditionalDistribution) -> dict[tuple[int, int], float]:
    return {(a, b): interference_term(dist, a, b) for a, b in itertools.product(BITS, BITS)}


def win_probability_direct(dist: ConditionalDistribution) -> float:
    """Average over the four uniformly drawn inputs of the winning mass."""
    total = sum(
        dist.table[x, y, a, b]
        for x, y, a, b in itertools.product(BITS, repeat=4)
        if wins(x, y, a, b)
    )
    return float(total / 4)


def win_probability_from_interference(dist: ConditionalDistribution) -> float:
    return 0.5 + (interference_term(dist, 0, 0) + interference_term(dist, 1, 1)) / 4


def win_probability(dist: ConditionalDistribution) -> float:
    direct = win_probability_direct(dist)
    via_i = win_probability_from_interference(dist)
    if abs(direct - via_i) > NORM_TOL:
        raise RuntimeError(f"win probability identity broken: direct {direct!r} vs interference {via_i!r}")
    return direct


@dataclass(frozen=True)
class CoherenceReport:
    I: dict[tuple[int, int], float]
    p_win: float

    def to_json_dict(self) -> dict:
        return {"I": {f"{a}{b}": v for (a, b), v in self.I.items()}, "p_win": self.p_win}


def coherence_report(dist: ConditionalDistribution) -> CoherenceReport:
    return CoherenceReport(interference_terms(dist), win_probability(dist))


# classical strategies ------------------------------------------------------


def _check_response(r) -> Response:
    r = tuple(int(v) for v in r)
    if len(r) != 2 or any(v not in BITS for v in r):
        raise ValidationError(f"response must be a pair of bits (f(0), f(1)), got {r}")
    return r  # type: ignore[return-value]


@dataclass(frozen=True)
class ClassicalStrategy:
    """One-way signalling strategy.

    With weight ``lambda_sa`` the carrier travels to A, so both outputs are
    functions of x only: ``(a(x), b(x)) = response_sa``. With weight
    ``lambda_sb`` it travels to B and both outputs are functions of y.
    """

    lambda_sa: float
    lambda_sb: float
    response_sa: tuple[Response, Response] = (CONST_ZERO, CONST_ZERO)
    response_sb: tuple[Response, Response] = (CONST_ZERO, CONST_ZERO)

    def __post_init__(self):
        if self.lambda_sa < 0 or self.lambda_sb < 0 or abs(self.lambda_sa + self.lambda_sb - 1) > NORM_TOL:
            raise ValidationError("branch weights must be non-negative and sum to 1")
        object.__setattr__(self, "response_sa", tuple(_check_response(r) for r in self.response_sa))
        object.__setattr__(self, "response_sb", tuple(_check_response(r) for r in self.response_sb))


@dataclass(frozen=True)
class StrategyMixture:
    """Shared randomness: a finite convex combination of strategies."""

    components: tuple[tuple[float, ClassicalStrategy], ...]

    def __post_init__(self):
        weights = [w for w, _ in self.components]
        if not weights or min(weights) < 0 or abs(sum(weights) - 1) > NORM_TOL:
            raise ValidationError("mixture weights must be non-negative and sum to 1")


DETECTION_RESPONSE_SA = (NEGATION, CONST_ZERO)
DETECTION_RESPONSE_SB = (CONST_ZERO, NEGATION)


def detection_strategy(lambda_sa: float = 0.5) -> ClassicalStrategy:
    """Each party outputs 1 iff the carrier reached it (blocker open on its path)."""
    return ClassicalStrategy(lambda_sa, 1 - lambda_sa, DETECTION_RESPONSE_SA, DETECTION_RESPONSE_SB)


def _branch_table(responses: tuple[Response, Response], on_x: bool) -> np.ndarray:
    t = np.zeros((2, 2, 2, 2))
    fa, fb = responses
    for x, y in itertools.product(BITS, BITS):
        bit = x if on_x else y
        t[x, y, fa[bit], fb[bit]] = 1.0
    return t


def strategy_distribution(s: Union[ClassicalStrategy, StrategyMixture]) -> ConditionalDistribution:
    if isinstance(s, StrategyMixture):
        return ConditionalDistribution(sum(w * strategy_distribution(c).table for w, c in s.components))
    table = s.lambda_sa * _branch_table(s.response_sa, True) + s.lambda_sb * _branch_table(s.response_sb, False)
    return ConditionalDistribution(table)


def enumerate_deterministic_strategies() -> list[ClassicalStrategy]:
    """All 32 extremal strategies: branch x a(.) x b(.)."""
    out = []
    for branch in ("SA", "SB"):
        for fa, fb in itertools.product(RESPONSES, RESPONSES):
            if branch == "SA":
                out.append(ClassicalStrategy(1.0, 0.0, response_sa=(fa, fb)))
            else:
                out.append(ClassicalStrategy(0.0, 1.0, response_sb=(fa, fb)))
    return out


def random_strategy_mixture(rng: np.random.Generator, max_components: int = 6) -> StrategyMixture:
    """Random shared-randomness mixture of random-lambda strategies."""
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    comps = []
    for w in weights:
        lam = float(rng.random())
        pick = rng.integers(0, 4, size=4)
        comps.append(
            (
                float(w),
                ClassicalStrategy(
                    lam,
                    1 - lam,
                    (RESPONSES[pick[0]], RESPONSES[pick[1]]),
                    (RESPONSES[pick[2]], RESPONSES[pick[3]]),
                ),
            )
        )
    # renormalize float weights exactly
    total = sum(w for w, _ in comps)
    return StrategyMixture(tuple((w / total, c) for w, c in comps))
