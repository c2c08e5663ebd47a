"""Seeded Monte Carlo rounds of the game and the Azuma significance test."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .game import ConditionalDistribution

DEFAULT_ALPHA = 0.01
LN10 = math.log(10.0)


@dataclass(frozen=True, eq=False)
class TrialLog:
    seed: int
    x: np.ndarray
    y: np.ndarray
    a: np.ndarray
    b: np.ndarray
    win: np.ndarray

    def __post_init__(self):
        for name in ("x", "y", "a", "b", "win"):
            arr = np.asarray(getattr(self, name), dtype=np.int8)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return int(self.win.size)

    def rounds(self):
        return zip(self.x.tolist(), self.y.tolist(), self.a.tolist(), self.b.tolist(), self.win.tolist())

    def __eq__(self, other):
        if not isinstance(other, TrialLog):
            return NotImplemented
        return self.seed == other.seed and all(
            np.array_equal(getattr(self, k), getattr(other, k)) for k in ("x", "y", "a", "b", "win")
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["round", "x", "y", "a", "b", "win"])
        for i, row in enumerate(self.rounds()):
            writer.writerow([i, *row])
        return buf.getvalue()


@dataclass(frozen=True)
class SignificanceReport:
    f_n: float
    epsilon: float
    bound: float  # min(1, raw_bound)
    raw_bound: float
    log10_bound: float  # log10 of raw_bound; finite even where raw_bound underflows
    n: int
    alpha: float
    rejected: bool


def derive_seed(master_seed: int, index: int) -> int:
    """Independent 64-bit seed for worker ``index`` of a batch."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def simulate_game(dist: ConditionalDistribution, n: int, seed: int) -> TrialLog:
    """n i.i.d. rounds; outputs drawn by inverse CDF over (a,b) = 00, 01, 10, 11."""
    if not isinstance(dist, ConditionalDistribution):
        raise ValidationError(f"expected ConditionalDistribution, got {type(dist).__name__}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    inputs = rng.integers(0, 4, size=n)
    u = rng.random(n)
    cdf = np.cumsum(dist.rows(), axis=1)
    cdf[:, -1] = 1.0
    outcome = np.minimum((u[:, None] >= cdf[inputs]).sum(axis=1), 3)
    x, y = inputs >> 1, inputs & 1
    a, b = outcome >> 1, outcome & 1
    win = ((a ^ b) == (x ^ y)).astype(np.int8)
    return TrialLog(int(seed), x, y, a, b, win)


def relative_frequency(log: TrialLog) -> float:
    if log.n == 0:
        raise ValidationError("empty trial log")
    return float(log.win.mean())


def _check_bound_args(n: int, epsilon: float) -> None:
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if not epsilon >= 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon}")


def azuma_bound(n: int, epsilon: float) -> float:
    """Two-sided tail bound 2 exp(-2 n eps^2) on |F_N - 1/2| >= eps."""
    _check_bound_args(n, epsilon)
    return 2.0 * math.exp(-2.0 * n * epsilon**2)


def log10_azuma_bound(n: int, epsilon: float) -> float:
    _check_bound_args(n, epsilon)
    return math.log10(2.0) - 2.0 * n * epsilon**2 / LN10


def significance(log: TrialLog, alpha: float = DEFAULT_ALPHA) -> SignificanceReport:
    f_n = relative_frequency(log)
    eps = abs(f_n - 0.5)
    raw = azuma_bound(log.n, eps)
    return SignificanceReport(
        f_n=f_n,
        epsilon=eps,
        bound=min(1.0, raw),
        raw_bound=raw,
        log10_bound=log10_azuma_bound(log.n, eps),
        n=log.n,
        alpha=alpha,
        rejected=raw < alpha,
    )


def summary(log: TrialLog, alpha: float = DEFAULT_ALPHA) -> dict:
    rep = significance(log, alpha)
    return {
        "seed": log.seed,
        "n": rep.n,
        "f_n": rep.f_n,
        "epsilon": rep.epsilon,
        "bound": rep.bound,
        "raw_bound": rep.raw_bound,
        "log10_bound": rep.log10_bound,
        "alpha": rep.alpha,
        "rejected": rep.rejected,
    }


def batch_frequencies(dist: ConditionalDistribution, n: int, master_seed: int, runs: int) -> np.ndarray:
    """F_N for ``runs`` independent logs seeded by :func:`derive_seed`."""
    return np.array([relative_frequency(simulate_game(dist, n, derive_seed(master_seed, i))) for i in range(runs)])
