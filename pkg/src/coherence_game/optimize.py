"""Exhaustive grid search over measurement settings.

Every axis is sampled with ``resolution`` points on a closed interval, so the
grids for resolutions r and R are nested whenever (r - 1) divides (R - 1), and
theta = pi/2, phi in {0, pi} lie on the grid for every odd resolution. Azimuths
are sampled on [0, 2 pi]; the duplicate endpoint is harmless and is wrapped
back to 0 when observables are built.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import scheme_one, scheme_two
from .bloch import BlochObservable, observable_matrix, projector  # noqa: F401  (re-exported)
from .errors import ConfigurationError
from .fock import Statistics

TIE_TOL = 1e-12
CHUNK_SIZE = 2_000_000
MAX_CSV_POINTS = 2_000_000


@dataclass(frozen=True)
class Axis:
    name: str
    lower: float
    upper: float

    def points(self, resolution: int) -> np.ndarray:
        return np.linspace(self.lower, self.upper, resolution)


@dataclass(frozen=True)
class SweepResult:
    best_params: dict[str, float]
    best_value: float
    grid_resolution: int
    evaluations: int
    extras: dict = field(default_factory=dict)


def grid_search(
    objective: Callable[..., np.ndarray],
    axes: Sequence[Axis],
    resolution: int,
    *,
    vectorized: bool = True,
) -> SweepResult:
    """Maximize ``objective`` over the uniform grid spanned by ``axes``.

    ``objective`` receives one argument per axis. When ``vectorized`` the
    arguments are broadcastable arrays (scalars for the outer axes); otherwise
    it is called once per grid point with floats.

    Ties within ``TIE_TOL`` go to the lexicographically smallest index tuple,
    which is the first point reached in C order.
    """
    if resolution < 1:
        raise ConfigurationError(f"resolution must be >= 1, got {resolution}")
    grids = [ax.points(resolution) for ax in axes]
    shape = tuple(len(g) for g in grids)
    total = math.prod(shape)

    if not vectorized:
        best_val, best_idx = -math.inf, None
        for idx in itertools.product(*(range(s) for s in shape)):
            val = float(objective(*(grids[i][j] for i, j in enumerate(idx))))
            if val > best_val + TIE_TOL:
                best_val, best_idx = val, idx
        return _result(axes, grids, best_idx, best_val, resolution, total)

    # split into outer (looped) and inner (broadcast) axes
    split = 0
    while split < len(shape) and math.prod(shape[split:]) > CHUNK_SIZE:
        split += 1
    inner_shape = shape[split:]
    inner_args = []
    for k, g in enumerate(grids[split:]):
        bshape = [1] * len(inner_shape)
        bshape[k] = len(g)
        inner_args.append(g.reshape(bshape))

    best_val, best_idx = -math.inf, None
    for outer in itertools.product(*(range(s) for s in shape[:split])):
        outer_args = [float(grids[i][j]) for i, j in enumerate(outer)]
        vals = np.broadcast_to(np.asarray(objective(*outer_args, *inner_args), dtype=float), inner_shape)
        chunk_max = float(vals.max())
        if chunk_max > best_val + TIE_TOL:
            flat = int(np.flatnonzero(vals.ravel() >= chunk_max - TIE_TOL)[0])
            inner = np.unravel_index(flat, inner_shape) if inner_shape else ()
            best_idx = tuple(outer) + tuple(int(i) for i in inner)
            best_val = float(vals.ravel()[flat])
    return _result(axes, grids, best_idx, best_val, resolution, total)


def _result(axes, grids, idx, value, resolution, total) -> SweepResult:
    params = {ax.name: float(grids[i][j]) for i, (ax, j) in enumerate(zip(axes, idx))}
    return SweepResult(params, value, resolution, total)


def grid_values(objective, axes: Sequence[Axis], resolution: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Full grid of objective values (for small grids / CSV dumps)."""
    grids = [ax.points(resolution) for ax in axes]
    mesh = np.meshgrid(*grids, indexing="ij")
    return grids, np.broadcast_to(objective(*mesh), mesh[0].shape)


def grid_csv(objective, axes: Sequence[Axis], resolution: int) -> str:
    if resolution ** len(axes) > MAX_CSV_POINTS:
        raise ConfigurationError(
            f"grid has {resolution ** len(axes)} points; CSV dumps are limited to {MAX_CSV_POINTS}"
        )
    grids, vals = grid_values(objective, axes, resolution)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([ax.name for ax in axes] + ["value"])
    for idx in itertools.product(*(range(len(g)) for g in grids)):
        writer.writerow([repr(float(grids[i][j])) for i, j in enumerate(idx)] + [repr(float(vals[idx]))])
    return buf.getvalue()


# scheme-specific sweeps ---------------------------------------------------

ANGLE_AXES = (
    Axis("theta_a", 0.0, math.pi),
    Axis("phi_a", 0.0, 2 * math.pi),
    Axis("theta_b", 0.0, math.pi),
    Axis("phi_b", 0.0, 2 * math.pi),
)
SCHEME_TWO_AXES = (Axis("chi", 0.0, math.pi / 2), Axis("delta", 0.0, 2 * math.pi)) + ANGLE_AXES


def scheme_one_objective(stats: Statistics):
    stats = Statistics.parse(stats)

    def objective(theta_a, phi_a, theta_b, phi_b):
        return scheme_one.closed_form_grid(theta_a, phi_a, theta_b, phi_b, stats)

    return objective


def scheme_one_config(params: dict[str, float], stats: Statistics) -> scheme_one.SchemeOneConfig:
    return scheme_one.SchemeOneConfig(
        stats,
        BlochObservable.wrapped(params["theta_a"], params["phi_a"]),
        BlochObservable.wrapped(params["theta_b"], params["phi_b"]),
    )


def scheme_two_settings(params: dict[str, float]):
    s = scheme_two.SourceAmplitudes.from_angles(params["chi"], params["delta"])
    return (
        s,
        BlochObservable.wrapped(params["theta_a"], params["phi_a"]),
        BlochObservable.wrapped(params["theta_b"], params["phi_b"]),
    )


def sweep_scheme_one(stats: Statistics, resolution: int = 37) -> SweepResult:
    stats = Statistics.parse(stats)
    res = grid_search(scheme_one_objective(stats), ANGLE_AXES, resolution)
    dist = scheme_one.measurement_distribution(scheme_one_config(res.best_params, stats))
    res.extras.update(scheme="scheme1", stats=stats.value, p_win_table_at_best=dist.to_json_dict()["p"])
    return res


def sweep_scheme_two(resolution: int = 37) -> SweepResult:
    res = grid_search(scheme_two.closed_form_grid, SCHEME_TWO_AXES, resolution)
    dist = scheme_two.measurement_distribution(*scheme_two_settings(res.best_params))
    res.extras.update(scheme="scheme2", p_win_table_at_best=dist.to_json_dict()["p"])
    return res


def sweep_report(res: SweepResult) -> dict:
    out = {
        "scheme": res.extras.get("scheme"),
        "resolution": res.grid_resolution,
        "evaluations": res.evaluations,
        "best_params": res.best_params,
        "best_value": res.best_value,
        "p_win_table_at_best": res.extras.get("p_win_table_at_best"),
    }
    if "stats" in res.extras:
        out["stats"] = res.extras["stats"]
    return out
