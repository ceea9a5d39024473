"""Search over perpendicular states and theta sweeps of the spin-1 examples."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds import (
    FAMILIES,
    OPTIMIZABLE_FAMILIES,
    BoundReport,
    evaluate_many,
    moments,
    perp_context,
    sides_from_overlaps,
    family_report,
)
from .core import StateVector, complement_matrix, variance
from .operators import spin1_theta_state, spin_basis_state, spin_operator

__all__ = [
    "OptimizeConfig",
    "OptimizeResult",
    "optimize_perp",
    "SweepRow",
    "SweepTable",
    "sweep_theta",
    "PRESETS",
    "CSV_HEADER",
]


@dataclass(frozen=True)
class OptimizeConfig:
    objective: str = "gen-sum-hrs"
    restarts: int = 32
    initial_step: float = 0.3
    shrink_factor: float = 0.5
    step_floor: float = 1e-8
    seed: int = 0
    max_evaluations: int = 1_000_000

    def __post_init__(self):
        if self.objective not in OPTIMIZABLE_FAMILIES:
            raise ValueError(
                f"objective {self.objective!r} does not depend on the perpendicular state; "
                f"choose one of {', '.join(OPTIMIZABLE_FAMILIES)}"
            )
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if not 0.0 < self.shrink_factor < 1.0:
            raise ValueError("shrink_factor must lie in (0, 1)")
        if not 0.0 < self.step_floor < self.initial_step:
            raise ValueError("need 0 < step_floor < initial_step")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class OptimizeResult:
    best_perp: StateVector
    best_rhs: float
    report: BoundReport
    evaluations: int
    converged: bool


def _restart(objective, n, config, index):
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    best = objective(u)
    evals = 1
    step = config.initial_step
    while step >= config.step_floor:
        if evals >= config.max_evaluations:
            return u, best, evals, False
        improved = False
        for k in range(n):
            for direction in (1.0, -1.0):
                trial = u.copy()
                trial[k] += direction * step
                trial /= np.linalg.norm(trial)
                value = objective(trial)
                evals += 1
                if value > best:
                    u, best, improved = trial, value, True
                    break
        if not improved:
            step *= config.shrink_factor
    return u, best, evals, True


def optimize_perp(a, b, psi, config: OptimizeConfig | None = None) -> OptimizeResult:
    """Maximize a bound family's right-hand side over unit states orthogonal to ``psi``.

    The perpendicular state is ``Q c`` where the columns of ``Q`` span the
    complement of ``psi`` and ``c`` is a unit complex vector stored as
    ``2(d-1)`` interleaved real coordinates.  Each restart runs a
    coordinate pattern search on that sphere; the best restart wins, the
    lowest restart index breaking ties.
    """
    config = config or OptimizeConfig()
    if psi.dim < 2:
        raise ValueError("the orthogonal complement of a 1-dimensional space is empty")
    m = moments(a, b, psi)
    q = complement_matrix(psi)
    # <perp|psi_A> = c^dag (Q^dag psi_A)
    qa = q.conj().T @ m.psi_a.amplitudes
    qb = q.conj().T @ m.psi_b.amplitudes
    family = config.objective

    def objective(u):
        c = u[0::2] + 1j * u[1::2]
        return sides_from_overlaps(family, m, complex(np.vdot(c, qa)), complex(np.vdot(c, qb)))[1]

    n = 2 * q.shape[1]
    best = None
    total = 0
    converged = True
    for index in range(config.restarts):
        u, value, evals, ok = _restart(objective, n, config, index)
        total += evals
        converged = converged and ok
        if best is None or value > best[1]:
            best = (u, value)
    c = best[0][0::2] + 1j * best[0][1::2]
    perp = StateVector.normalized(q @ c)
    report = family_report(family, m, perp_context(a, b, psi, perp, m), a, b, psi)
    return OptimizeResult(perp, report.rhs, report, total, converged)


# -- theta sweeps -------------------------------------------------------------

PRESETS = ("example-1", "example-2")
CSV_HEADER = ("theta", "var_a", "var_b", "family", "lhs", "rhs", "slack", "satisfied")


class SweepRow(NamedTuple):
    theta: float
    var_a: float
    var_b: float
    family: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]

    def column(self, name: str, family: str | None = None) -> np.ndarray:
        rows = self.rows if family is None else [r for r in self.rows if r.family == family]
        return np.array([getattr(r, name) for r in rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow(
                [_fmt(r.theta), _fmt(r.var_a), _fmt(r.var_b), r.family,
                 _fmt(r.lhs), _fmt(r.rhs), _fmt(r.slack), "true" if r.satisfied else "false"]
            )
        return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def preset_pair(preset: str, theta: float):
    """``(psi, perp)`` of a spin-1 worked example at angle ``theta``."""
    if preset == "example-1":
        return spin1_theta_state(theta), spin_basis_state(1, 0)
    if preset == "example-2":
        return spin_basis_state(1, 0), spin1_theta_state(theta)
    raise ValueError(f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")


def sweep_theta(preset: str, families, grid, hbar: float = 1.0) -> SweepTable:
    """Evaluate bound families on a spin-1 example for each angle in ``grid``.

    ``example-1`` varies ``psi = cos t|+> + sin t|->`` with ``perp = |0>``;
    ``example-2`` fixes ``psi = |0>`` and varies ``perp`` instead.  In both,
    ``A = J_x`` and ``B = J_y``.
    """
    grid = [float(t) for t in grid]
    if not grid:
        raise ValueError("theta grid is empty")
    families = list(families)
    for f in families:
        if f not in FAMILIES:
            raise ValueError(f"unknown bound family {f!r}")
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
    a = spin_operator(1, "x", hbar)
    b = spin_operator(1, "y", hbar)
    ordered = sorted(set(families))
    rows = []
    for theta in sorted(grid):
        psi, perp = preset_pair(preset, theta)
        var_a, var_b = variance(a, psi), variance(b, psi)
        for rep in evaluate_many(ordered, a, b, psi, perp):
            rows.append(SweepRow(theta, var_a, var_b, rep.family, rep.lhs, rep.rhs, rep.slack, rep.satisfied))
    return SweepTable(tuple(rows))


def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:count`` with both endpoints included."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:count, got {spec!r}")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise ValueError(f"invalid grid {spec!r}")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)
