"""Random ensembles, independent oracles and the invariant suite."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .bounds import (
    FAMILIES,
    PRODUCT_FAMILIES,
    evaluate_many,
    moments,
    perp_context,
    family_report,
    _hrs,
    _optimal_alpha,
    _alpha_value,
    _one,
)
from .core import HermitianOperator, StateVector, complement_matrix, variance
from .operators import spin1_theta_state, spin_basis_state, spin_operator

__all__ = [
    "RandomInstance",
    "Claim",
    "Failure",
    "SuiteReport",
    "random_instance",
    "alpha_grid_oracle",
    "variance_claim_oracle",
    "worked_example_claims",
    "run_suite",
]

CONFIRMED = "confirmed"
REFUTED = "refuted"
DEGENERATE = "degenerate"

DEFAULT_DIMS = (2, 3, 4, 6, 8)


@dataclass(frozen=True)
class RandomInstance:
    a: HermitianOperator
    b: HermitianOperator
    psi: StateVector
    psi_perp: StateVector
    dim: int
    seed: int


def _gue(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((m + m.conj().T) / 2)


def random_instance(dim: int, seed: int) -> RandomInstance:
    """Haar-random state, GUE-like operator pair and a random perpendicular state."""
    if dim < 2:
        raise ValueError("random instances need dim >= 2")
    rng = np.random.default_rng(seed)
    psi = StateVector.normalized(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    a = _gue(rng, dim)
    b = _gue(rng, dim)
    c = rng.standard_normal(dim - 1) + 1j * rng.standard_normal(dim - 1)
    perp = StateVector.normalized(complement_matrix(psi) @ (c / np.linalg.norm(c)))
    return RandomInstance(a, b, psi, perp, dim, seed)


class GridMinimum(NamedTuple):
    alpha_min: float
    value_min: float
    interior: bool


def alpha_grid_oracle(a, b, psi, psi_perp, lo=-10.0, hi=10.0, points=2001) -> GridMinimum:
    """Brute-force minimum of the parametrized inequality over an ``alpha`` grid.

    Evaluates ``||phi||^2 - |<perp|phi>|^2`` with ``phi = psi_A + i alpha psi_B``
    directly from vectors, so it shares no closed form with
    :func:`~uncertainty_bounds.bounds.optimal_alpha`.  ``interior`` is
    False when the minimum sits on an endpoint or the profile is flat.
    """
    if points < 3 or not lo < hi:
        raise ValueError("need points >= 3 and lo < hi")
    m = moments(a, b, psi)
    perp_context(a, b, psi, psi_perp, m)  # orthogonality check
    alphas = np.linspace(lo, hi, points)
    phi = m.psi_a.amplitudes[None, :] + 1j * alphas[:, None] * m.psi_b.amplitudes[None, :]
    norms = np.sum(np.abs(phi) ** 2, axis=1)
    proj = np.abs(phi @ psi_perp.amplitudes.conj()) ** 2
    values = norms - proj
    k = int(np.argmin(values))
    # a flat profile (b_residual = 0) has no minimizer; round-off would pick one at random
    flat = values.max() - values.min() <= 1e-12 * max(1.0, float(np.abs(values).max()))
    return GridMinimum(float(alphas[k]), float(values[k]), not flat and 0 < k < points - 1)


# -- claims -------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    name: str
    verdict: str
    detail: str


def _theta_grid(n=17):
    return np.linspace(0.0, math.pi / 2, n)


def _spin1(hbar=1.0):
    return spin_operator(1, "x", hbar), spin_operator(1, "y", hbar), spin_operator(1, "z", hbar)


def variance_claim_oracle(hbar: float = 1.0) -> list[Claim]:
    """Adjudicate the stated variances of ``J_x, J_y`` on ``cos t|+> + sin t|->``.

    The candidates ``hbar^2 (1 +- sin 2t)`` and ``hbar^2/2 (1 +- sin 2t)``
    are compared with direct evaluation on a 17-point grid, and the equality
    ``var_x + var_y = hbar^2`` (the MP bound in this example) is checked.
    """
    jx, jy, _ = _spin1(hbar)
    h2 = hbar * hbar
    full_err = half_err = eq_err = 0.0
    for t in _theta_grid():
        psi = spin1_theta_state(t)
        vx, vy = variance(jx, psi), variance(jy, psi)
        s = math.sin(2 * t)
        full_err = max(full_err, abs(vx - h2 * (1 + s)), abs(vy - h2 * (1 - s)))
        half_err = max(half_err, abs(vx - h2 / 2 * (1 + s)), abs(vy - h2 / 2 * (1 - s)))
        eq_err = max(eq_err, abs(vx + vy - h2))
    tol = 1e-10 * max(1.0, h2)
    claims = [
        Claim(
            "example-1-variance-factor",
            CONFIRMED if full_err <= tol else REFUTED,
            (f"stated hbar^2(1+-sin2t) off by up to {full_err:.3g}; "
             f"corrected (hbar^2/2)(1+-sin2t) matches within {half_err:.2e}"
             if full_err > tol else f"matches within {full_err:.2e}"),
        ),
        Claim(
            "example-1-mp-equality",
            CONFIRMED if eq_err <= tol and half_err <= tol else REFUTED,
            f"var_x + var_y = hbar^2 within {eq_err:.2e} (holds under the corrected variances)",
        ),
    ]
    return claims


def _max_err(pairs):
    return max(abs(x - y) for x, y in pairs)


def _verdict(err, tol=1e-9):
    return CONFIRMED if err <= tol else REFUTED


def worked_example_claims(hbar: float = 1.0) -> list[Claim]:
    """Every desk-checkable statement of the spin-1 examples and the limit cases."""
    jx, jy, jz = _spin1(hbar)
    h2 = hbar * hbar
    claims = []
    grid = _theta_grid()
    zero = spin_basis_state(1, 0)

    # example 1: psi varies, perp = |0>
    mp, gsum, elem, hr = [], [], [], []
    for t in grid:
        psi = spin1_theta_state(t)
        reps = {r.family: r for r in evaluate_many(["mp-plus", "mp-minus", "gen-sum-hrs", "hr"], jx, jy, psi, zero)}
        mp += [(reps["mp-plus"].rhs, h2), (reps["mp-minus"].rhs, h2)]
        gsum.append((reps["gen-sum-hrs"].rhs, h2))
        elem += [(abs(reps["mp-plus"].matrix_element), math.sqrt(2) * hbar * abs(math.cos(t))),
                 (abs(reps["mp-minus"].matrix_element), math.sqrt(2) * hbar * abs(math.sin(t)))]
        hr.append((reps["hr"].rhs, 0.25 * h2 * h2 * math.cos(2 * t) ** 2))
    claims.append(Claim("example-1-mp-both-signs", _verdict(_max_err(mp)), f"rhs = hbar^2 within {_max_err(mp):.2e}"))
    claims.append(Claim("example-1-gen-sum-hrs", _verdict(_max_err(gsum)), f"rhs = hbar^2 within {_max_err(gsum):.2e}"))
    claims.append(Claim("example-1-matrix-elements", _verdict(_max_err(elem)),
                        f"|<psi|Jx +- iJy|0>| = sqrt2 hbar (cos, sin) within {_max_err(elem):.2e}"))
    claims.append(Claim("example-1-hr", _verdict(_max_err(hr)),
                        "rhs = (hbar^4/4) cos^2 2t, using |<[A,B]>| since cos 2t < 0 past pi/4"))
    claims.extend(variance_claim_oracle(hbar))

    # example 2: psi = |0>, perp varies
    gsum2, mp2, eq13, var2, corrected = [], [], [], [], []
    for t in grid:
        perp = spin1_theta_state(t)
        reps = {r.family: r for r in evaluate_many(
            ["gen-sum-hrs", "mp-plus", "mp-minus", "gen-product-hr"], jx, jy, zero, perp)}
        c2, s2 = math.cos(t) ** 2, math.sin(t) ** 2
        gsum2.append((reps["gen-sum-hrs"].rhs, 2 * h2 * c2))
        corrected.append((reps["gen-sum-hrs"].rhs, h2 * (1 + abs(math.cos(2 * t)))))
        mp2 += [(reps["mp-minus"].rhs, 2 * h2 * c2), (reps["mp-plus"].rhs, 2 * h2 * s2)]
        s = math.sin(2 * t)
        g = reps["gen-product-hr"]
        eq13 += [(g.lhs, (h2 - h2 / 2 * (1 + s)) * (h2 - h2 / 2 * (1 - s))),
                 (g.rhs, 0.25 * h2 * h2 * math.cos(2 * t) ** 2), (g.slack, 0.0)]
        var2 += [(variance(jx, zero), h2), (variance(jy, zero), h2)]
    err = _max_err(gsum2)
    claims.append(Claim(
        "example-2-gen-sum-hrs",
        _verdict(err),
        f"stated 2hbar^2 cos^2 t off by up to {err:.3g}; direct value hbar^2(1+|cos 2t|) "
        f"matches within {_max_err(corrected):.2e}" if err > 1e-9 else f"within {err:.2e}",
    ))
    claims.append(Claim("example-2-mp-values", _verdict(_max_err(mp2)),
                        "{2hbar^2 cos^2 t, 2hbar^2 sin^2 t} for signs (-, +); alpha = +1 is mp-minus"))
    claims.append(Claim("example-2-product-bound", _verdict(_max_err(eq13)),
                        f"bracket product = (hbar^4/4) cos^2 2t, equality, within {_max_err(eq13):.2e}"))
    claims.append(Claim("example-2-variances", _verdict(_max_err(var2), 1e-10), "var_x = var_y = hbar^2"))
    hrs0 = _hrs(moments(jx, jy, zero))
    claims.append(Claim("example-2-hrs-trivial", _verdict(abs(hrs0.rhs)), f"hrs rhs = {hrs0.rhs:.3g}"))

    # eigenstate triviality
    worst, nontrivial = 0.0, True
    for j in (0.5, 1, 1.5):
        top = spin_basis_state(j, j)
        sx, sy, sz = (spin_operator(j, c, hbar) for c in "xyz")
        r = _one("hr", moments(sz, sx, top), None, None, None, None, None, 0.0)
        worst = max(worst, abs(r.lhs), abs(r.rhs))
        r2 = _one("hr", moments(sx, sy, top), None, None, None, None, None, 0.0)
        nontrivial &= abs(r2.rhs - 0.25 * h2 * h2 * j * j) <= 1e-12 and r2.rhs > 0
    claims.append(Claim("eigenstate-hr-trivial", CONFIRMED if worst <= 1e-12 else REFUTED,
                        f"|j,j>, (Jz, Jx): both sides <= {worst:.1e}"))
    claims.append(Claim("eigenstate-jx-jy-nontrivial", CONFIRMED if nontrivial else REFUTED,
                        "|j,j>, (Jx, Jy): rhs = hbar^4 j^2 / 4 > 0"))

    # limits on a fixed random instance
    inst = random_instance(4, 20240)
    claims.extend(_limit_claims(inst))
    return claims


def _limit_claims(inst: RandomInstance) -> list[Claim]:
    a, b, psi = inst.a, inst.b, inst.psi
    m = moments(a, b, psi)
    out = []
    hrs = _hrs(m)
    for fam in ("gen-sum-hrs", "gen-product-hrs"):
        r = _one(fam, m, None, a, b, psi, None, 0.0)
        same = (r.lhs, r.rhs, r.slack, r.satisfied) == (hrs.lhs, hrs.rhs, hrs.slack, hrs.satisfied)
        out.append(Claim(f"null-perp-{fam}-is-hrs", CONFIRMED if same else REFUTED, "exact equality of both sides"))

    perp_b = StateVector.normalized(m.psi_b.amplitudes)
    ctx = perp_context(a, b, psi, perp_b, m)
    r = family_report("gen-sum-hr", m, ctx)
    expected = m.var_b + abs(m.cross) ** 2 / m.var_b
    ok = abs(r.rhs - expected) <= 1e-9 * max(1.0, expected) and _optimal_alpha(m, ctx) is None
    out.append(Claim("gen-sum-hr-is-schwarz-at-perp=psiB", CONFIRMED if ok else REFUTED,
                     "rhs = var_B + |<psi_A|psi_B>|^2 / var_B, optimal alpha degenerate"))
    # var_B * mp slack = hrs slack makes the MP bound equivalent to HRS here
    mp_ok = True
    for fam in ("mp-plus", "mp-minus"):
        rep = family_report(fam, m, ctx)
        mp_ok &= abs(rep.slack * m.var_b - hrs.slack) <= 1e-9 * max(1.0, hrs.lhs)
    out.append(Claim("mp-reduces-to-hrs-at-perp=psiB", CONFIRMED if mp_ok else REFUTED,
                     "var_B * (mp slack) = hrs slack for both signs"))

    perp_a = StateVector.normalized(m.psi_a.amplitudes)
    ctx_a = perp_context(a, b, psi, perp_a, m)
    r = family_report("gen-sum-hr", m, ctx_a)
    expected = m.var_a + abs(m.cross) ** 2 / m.var_a
    ok = abs(r.rhs - expected) <= 1e-9 * max(1.0, expected) and abs(ctx_a.a_residual) <= 1e-10 * m.scale
    out.append(Claim("gen-sum-hr-is-schwarz-at-perp=psiA", CONFIRMED if ok else REFUTED,
                     "rhs = var_A + |<psi_A|psi_B>|^2 / var_A, a_residual = 0"))
    return out


# -- suite --------------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    invariant: str
    seed: int
    dim: int
    slack: float


@dataclass
class SuiteReport:
    instances_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    worst_slack: float = math.inf
    claims: list[Claim] = field(default_factory=list)
    checks: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "instances_run": self.instances_run,
            "passed": self.passed,
            "worst_slack": self.worst_slack,
            "checks": dict(self.checks),
            "failures": [asdict(f) for f in self.failures],
            "claims": [asdict(c) for c in self.claims],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"instances run: {self.instances_run}", f"worst relative slack: {self.worst_slack:.3e}", ""]
        lines.append(f"{'invariant':<34} {'checks':>8}")
        for name, n in self.checks.items():
            lines.append(f"{name:<34} {n:>8}")
        lines.append("")
        width = max([len(c.name) for c in self.claims] + [5])
        lines.append(f"{'claim':<{width}}  verdict     detail")
        for c in self.claims:
            lines.append(f"{c.name:<{width}}  {c.verdict:<10}  {c.detail}")
        lines.append("")
        if self.failures:
            lines.append(f"{len(self.failures)} failure(s):")
            for f in self.failures[:50]:
                lines.append(f"  {f.invariant}: dim={f.dim} seed={f.seed} slack={f.slack:.3e}")
        else:
            lines.append("all invariants hold")
        return "\n".join(lines)


def _rel(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


class _Checker:
    def __init__(self, report, families):
        self.report = report
        self.families = list(families)
        self._members = set(families)

    def wants(self, *families):
        return all(f in self._members for f in families)

    def check(self, name, ok, seed, dim, slack=0.0):
        self.report.checks[name] = self.report.checks.get(name, 0) + 1
        if not ok:
            self.report.failures.append(Failure(name, seed, dim, float(slack)))


ALPHA_GRID = np.linspace(-10.0, 10.0, 101)


def instance_seed(base_seed: int, index: int) -> int:
    return base_seed * 1_000_000 + index


def run_suite(dims=DEFAULT_DIMS, count=1000, seed=0, families=None, oracle_instances=200) -> SuiteReport:
    """Run every invariant over a random ensemble plus the named claims.

    Failures carry ``(dim, seed)`` so ``random_instance(dim, seed)``
    reproduces them.  ``families`` restricts the family-specific checks.
    """
    families = list(FAMILIES if families is None else families)
    for f in families:
        if f not in FAMILIES:
            raise ValueError(f"unknown bound family {f!r}")
    report = SuiteReport()
    chk = _Checker(report, families)
    worst = math.inf
    for dim in dims:
        oracle_left = oracle_instances
        for i in range(count):
            s = instance_seed(seed, i)
            inst = random_instance(dim, s)
            worst = min(worst, _check_instance(chk, inst, oracle_left > 0))
            if chk.wants("general-alpha") and oracle_left > 0:
                oracle_left -= 1
            report.instances_run += 1
    report.worst_slack = worst
    report.claims = worked_example_claims()
    return report


def _check_instance(chk: _Checker, inst: RandomInstance, run_oracle: bool) -> float:
    a, b, psi, perp, dim, s = inst.a, inst.b, inst.psi, inst.psi_perp, inst.dim, inst.seed
    m = moments(a, b, psi)
    ctx = perp_context(a, b, psi, perp, m)
    scale = m.scale
    worst = math.inf

    # core
    chk.check("core-deviation-norm", _rel(m.psi_a.norm() ** 2, m.var_a) <= 1e-10, s, dim)
    chk.check("core-commutator-identity",
              abs(m.commutator - (m.cross - m.cross.conjugate())) <= 1e-10 * scale, s, dim)
    q = np.column_stack([psi.amplitudes, complement_matrix(psi)])
    gram_err = float(np.max(np.abs(q.conj().T @ q - np.eye(dim))))
    chk.check("core-complement-gram", gram_err <= 1e-10, s, dim, gram_err)
    chk.check("residual-nonnegativity", min(ctx.a_residual, ctx.b_residual) >= -1e-10, s, dim,
              min(ctx.a_residual, ctx.b_residual))

    reports = {f: _one(f, m, ctx, a, b, psi, None, 0.0) for f in chk.families}
    for f, r in reports.items():
        rel = r.slack / r.scale
        worst = min(worst, rel)
        chk.check(f"{f}-validity", r.satisfied, s, dim, r.slack)

    if chk.wants("schwarz", "hrs"):
        chk.check("identity-hrs-schwarz", _rel(reports["hrs"].rhs, reports["schwarz"].rhs) <= 1e-10, s, dim)
    if chk.wants("gen-product-hr"):
        chk.check("identity-gen-product-hr", _rel(reports["gen-product-hr"].rhs, ctx.w.imag ** 2) <= 1e-10, s, dim)
    if chk.wants("gen-product-hrs"):
        chk.check("identity-gen-product-hrs", _rel(reports["gen-product-hrs"].rhs, abs(ctx.w) ** 2) <= 1e-10, s, dim)
    if chk.wants("hr", "hrs"):
        chk.check("dominance-hrs-hr", reports["hrs"].rhs >= reports["hr"].rhs, s, dim)
    if chk.wants("gen-product-hr", "gen-product-hrs"):
        chk.check("dominance-gen-product", reports["gen-product-hrs"].rhs >= reports["gen-product-hr"].rhs, s, dim)
    if chk.wants("gen-sum-hrs", "gen-product-hrs"):
        hrs = _hrs(m)
        for f in ("gen-sum-hrs", "gen-product-hrs"):
            r = _one(f, m, None, a, b, psi, None, 0.0)
            same = (r.lhs, r.rhs, r.slack) == (hrs.lhs, hrs.rhs, hrs.slack)
            chk.check("null-vector-limit", same, s, dim)

    if chk.wants("general-alpha"):
        values = np.array([_alpha_value(ctx, al) for al in ALPHA_GRID])
        low = float(values.min())
        chk.check("alpha-nonnegativity", low >= -1e-9 * scale, s, dim, low)
        star = _optimal_alpha(m, ctx)
        if star is not None:
            vstar = _alpha_value(ctx, star)
            chk.check("alpha-analytic-minimum", vstar <= low + 1e-12 * scale, s, dim, low - vstar)
            if run_oracle:
                grid = alpha_grid_oracle(a, b, psi, perp)
                step = 20.0 / 2000
                target = min(max(star, -10.0), 10.0)
                chk.check("alpha-oracle-agreement", abs(grid.alpha_min - target) <= step, s, dim,
                          abs(grid.alpha_min - target))

    # phase invariance of every perp-dependent quantity
    phase = np.exp(1j * (0.7 + s % 5))
    ctx2 = perp_context(a, b, psi, StateVector(phase * perp.amplitudes), m)
    same = all(
        _rel(x, y) <= 1e-10
        for x, y in [(ctx.a_residual, ctx2.a_residual), (ctx.b_residual, ctx2.b_residual),
                     (ctx.z.real, ctx2.z.real), (ctx.z.imag, ctx2.z.imag)]
    )
    chk.check("phase-invariance", same, s, dim)

    # scaling covariance (A, B) -> (cA, cB)
    c = 2.5
    ac, bc = a.scaled(c), b.scaled(c)
    mc = moments(ac, bc, psi)
    ctxc = perp_context(ac, bc, psi, perp, mc)
    ok = True
    for f in chk.families:
        if f == "general-alpha":
            continue
        r0, r1 = reports[f], _one(f, mc, ctxc, ac, bc, psi, None, 0.0)
        k = c**4 if f in PRODUCT_FAMILIES else c**2
        ok &= _rel(r1.lhs, k * r0.lhs) <= 1e-9 and _rel(r1.rhs, k * r0.rhs) <= 1e-9
    chk.check("scaling-covariance", ok, s, dim)
    return worst
