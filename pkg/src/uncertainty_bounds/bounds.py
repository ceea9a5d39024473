"""Variance lower bounds for a pair of observables in a pure state.

Every bound is built from the deviation vectors ``|psi_A> = (A - <A>)|psi>``
and ``|psi_B>``, and for the generalized families from their overlaps
with a unit state ``|perp>`` orthogonal to ``|psi>``:

    overlap_a = <perp|psi_A>          a_residual = var_A - |overlap_a|^2
    overlap_b = <perp|psi_B>          b_residual = var_B - |overlap_b|^2
    z = overlap_b * conj(overlap_a)   w = <psi_A|psi_B> - z

The right-hand sides are written in terms of commutator and covariance
expectations; the identities ``rhs = (Im w)^2`` and ``rhs = |w|^2`` for the
product forms are kept as cross-checks (see :mod:`uncertainty_bounds.verify`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    HermitianOperator,
    Ket,
    NotOrthogonalError,
    StateVector,
    anticommutator_expectation,
    commutator_expectation,
    deviation_vector,
    expectation,
    inner,
    variance,
)

__all__ = [
    "FAMILIES",
    "PERP_FAMILIES",
    "NULL_FALLBACK_FAMILIES",
    "OPTIMIZABLE_FAMILIES",
    "Moments",
    "PerpContext",
    "BoundReport",
    "moments",
    "perp_context",
    "sides_from_overlaps",
    "family_report",
    "schwarz_report",
    "hr_report",
    "hrs_report",
    "general_alpha_value",
    "optimal_alpha",
    "general_alpha_report",
    "gen_product_hr_report",
    "gen_sum_hr_report",
    "gen_product_hrs_report",
    "gen_sum_hrs_report",
    "mp_report",
    "evaluate",
    "evaluate_many",
]

FAMILIES = (
    "schwarz",
    "hr",
    "hrs",
    "general-alpha",
    "gen-product-hr",
    "gen-sum-hr",
    "gen-product-hrs",
    "gen-sum-hrs",
    "mp-plus",
    "mp-minus",
)
PERP_FREE_FAMILIES = ("schwarz", "hr", "hrs")
PERP_FAMILIES = tuple(f for f in FAMILIES if f not in PERP_FREE_FAMILIES)
# families whose perp-free limit is the HRS relation
NULL_FALLBACK_FAMILIES = ("gen-sum-hrs", "gen-product-hrs")
OPTIMIZABLE_FAMILIES = tuple(f for f in PERP_FAMILIES if f != "general-alpha")
PRODUCT_FAMILIES = ("schwarz", "hr", "hrs", "gen-product-hr", "gen-product-hrs")

SLACK_TOL = 1e-9
ORTHO_TOL = 1e-9
RESIDUAL_TOL = 1e-10
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class Moments:
    """First and second moments of ``A`` and ``B`` in ``psi``."""

    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    psi_a: Ket
    psi_b: Ket
    cross: complex  # <psi_A|psi_B>
    commutator: complex
    anticommutator: float

    @property
    def covariance(self) -> float:
        """``<{A,B}> - 2<A><B>``, twice the symmetrized covariance."""
        return self.anticommutator - 2.0 * self.mean_a * self.mean_b

    @property
    def scale(self) -> float:
        return max(1.0, self.var_a, self.var_b)


def moments(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> Moments:
    psi_a = deviation_vector(a, psi)
    psi_b = deviation_vector(b, psi)
    return Moments(
        mean_a=expectation(a, psi),
        mean_b=expectation(b, psi),
        var_a=variance(a, psi),
        var_b=variance(b, psi),
        psi_a=psi_a,
        psi_b=psi_b,
        cross=inner(psi_a, psi_b),
        commutator=commutator_expectation(a, b, psi),
        anticommutator=anticommutator_expectation(a, b, psi),
    )


@dataclass(frozen=True)
class PerpContext:
    psi_perp: StateVector
    overlap_a: complex
    overlap_b: complex
    z: complex
    w: complex
    a_residual: float
    b_residual: float


def perp_context(
    a: HermitianOperator,
    b: HermitianOperator,
    psi: StateVector,
    psi_perp: StateVector,
    m: Moments | None = None,
) -> PerpContext:
    """Overlaps of ``psi_perp`` with the deviation vectors and derived cross terms.

    Raises
    ------
    NotOrthogonalError
        If ``|<perp|psi>| > 1e-9``.
    """
    if m is None:
        m = moments(a, b, psi)
    leak = abs(inner(psi_perp, psi))
    if leak > ORTHO_TOL:
        raise NotOrthogonalError(leak)
    oa = inner(psi_perp, m.psi_a)
    ob = inner(psi_perp, m.psi_b)
    # <perp|psi_A> collapses to <perp|A|psi> because perp is orthogonal to psi
    direct_a = complex(np.vdot(psi_perp.amplitudes, a.matrix @ psi.amplitudes))
    direct_b = complex(np.vdot(psi_perp.amplitudes, b.matrix @ psi.amplitudes))
    tol = 1e-10 * max(1.0, a.scale, b.scale)
    if abs(direct_a - oa) > tol or abs(direct_b - ob) > tol:
        raise ArithmeticError("overlap with deviation vector disagrees with matrix element")
    z = ob * oa.conjugate()
    a_res = m.var_a - abs(oa) ** 2
    b_res = m.var_b - abs(ob) ** 2
    if min(a_res, b_res) < -RESIDUAL_TOL * m.scale:
        raise ArithmeticError(f"negative residual ({a_res:.3e}, {b_res:.3e})")
    return PerpContext(
        psi_perp=psi_perp,
        overlap_a=oa,
        overlap_b=ob,
        z=z,
        w=m.cross - z,
        a_residual=a_res,
        b_residual=b_res,
    )


@dataclass(frozen=True)
class BoundReport:
    """Both sides of one inequality ``lhs >= rhs``."""

    family: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    context: PerpContext | None = None
    alpha: float | None = None
    beta: float | None = None
    alpha_star: float | None = None
    degenerate: bool = False
    matrix_element: complex | None = None
    note: str | None = None

    @classmethod
    def build(cls, family: str, lhs: float, rhs: float, **kwargs) -> "BoundReport":
        lhs = float(lhs)
        rhs = float(rhs)
        slack = lhs - rhs
        scale = max(1.0, abs(lhs), abs(rhs))
        return cls(family, lhs, rhs, slack, bool(slack >= -SLACK_TOL * scale), **kwargs)

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.lhs), abs(self.rhs))


def sides_from_overlaps(family: str, m: Moments, oa: complex, ob: complex) -> tuple[float, float]:
    """``(lhs, rhs)`` of a perp-dependent family from the two overlaps alone.

    Cheap scalar arithmetic; the optimizer calls this in its inner loop.
    ``general-alpha`` is excluded since it needs the free parameters.
    """
    z = ob * oa.conjugate()
    comm = m.commutator - (z - z.conjugate())
    cov = m.covariance - (z + z.conjugate()).real
    na = oa.real * oa.real + oa.imag * oa.imag
    nb = ob.real * ob.real + ob.imag * ob.imag
    if family == "gen-product-hr":
        return (m.var_a - na) * (m.var_b - nb), 0.25 * abs(comm) ** 2
    if family == "gen-product-hrs":
        return (m.var_a - na) * (m.var_b - nb), 0.25 * abs(comm) ** 2 + 0.25 * abs(cov) ** 2
    total = m.var_a + m.var_b
    if family == "gen-sum-hr":
        return total, abs(comm) + na + nb
    if family == "gen-sum-hrs":
        return total, na + nb + math.sqrt(abs(comm) ** 2 + abs(cov) ** 2)
    if family in ("mp-plus", "mp-minus"):
        s = 1.0 if family == "mp-plus" else -1.0
        # <psi|A + s i B|perp> = conj(oa) + s i conj(ob)
        element = oa.conjugate() + s * 1j * ob.conjugate()
        return total, (s * 1j * m.commutator).real + abs(element) ** 2
    raise ValueError(f"family {family!r} has no overlap-only form")


def _degenerate(m: Moments, ctx: PerpContext) -> bool:
    return ctx.b_residual <= DEGENERATE_TOL * m.scale


# -- perp-free bounds ---------------------------------------------------------


def _schwarz(m: Moments) -> BoundReport:
    return BoundReport.build("schwarz", m.var_a * m.var_b, abs(m.cross) ** 2)


def _hr(m: Moments) -> BoundReport:
    return BoundReport.build("hr", m.var_a * m.var_b, 0.25 * abs(m.commutator) ** 2)


def _hrs(m: Moments, family: str = "hrs", note: str | None = None) -> BoundReport:
    rhs = 0.25 * abs(m.commutator) ** 2 + 0.25 * m.covariance**2
    return BoundReport.build(family, m.var_a * m.var_b, rhs, note=note)


def schwarz_report(a, b, psi) -> BoundReport:
    """``var_A var_B >= |<psi_A|psi_B>|^2``."""
    return _schwarz(moments(a, b, psi))


def hr_report(a, b, psi) -> BoundReport:
    """Robertson: ``var_A var_B >= |<[A,B]>|^2 / 4``."""
    return _hr(moments(a, b, psi))


def hrs_report(a, b, psi) -> BoundReport:
    """Robertson-Schroedinger: commutator plus covariance term."""
    return _hrs(moments(a, b, psi))


# -- one- and two-parameter family -------------------------------------------


def _alpha_value(ctx: PerpContext, alpha: float, beta: float = 0.0) -> float:
    c = complex(beta, alpha)
    return ctx.a_residual + abs(c) ** 2 * ctx.b_residual + 2.0 * (c * ctx.w).real


def general_alpha_value(a, b, psi, psi_perp, alpha: float, beta: float = 0.0) -> float:
    """Left side of the parametrized inequality, nonnegative for every real ``alpha``.

    With ``|phi> = |psi_A> + (beta + i alpha)|psi_B>`` this is
    ``||phi||^2 - |<perp|phi>|^2``; for ``beta = 0`` it reduces to
    ``a_residual + alpha^2 b_residual - 2 alpha Im(w)``.
    """
    return _alpha_value(perp_context(a, b, psi, psi_perp), alpha, beta)


def _optimal_alpha(m: Moments, ctx: PerpContext) -> float | None:
    if _degenerate(m, ctx):
        return None
    return ctx.w.imag / ctx.b_residual


def optimal_alpha(a, b, psi, psi_perp) -> float | None:
    """Minimizer ``Im(w) / b_residual`` of :func:`general_alpha_value`.

    Returns ``None`` when ``b_residual`` vanishes (``perp`` parallel to
    ``psi_B``); the value is then independent of ``alpha``.
    """
    m = moments(a, b, psi)
    return _optimal_alpha(m, perp_context(a, b, psi, psi_perp, m))


def _general_alpha(m, ctx, alpha=None, beta=0.0) -> BoundReport:
    star = _optimal_alpha(m, ctx)
    note = None
    if alpha is None:
        alpha = 0.0 if star is None else star
        note = "alpha = 0 (degenerate)" if star is None else "alpha = alpha*"
    c2 = alpha * alpha + beta * beta
    lhs = m.var_a + c2 * m.var_b
    rhs = abs(ctx.overlap_a) ** 2 + c2 * abs(ctx.overlap_b) ** 2 - 2.0 * (complex(beta, alpha) * ctx.w).real
    return BoundReport.build(
        "general-alpha", lhs, rhs, context=ctx, alpha=alpha, beta=beta,
        alpha_star=star, degenerate=star is None, note=note,
    )


def general_alpha_report(a, b, psi, psi_perp, alpha=None, beta=0.0) -> BoundReport:
    """Parametrized inequality as ``var_A + |c|^2 var_B >= ...``; ``alpha`` defaults to the optimum."""
    m = moments(a, b, psi)
    return _general_alpha(m, perp_context(a, b, psi, psi_perp, m), alpha, beta)


# -- generalized HR / HRS -----------------------------------------------------


def family_report(family, m, ctx, a=None, b=None, psi=None) -> BoundReport:
    lhs, rhs = sides_from_overlaps(family, m, ctx.overlap_a, ctx.overlap_b)
    kwargs = dict(context=ctx, degenerate=_degenerate(m, ctx))
    if family.startswith("gen-product") or family.startswith("gen-sum"):
        kwargs["alpha_star"] = _optimal_alpha(m, ctx)
    if family in ("mp-plus", "mp-minus") and a is not None:
        s = 1.0 if family == "mp-plus" else -1.0
        op = a.matrix + s * 1j * b.matrix
        kwargs["matrix_element"] = complex(np.vdot(psi.amplitudes, op @ ctx.psi_perp.amplitudes))
    return BoundReport.build(family, lhs, rhs, **kwargs)


def _with_perp(family, a, b, psi, psi_perp):
    m = moments(a, b, psi)
    if psi_perp is None:
        if family in NULL_FALLBACK_FAMILIES:
            return _hrs(m, family, note="null perp: hrs fallback")
        raise ValueError(f"family {family!r} requires a perpendicular state")
    return family_report(family, m, perp_context(a, b, psi, psi_perp, m), a, b, psi)


def gen_product_hr_report(a, b, psi, psi_perp) -> BoundReport:
    """``a_residual * b_residual >= |<[A,B]> - (z - z*)|^2 / 4``."""
    return _with_perp("gen-product-hr", a, b, psi, psi_perp)


def gen_sum_hr_report(a, b, psi, psi_perp) -> BoundReport:
    return _with_perp("gen-sum-hr", a, b, psi, psi_perp)


def gen_product_hrs_report(a, b, psi, psi_perp=None) -> BoundReport:
    """Two-parameter product bound; ``psi_perp=None`` gives the HRS report."""
    return _with_perp("gen-product-hrs", a, b, psi, psi_perp)


def gen_sum_hrs_report(a, b, psi, psi_perp=None) -> BoundReport:
    """``var_A + var_B >= |oa|^2 + |ob|^2 + 2|w|``; ``psi_perp=None`` gives the HRS report."""
    return _with_perp("gen-sum-hrs", a, b, psi, psi_perp)


def mp_report(a, b, psi, psi_perp, sign: int) -> BoundReport:
    """Sum bound ``var_A + var_B >= s i<[A,B]> + |<psi|A + s i B|perp>|^2``.

    ``sign = +1`` is ``mp-plus``.  It coincides with the parametrized
    inequality at ``alpha = -sign``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return _with_perp("mp-plus" if sign == 1 else "mp-minus", a, b, psi, psi_perp)


# -- dispatch -----------------------------------------------------------------


def _one(family, m, ctx, a, b, psi, alpha, beta) -> BoundReport:
    if family == "schwarz":
        return _schwarz(m)
    if family == "hr":
        return _hr(m)
    if family == "hrs":
        return _hrs(m)
    if family not in FAMILIES:
        raise ValueError(f"unknown bound family {family!r}")
    if ctx is None:
        if family in NULL_FALLBACK_FAMILIES:
            return _hrs(m, family, note="null perp: hrs fallback")
        raise ValueError(f"family {family!r} requires a perpendicular state")
    if family == "general-alpha":
        return _general_alpha(m, ctx, alpha, beta)
    return family_report(family, m, ctx, a, b, psi)


def evaluate_many(families, a, b, psi, psi_perp=None, alpha=None, beta=0.0) -> list[BoundReport]:
    """Reports for several families sharing one set of moments and one context."""
    m = moments(a, b, psi)
    ctx = None if psi_perp is None else perp_context(a, b, psi, psi_perp, m)
    return [_one(f, m, ctx, a, b, psi, alpha, beta) for f in families]


def evaluate(family, a, b, psi, psi_perp=None, alpha=None, beta=0.0) -> BoundReport:
    return evaluate_many([family], a, b, psi, psi_perp, alpha, beta)[0]
