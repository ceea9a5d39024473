"""Preset operators and states: spin-j angular momentum and a truncated oscillator.

Spin matrices use the ``|j, m>`` basis ordered ``m = +j, j-1, ..., -j``, so
the spin-1 basis reads ``(|+>, |0>, |->)``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import HermitianOperator, StateVector

__all__ = [
    "spin_operator",
    "spin_basis_state",
    "spin1_theta_state",
    "oscillator_operator",
    "SPIN_COMPONENTS",
    "OSCILLATOR_COMPONENTS",
]

SPIN_COMPONENTS = ("x", "y", "z")
OSCILLATOR_COMPONENTS = ("x", "p")


def _half_integer(value, name="j") -> Fraction:
    frac = Fraction(value).limit_denominator(2)
    if abs(float(frac) - float(value)) > 1e-12 or frac.denominator not in (1, 2):
        raise ValueError(f"{name} must be an integer or half-integer, got {value!r}")
    return frac


def _spin_j(j) -> Fraction:
    j = _half_integer(j)
    if j <= 0:
        raise ValueError(f"spin j must be positive, got {j}")
    return j


def _ladder_up(j: Fraction, hbar: float) -> np.ndarray:
    dim = int(2 * j) + 1
    jf = float(j)
    m = jf - np.arange(dim)
    # J+ |m> = hbar sqrt(j(j+1) - m(m+1)) |m+1>, and m+1 sits one index up
    elems = hbar * np.sqrt(jf * (jf + 1) - m[1:] * (m[1:] + 1))
    return np.diag(elems, k=1).astype(np.complex128)


def spin_operator(j, component: str, hbar: float = 1.0) -> HermitianOperator:
    """Angular momentum component ``J_x``, ``J_y`` or ``J_z`` for spin ``j``.

    Examples
    --------
    >>> spin_operator(1, "z").matrix.real.diagonal()
    array([ 1.,  0., -1.])
    """
    j = _spin_j(j)
    if component not in SPIN_COMPONENTS:
        raise ValueError(f"spin component must be one of {SPIN_COMPONENTS}, got {component!r}")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    if component == "z":
        dim = int(2 * j) + 1
        return HermitianOperator(np.diag(hbar * (float(j) - np.arange(dim))).astype(np.complex128))
    up = _ladder_up(j, hbar)
    down = up.conj().T
    if component == "x":
        return HermitianOperator((up + down) / 2)
    return HermitianOperator((up - down) / 2j)


def spin_basis_state(j, m) -> StateVector:
    """The ``|j, m>`` eigenvector of ``J_z``."""
    j = _spin_j(j)
    m = _half_integer(m, "m")
    if abs(m) > j or (j - m).denominator != 1:
        raise ValueError(f"invalid m = {m} for j = {j}")
    dim = int(2 * j) + 1
    amps = np.zeros(dim, dtype=np.complex128)
    amps[int(j - m)] = 1.0
    return StateVector(amps)


def spin1_theta_state(theta: float) -> StateVector:
    """``cos(theta)|+> + sin(theta)|->`` for spin 1."""
    return StateVector([np.cos(theta), 0.0, np.sin(theta)])


def oscillator_operator(dim: int, component: str, hbar: float = 1.0) -> HermitianOperator:
    """Position or momentum of a harmonic oscillator truncated to ``dim`` levels.

    ``x = sqrt(hbar/2) (a^dag + a)`` and ``p = i sqrt(hbar/2) (a^dag - a)``.
    The truncation breaks ``[x, p] = i hbar`` in the top-right corner of
    the commutator, so only low-lying states see the canonical value.
    """
    if int(dim) != dim or dim < 2:
        raise ValueError(f"oscillator dimension must be an integer >= 2, got {dim!r}")
    if component not in OSCILLATOR_COMPONENTS:
        raise ValueError(f"oscillator component must be one of {OSCILLATOR_COMPONENTS}")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    lower = np.diag(np.sqrt(np.arange(1, int(dim))), k=1).astype(np.complex128)
    raise_ = lower.conj().T
    c = np.sqrt(hbar / 2)
    if component == "x":
        return HermitianOperator(c * (raise_ + lower))
    return HermitianOperator(1j * c * (raise_ - lower))
