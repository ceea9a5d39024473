"""Dense complex linear algebra and pure-state statistics.

All inner products follow the bra-ket convention: ``inner(x, y)`` is
``<x|y>``, conjugate-linear in the FIRST argument.  Every bound in
:mod:`uncertainty_bounds.bounds` assumes this.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "NotHermitianError",
    "NotNormalizedError",
    "NotOrthogonalError",
    "Ket",
    "StateVector",
    "HermitianOperator",
    "inner",
    "apply",
    "expectation",
    "variance",
    "deviation_vector",
    "commutator_expectation",
    "anticommutator_expectation",
    "orthonormal_complement_basis",
]

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-9
RESIDUE_TOL = 1e-12
VARIANCE_CLAMP = 1e-12


class DimensionMismatchError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotNormalizedError(ValueError):
    def __init__(self, norm):
        self.norm = norm
        super().__init__(f"state is not normalized: norm = {norm:.12g}")


class NotOrthogonalError(ValueError):
    def __init__(self, overlap):
        self.overlap = overlap
        super().__init__(
            f"perpendicular state is not orthogonal to psi: |<perp|psi>| = {overlap:.3e}"
        )


def _frozen(values, ndim):
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite entries")
    arr.setflags(write=False)
    return arr


class Ket:
    """Unnormalized complex column vector."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        arr = _frozen(amplitudes, 1)
        if arr.size == 0:
            raise ValueError("a ket needs at least one amplitude")
        self.amplitudes = arr

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __eq__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        return type(self) is type(other) and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self.amplitudes, precision=6)})"


class StateVector(Ket):
    """Unit-norm ket; the norm is checked at construction."""

    __slots__ = ()

    def __init__(self, amplitudes):
        super().__init__(amplitudes)
        norm = self.norm()
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalizedError(norm)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        arr = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise NotNormalizedError(0.0)
        return cls(arr / norm)


class HermitianOperator:
    """Dense Hermitian matrix, validated against its conjugate transpose."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        arr = _frozen(matrix, 2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"operator must be a non-empty square matrix, got {arr.shape}")
        scale = float(np.max(np.abs(arr)))
        deviation = float(np.max(np.abs(arr - arr.conj().T)))
        if deviation > HERMITIAN_TOL * scale:
            raise NotHermitianError(
                f"matrix is not Hermitian: max |M - M^dag| = {deviation:.3e}"
            )
        self.matrix = arr

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.matrix)))

    def scaled(self, c: float) -> "HermitianOperator":
        return HermitianOperator(c * self.matrix)

    def __eq__(self, other):
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def _check_dims(*objs):
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimensionMismatchError(f"dimension mismatch: {sorted(dims)}")


def inner(x: Ket, y: Ket) -> complex:
    """Return ``<x|y>``."""
    _check_dims(x, y)
    return complex(np.vdot(x.amplitudes, y.amplitudes))


def apply(op: HermitianOperator, x: Ket) -> Ket:
    _check_dims(op, x)
    return Ket(op.matrix @ x.amplitudes)


def _residue_scale(*ops):
    return max([1.0] + [o.scale for o in ops])


def expectation(op: HermitianOperator, psi: StateVector) -> float:
    """Return ``<psi|O|psi>`` as a real number.

    The imaginary part is checked against ``1e-12`` times the matrix scale
    before being dropped; anything larger means the operator was not
    Hermitian.
    """
    _check_dims(op, psi)
    value = complex(np.vdot(psi.amplitudes, op.matrix @ psi.amplitudes))
    if abs(value.imag) > RESIDUE_TOL * _residue_scale(op):
        raise NotHermitianError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def variance(op: HermitianOperator, psi: StateVector) -> float:
    """Return ``<O^2> - <O>^2``.

    Small negative round-off (within ``1e-12`` relative to ``<O^2>``) is
    clamped to zero; anything more negative raises.
    """
    _check_dims(op, psi)
    o_psi = op.matrix @ psi.amplitudes
    second = float(np.vdot(o_psi, o_psi).real)
    mean = expectation(op, psi)
    var = second - mean * mean
    if var < 0.0:
        if var < -VARIANCE_CLAMP * max(1.0, second):
            raise ArithmeticError(f"negative variance {var:.3e}")
        var = 0.0
    return var


def deviation_vector(op: HermitianOperator, psi: StateVector) -> Ket:
    """Return ``(O - <O>)|psi>``."""
    mean = expectation(op, psi)
    return Ket(op.matrix @ psi.amplitudes - mean * psi.amplitudes)


def commutator_expectation(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> complex:
    """Return ``<psi|[A, B]|psi>``, which is purely imaginary for Hermitian A, B."""
    _check_dims(a, b, psi)
    v = psi.amplitudes
    value = complex(np.vdot(v, a.matrix @ (b.matrix @ v)) - np.vdot(v, b.matrix @ (a.matrix @ v)))
    if abs(value.real) > RESIDUE_TOL * _residue_scale(a, b) ** 2:
        raise NotHermitianError(f"commutator expectation has real residue {value.real:.3e}")
    return value


def anticommutator_expectation(a: HermitianOperator, b: HermitianOperator, psi: StateVector) -> float:
    _check_dims(a, b, psi)
    v = psi.amplitudes
    value = complex(np.vdot(v, a.matrix @ (b.matrix @ v)) + np.vdot(v, b.matrix @ (a.matrix @ v)))
    if abs(value.imag) > RESIDUE_TOL * _residue_scale(a, b) ** 2:
        raise NotHermitianError(f"anticommutator expectation has imaginary residue {value.imag:.3e}")
    return value.real


def complement_matrix(psi: StateVector) -> np.ndarray:
    """Columns form an orthonormal basis of the complement of ``psi``.

    A Householder reflection maps ``e1`` onto ``psi`` (up to a phase); its
    remaining columns span the orthogonal complement.
    """
    v = psi.amplitudes
    d = v.shape[0]
    if d < 2:
        raise ValueError("orthogonal complement of a 1-dimensional space is empty")
    lead = v[0]
    phase = lead / abs(lead) if abs(lead) > 0 else 1.0
    x = v / phase
    # x[0] is real and >= 0, so x + e1 never cancels
    h = x.copy()
    h[0] += 1.0
    reflector = np.eye(d, dtype=np.complex128) - 2.0 * np.outer(h, h.conj()) / np.vdot(h, h).real
    return reflector[:, 1:]


def orthonormal_complement_basis(psi: StateVector) -> list[StateVector]:
    q = complement_matrix(psi)
    return [StateVector(q[:, k]) for k in range(q.shape[1])]
