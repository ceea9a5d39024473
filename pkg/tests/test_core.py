import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uncertainty_bounds.core import (
    DimensionMismatchError,
    HermitianOperator,
    Ket,
    NotHermitianError,
    NotNormalizedError,
    StateVector,
    anticommutator_expectation,
    apply,
    commutator_expectation,
    deviation_vector,
    expectation,
    inner,
    orthonormal_complement_basis,
    variance,
)
from uncertainty_bounds.operators import spin1_theta_state

SQ2 = np.sqrt(2.0)


def _spectral_variance(op, psi):
    """Variance from the eigenvalue distribution; independent of <O^2> - <O>^2."""
    vals, vecs = np.linalg.eigh(op.matrix)
    probs = np.abs(vecs.conj().T @ psi.amplitudes) ** 2
    mean = probs @ vals
    return float(probs @ (vals - mean) ** 2)


def _random_state(rng, d):
    return StateVector.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def _random_herm(rng, d):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianOperator((m + m.conj().T) / 2)


class TestTypes:
    def test_state_rejects_unnormalized(self):
        with pytest.raises(NotNormalizedError) as err:
            StateVector([1.0, 1.0])
        assert err.value.norm == pytest.approx(SQ2)

    def test_state_tolerates_rounding(self):
        StateVector([1.0 + 5e-10, 0.0])

    def test_hermitian_rejects_asymmetric(self):
        with pytest.raises(NotHermitianError):
            HermitianOperator([[0, 1], [0, 0]])

    def test_hermitian_accepts_decimal_literal(self):
        HermitianOperator([[0.1, 0.3 - 0.2j], [0.3 + 0.2j, -0.7]])

    def test_immutable(self):
        k = Ket([1, 2])
        with pytest.raises(ValueError):
            k.amplitudes[0] = 3

    def test_non_finite(self):
        with pytest.raises(ValueError):
            Ket([np.nan, 1])


class TestInner:
    def test_basis(self):
        e1, e2 = Ket([1, 0]), Ket([0, 1])
        assert inner(e1, e1) == 1
        assert inner(e1, e2) == 0

    def test_conjugate_first_slot(self):
        # <(e1 + i e2)/sqrt2 | e2> = conj(i/sqrt2) = -i/sqrt2
        x = Ket(np.array([1, 1j]) / SQ2)
        assert inner(x, Ket([0, 1])) == pytest.approx(-1j / SQ2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            inner(Ket([1, 0]), Ket([1, 0, 0]))

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(2, 6),
        st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        st.integers(0, 2**31),
    )
    def test_sesquilinear(self, d, c, seed):
        rng = np.random.default_rng(seed)
        x = Ket(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        y = Ket(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        base = inner(x, y)
        tol = 1e-12 * max(1.0, abs(c) * abs(base))
        assert abs(inner(x, Ket(c * y.amplitudes)) - c * base) <= tol
        assert abs(inner(Ket(c * x.amplitudes), y) - np.conj(c) * base) <= tol

    def test_self_inner_nonnegative(self, rng):
        x = Ket(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        v = inner(x, x)
        assert v.imag == 0 and v.real > 0


class TestApply:
    def test_identity(self):
        x = Ket([1, 2j, 3])
        assert apply(HermitianOperator(np.eye(3)), x) == x

    def test_jz_annihilates_zero(self, spin1, kets):
        assert np.allclose(apply(spin1["z"], kets[0]).amplitudes, 0)

    def test_jx_on_zero(self, spin1, kets):
        out = apply(spin1["x"], kets[0]).amplitudes
        assert np.allclose(out, np.array([1, 0, 1]) / SQ2, atol=1e-15)

    def test_mismatch(self, spin1):
        with pytest.raises(DimensionMismatchError):
            apply(spin1["x"], Ket([1, 0]))


class TestStatistics:
    def test_expectation(self, spin1, kets):
        assert expectation(spin1["z"], kets[0]) == 0
        assert expectation(spin1["z"], kets[1]) == pytest.approx(1.0)

    @pytest.mark.parametrize("theta", np.linspace(0, np.pi, 9))
    def test_jx_mean_vanishes_on_theta_state(self, spin1, theta):
        assert abs(expectation(spin1["x"], spin1_theta_state(theta))) <= 1e-15

    def test_variance_examples(self, spin1, kets):
        assert variance(spin1["z"], kets[1]) == 0
        assert variance(spin1["x"], kets[0]) == pytest.approx(1.0, abs=1e-15)
        assert variance(spin1["x"], kets[1]) == pytest.approx(0.5, abs=1e-15)

    def test_variance_matches_spectral_oracle(self, rng):
        for d in (2, 3, 5, 8):
            op, psi = _random_herm(rng, d), _random_state(rng, d)
            assert variance(op, psi) == pytest.approx(_spectral_variance(op, psi), rel=1e-10, abs=1e-12)

    def test_deviation_vector(self, spin1, kets):
        assert np.allclose(deviation_vector(spin1["z"], kets[1]).amplitudes, 0)
        assert np.allclose(deviation_vector(spin1["x"], kets[0]).amplitudes, np.array([1, 0, 1]) / SQ2)
        ident = HermitianOperator(np.eye(3))
        assert np.allclose(deviation_vector(ident, spin1_theta_state(0.4)).amplitudes, 0)

    def test_deviation_norm_is_variance(self, rng):
        for d in (2, 4, 7):
            op, psi = _random_herm(rng, d), _random_state(rng, d)
            assert deviation_vector(op, psi).norm() ** 2 == pytest.approx(variance(op, psi), rel=1e-10)

    def test_commutator_examples(self, spin1, kets):
        a = spin1["x"]
        assert commutator_expectation(a, a, kets[0]) == 0
        assert commutator_expectation(spin1["x"], spin1["y"], kets[1]) == pytest.approx(1j)

    @pytest.mark.parametrize("theta", np.linspace(0, np.pi / 2, 5))
    def test_commutator_theta_state(self, spin1, theta):
        value = commutator_expectation(spin1["x"], spin1["y"], spin1_theta_state(theta))
        assert value == pytest.approx(1j * np.cos(2 * theta), abs=1e-15)

    def test_commutator_is_deviation_cross_term(self, rng):
        for d in (2, 3, 6):
            a, b, psi = _random_herm(rng, d), _random_herm(rng, d), _random_state(rng, d)
            pa, pb = deviation_vector(a, psi), deviation_vector(b, psi)
            c = commutator_expectation(a, b, psi)
            assert abs(c.real) <= 1e-12 * max(1, a.scale, b.scale) ** 2
            assert abs(c - (inner(pa, pb) - inner(pb, pa))) <= 1e-10

    def test_anticommutator_examples(self, spin1, kets):
        psi = spin1_theta_state(0.3)
        ident = HermitianOperator(np.eye(3))
        assert anticommutator_expectation(spin1["x"], ident, psi) == pytest.approx(2 * expectation(spin1["x"], psi))
        assert anticommutator_expectation(spin1["x"], spin1["y"], kets[0]) == pytest.approx(0.0, abs=1e-15)
        assert anticommutator_expectation(spin1["z"], spin1["z"], kets[1]) == pytest.approx(2.0)


class TestComplement:
    def test_two_dim(self):
        basis = orthonormal_complement_basis(StateVector([1, 0]))
        assert len(basis) == 1
        assert abs(abs(basis[0].amplitudes[1]) - 1) <= 1e-15

    def test_three_dim_spans(self):
        basis = orthonormal_complement_basis(StateVector([1, 0, 0]))
        q = np.column_stack([b.amplitudes for b in basis])
        assert np.allclose(q[0], 0)
        assert np.allclose(q.conj().T @ q, np.eye(2))

    @pytest.mark.parametrize("d", [2, 3, 4, 6, 8])
    def test_gram_identity(self, rng, d):
        for _ in range(20):
            psi = _random_state(rng, d)
            q = np.column_stack([psi.amplitudes] + [b.amplitudes for b in orthonormal_complement_basis(psi)])
            assert np.max(np.abs(q.conj().T @ q - np.eye(d))) <= 1e-10

    def test_deterministic(self, rng):
        psi = _random_state(rng, 5)
        a = orthonormal_complement_basis(psi)
        b = orthonormal_complement_basis(psi)
        assert a == b

    def test_zero_leading_amplitude(self):
        psi = StateVector([0, 0, 1j])
        q = np.column_stack([psi.amplitudes] + [b.amplitudes for b in orthonormal_complement_basis(psi)])
        assert np.allclose(q.conj().T @ q, np.eye(3))
