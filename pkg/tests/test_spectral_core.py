import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opineq import (
    DomainViolation,
    InvalidMatrix,
    LoewnerRelation,
    NotPositiveDefinite,
    ShapeError,
    SplitMix64,
    SymmetricMatrix,
    apply_scalar_function,
    catalog_lookup,
    derive_seed,
    eigendecompose,
    loewner_compare,
    matrix_sqrt_inv_sqrt,
    natural_power,
    random_symmetric_with_spectrum,
)


def inverse_2x2_oracle(a):
    # adjugate over determinant
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / det


class TestSymmetricMatrix:
    def test_symmetrizes_small_asymmetry(self):
        m = SymmetricMatrix([[1.0, 2.0 + 1e-12], [2.0, 3.0]])
        assert m.entries[0, 1] == m.entries[1, 0]

    def test_rejects_large_asymmetry(self):
        with pytest.raises(InvalidMatrix):
            SymmetricMatrix([[1.0, 2.0], [1.0, 3.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidMatrix):
            SymmetricMatrix([[np.inf, 0.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        with pytest.raises(InvalidMatrix):
            SymmetricMatrix([[1.0, 2.0, 3.0]])

    def test_arithmetic(self):
        a = SymmetricMatrix.diagonal([1.0, 2.0])
        b = SymmetricMatrix.identity(2)
        assert np.allclose((a + b).entries, np.diag([2.0, 3.0]))
        assert np.allclose((a - b).entries, np.diag([0.0, 1.0]))
        assert np.allclose((2.0 * a).entries, np.diag([2.0, 4.0]))
        assert np.allclose(a.squared().entries, np.diag([1.0, 4.0]))

    def test_entries_read_only(self):
        a = SymmetricMatrix.identity(2)
        with pytest.raises(ValueError):
            a.entries[0, 0] = 5.0


class TestEigendecompose:
    def test_already_diagonal(self):
        dec = eigendecompose(SymmetricMatrix.diagonal([2.0, 1.0]))
        assert np.allclose(dec.eigenvalues, [1.0, 2.0])
        assert np.allclose(np.abs(dec.eigenvectors), np.eye(2)[:, [1, 0]])

    def test_two_by_two_reference(self):
        dec = eigendecompose(SymmetricMatrix([[3.0, -2.0], [-2.0, 7.0]]))
        expected = [5.0 - 2.0 * math.sqrt(2.0), 5.0 + 2.0 * math.sqrt(2.0)]
        assert np.allclose(dec.eigenvalues, expected, atol=1e-12)

    def test_involution(self):
        dec = eigendecompose(SymmetricMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(dec.eigenvalues, [-1.0, 1.0])

    def test_zero_matrix(self):
        dec = eigendecompose(SymmetricMatrix(np.zeros((3, 3))))
        assert np.allclose(dec.eigenvalues, 0.0)

    def test_dim_one(self):
        dec = eigendecompose(SymmetricMatrix([[4.0]]))
        assert dec.eigenvalues[0] == 4.0

    def test_reconstruction_and_orthogonality_seeded(self):
        # 1000 random symmetric matrices, dims 2-8
        for i in range(1000):
            rng = SplitMix64(derive_seed(101, i))
            dim = 2 + rng.below(7)
            m = -2.0 + 3.0 * rng.uniform()
            matrix = random_symmetric_with_spectrum(rng.next_u64(), dim, m, m + 0.5 + 3.0 * rng.uniform())
            dec = eigendecompose(matrix)
            scale = 1.0 + matrix.norm_max
            assert np.abs(dec.reconstruct() - matrix.entries).max() <= 1e-10 * scale
            q = dec.eigenvectors
            assert np.abs(q.T @ q - np.eye(dim)).max() <= 1e-12 * dim
            assert np.all(np.diff(dec.eigenvalues) >= 0.0)

    def test_deterministic(self):
        entries = [[1.0, 0.3, -0.2], [0.3, 2.0, 0.1], [-0.2, 0.1, 3.0]]
        d1 = eigendecompose(SymmetricMatrix(entries))
        d2 = eigendecompose(SymmetricMatrix(entries))
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(
    arrays(
        np.float64,
        (4, 4),
        elements=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
    )
)
def test_reconstruction_hypothesis(raw):
    matrix = SymmetricMatrix((raw + raw.T) / 2.0)
    dec = eigendecompose(matrix)
    scale = 1.0 + matrix.norm_max
    assert np.abs(dec.reconstruct() - matrix.entries).max() <= 1e-10 * scale


class TestApplyScalarFunction:
    def test_identity(self):
        a = SymmetricMatrix([[1.0, 0.5], [0.5, 2.0]])
        out = apply_scalar_function(a, catalog_lookup("power", [1]))
        assert np.abs(out.entries - a.entries).max() <= 1e-12

    def test_square_of_involution(self):
        a = SymmetricMatrix([[0.0, 1.0], [1.0, 0.0]])
        out = apply_scalar_function(a, catalog_lookup("power", [2]))
        assert np.abs(out.entries - np.eye(2)).max() <= 1e-12

    def test_inverse_trace(self):
        a = SymmetricMatrix([[3.0, -2.0], [-2.0, 7.0]])
        out = apply_scalar_function(a, catalog_lookup("power", [-1]))
        oracle = inverse_2x2_oracle(a.entries)
        assert abs(out.trace - 10.0 / 17.0) <= 1e-12
        assert np.abs(out.entries - oracle).max() <= 1e-12

    def test_domain_violation_reports_eigenvalue(self):
        a = SymmetricMatrix.diagonal([1.0, -0.5])
        with pytest.raises(DomainViolation, match="-0.5"):
            apply_scalar_function(a, catalog_lookup("log"))

    def test_commutes_with_input(self):
        matrix = random_symmetric_with_spectrum(5, 5, 0.5, 2.0)
        image = apply_scalar_function(matrix, catalog_lookup("exp"))
        scale = 1.0 + max(matrix.norm_max, image.norm_max)
        comm = matrix.entries @ image.entries - image.entries @ matrix.entries
        assert np.abs(comm).max() <= 1e-9 * scale

    def test_functional_calculus_homomorphism(self):
        cube = catalog_lookup("power", [3])
        square = catalog_lookup("power", [2])
        for i in range(50):
            matrix = random_symmetric_with_spectrum(derive_seed(33, i), 2 + i % 5, 0.3, 2.5)
            scale = 1.0 + matrix.norm_max**5
            f_a = apply_scalar_function(matrix, cube)
            g_a = apply_scalar_function(matrix, square)
            sum_fn = apply_scalar_function(matrix, _combine(cube, square, lambda x, y: x + y))
            prod_fn = apply_scalar_function(matrix, _combine(cube, square, lambda x, y: x * y))
            assert np.abs(sum_fn.entries - (f_a + g_a).entries).max() <= 1e-9 * scale
            assert np.abs(prod_fn.entries - f_a.entries @ g_a.entries).max() <= 1e-9 * scale


def _combine(f, g, op):
    from opineq import Deriv2Shape, ScalarFunction

    return ScalarFunction(
        name=f"combined({f.name},{g.name})",
        eval=lambda t: op(f.eval(t), g.eval(t)),
        deriv2=lambda t: 0.0 * np.asarray(t, dtype=float),
        domain=(max(f.domain[0], g.domain[0]), min(f.domain[1], g.domain[1])),
        deriv2_shape=Deriv2Shape.GENERAL,
    )


class TestLoewnerCompare:
    def test_identity_vs_double(self):
        verdict = loewner_compare(SymmetricMatrix.identity(2), 2.0 * SymmetricMatrix.identity(2))
        assert verdict.relation is LoewnerRelation.LESS_OR_EQUAL
        assert abs(verdict.gap_min_eig - 1.0) <= 1e-12

    def test_counterexample_gap_is_indefinite(self):
        low = SymmetricMatrix([[325.0, 132.0], [132.0, 61.0]])
        high = SymmetricMatrix([[374.0, 105.0], [105.0, 70.0]])
        gap = high.entries - low.entries
        assert gap[0, 0] * gap[1, 1] - gap[0, 1] * gap[1, 0] < 0.0  # mixed signs
        verdict = loewner_compare(low, high)
        assert verdict.relation is LoewnerRelation.INCOMPARABLE

    def test_swapped_diagonals(self):
        verdict = loewner_compare(SymmetricMatrix.diagonal([1.0, 2.0]), SymmetricMatrix.diagonal([2.0, 1.0]))
        assert verdict.relation is LoewnerRelation.INCOMPARABLE

    def test_equal_within_tolerance(self):
        a = SymmetricMatrix.identity(3)
        verdict = loewner_compare(a, a)
        assert verdict.relation is LoewnerRelation.EQUAL

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            loewner_compare(SymmetricMatrix.identity(2), SymmetricMatrix.identity(3))

    def test_symmetry_property(self):
        for i in range(200):
            rng = SplitMix64(derive_seed(55, i))
            dim = 2 + rng.below(5)
            x = random_symmetric_with_spectrum(rng.next_u64(), dim, -1.0, 1.0)
            y = random_symmetric_with_spectrum(rng.next_u64(), dim, -1.0, 1.0)
            forward = loewner_compare(x, y)
            backward = loewner_compare(y, x)
            assert forward.holds_le == backward.holds_ge
            assert forward.holds_ge == backward.holds_le


class TestNaturalPower:
    def test_identity_base_square_root(self):
        out = natural_power(SymmetricMatrix.identity(2), SymmetricMatrix.diagonal([4.0, 9.0]), 0.5)
        assert np.abs(out.entries - np.diag([2.0, 3.0])).max() <= 1e-12

    def test_exponent_one_returns_other(self):
        base = SymmetricMatrix([[2.0, 0.5], [0.5, 1.5]])
        other = SymmetricMatrix([[1.0, 0.2], [0.2, 3.0]])
        out = natural_power(base, other, 1.0)
        scale = 1.0 + other.norm_max
        assert np.abs(out.entries - other.entries).max() <= 1e-10 * scale

    def test_exponent_zero_returns_base(self):
        base = SymmetricMatrix([[2.0, 0.5], [0.5, 1.5]])
        other = SymmetricMatrix([[1.0, 0.2], [0.2, 3.0]])
        out = natural_power(base, other, 0.0)
        scale = 1.0 + base.norm_max
        assert np.abs(out.entries - base.entries).max() <= 1e-10 * scale

    def test_commuting_diagonal_square(self):
        base = SymmetricMatrix.diagonal([1.0, 4.0])
        other = SymmetricMatrix.diagonal([2.0, 8.0])
        out = natural_power(base, other, 2.0)
        # commuting case: B A^{-1} B
        oracle = other.entries @ np.diag([1.0, 0.25]) @ other.entries
        assert np.abs(out.entries - np.diag([4.0, 16.0])).max() <= 1e-12
        assert np.abs(out.entries - oracle).max() <= 1e-12

    def test_commuting_oracle_simultaneous_diagonalization(self):
        for i, p in enumerate([-1.0, 0.5, 2.0] * 10):
            rng = SplitMix64(derive_seed(77, i))
            dim = 2 + rng.below(4)
            from opineq import random_symmetric_with_spectrum as rand_sym
            from opineq.verifier import random_orthogonal

            q = random_orthogonal(rng, dim)
            lam_a = np.array([0.5 + 2.0 * rng.uniform() for _ in range(dim)])
            lam_b = np.array([0.5 + 2.0 * rng.uniform() for _ in range(dim)])
            base = SymmetricMatrix((q * lam_a) @ q.T)
            other = SymmetricMatrix((q * lam_b) @ q.T)
            out = natural_power(base, other, p)
            oracle = (q * (lam_a ** (1.0 - p) * lam_b**p)) @ q.T
            scale = 1.0 + np.abs(oracle).max()
            assert np.abs(out.entries - oracle).max() <= 1e-9 * scale

    def test_requires_strictly_positive_base(self):
        with pytest.raises(NotPositiveDefinite):
            natural_power(SymmetricMatrix.diagonal([1.0, -1.0]), SymmetricMatrix.identity(2), 0.5)

    def test_fractional_power_needs_psd_inner(self):
        base = SymmetricMatrix.identity(2)
        other = SymmetricMatrix.diagonal([1.0, -0.5])
        with pytest.raises(DomainViolation):
            natural_power(base, other, 0.5)

    def test_clamp_warning_on_tiny_negative(self):
        base = SymmetricMatrix.identity(2)
        other = SymmetricMatrix.diagonal([1.0, -1e-14])
        out = natural_power(base, other, 0.5)
        assert out.clamp_warning


class TestMatrixSqrtInvSqrt:
    def test_identity(self):
        root, inv_root = matrix_sqrt_inv_sqrt(SymmetricMatrix.identity(3))
        assert np.abs(root.entries - np.eye(3)).max() <= 1e-12
        assert np.abs(inv_root.entries - np.eye(3)).max() <= 1e-12

    def test_diagonal(self):
        root, inv_root = matrix_sqrt_inv_sqrt(SymmetricMatrix.diagonal([4.0, 9.0]))
        assert np.abs(root.entries - np.diag([2.0, 3.0])).max() <= 1e-12
        assert np.abs(inv_root.entries - np.diag([0.5, 1.0 / 3.0])).max() <= 1e-12

    def test_reconstruction(self):
        matrix = SymmetricMatrix([[2.0, 1.0], [1.0, 2.0]])
        root, inv_root = matrix_sqrt_inv_sqrt(matrix)
        assert np.abs(root.entries @ root.entries - matrix.entries).max() <= 1e-10
        assert np.abs(root.entries @ inv_root.entries - np.eye(2)).max() <= 1e-9

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            matrix_sqrt_inv_sqrt(SymmetricMatrix.diagonal([1.0, 0.0]))
