import numpy as np
import pytest

from normsplit import (
    AffineMonotone,
    Ball,
    ConstantValued,
    Inverse,
    NormalCone,
    OperatorPair,
    Zero,
    calculus_identity_pair,
    dr_apply,
    dr_map_shifted,
    dual_of_perturbed,
    dual_pair,
    inner_perturb,
    outer_perturb,
    project,
    resolvent,
)
from normsplit.vecspace import solve_linear

from zoo import operator_zoo, rng, sample_points

W2 = np.array([0.8, -1.3])


class TestShiftBuilders:
    def test_inner_zero_operator_shift_invariant(self):
        op = inner_perturb(Zero(2), W2)
        for x in sample_points(rng(1), 2, 10):
            np.testing.assert_allclose(resolvent(op, x), x)

    def test_inner_normal_cone_translate_project_translate(self):
        ball = Ball([0.0, 0.0], 1.0)
        op = inner_perturb(NormalCone(ball), W2)
        for x in sample_points(rng(2), 2, 10):
            np.testing.assert_allclose(
                resolvent(op, x), project(ball, x - W2) + W2, atol=1e-12
            )

    def test_inner_constant_ignores_argument(self):
        a = np.array([0.4, 2.0])
        op = inner_perturb(ConstantValued(a), W2)
        for x in sample_points(rng(3), 2, 10):
            np.testing.assert_allclose(resolvent(op, x), x - a, atol=1e-12)

    def test_outer_zero(self):
        op = outer_perturb(Zero(2), W2)
        for x in sample_points(rng(4), 2, 10):
            np.testing.assert_allclose(resolvent(op, x), x + W2)

    def test_outer_constant(self):
        a = np.array([0.4, 2.0])
        op = outer_perturb(ConstantValued(a), W2)
        for x in sample_points(rng(5), 2, 10):
            np.testing.assert_allclose(resolvent(op, x), x - a + W2, atol=1e-12)

    def test_outer_zero_shift_is_noop(self):
        base = NormalCone(Ball([1.0, 1.0], 2.0))
        op = outer_perturb(base, np.zeros(2))
        for x in sample_points(rng(6), 2, 10):
            np.testing.assert_allclose(resolvent(op, x), resolvent(base, x))

    def test_inner_then_reverse_shift_roundtrips(self):
        gen = rng(7)
        for dim in (2, 3):
            for name, op in operator_zoo(dim):
                w = gen.normal(size=dim)
                roundtrip = inner_perturb(inner_perturb(op, w), -w)
                for x in sample_points(gen, dim, 10):
                    gap = resolvent(roundtrip, x) - resolvent(op, x)
                    assert np.linalg.norm(gap) <= 1e-12, name


class TestCalculusIdentities:
    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            calculus_identity_pair(0, Zero(2), W2)
        with pytest.raises(ValueError):
            calculus_identity_pair(7, Zero(2), W2)

    def test_index_1_zero_shift_is_plain_inverse(self):
        base = NormalCone(Ball([0.5, 0.0], 1.0))
        lhs, rhs = calculus_identity_pair(1, base, np.zeros(2))
        plain = Inverse(base)
        for x in sample_points(rng(8), 2, 10):
            np.testing.assert_allclose(resolvent(lhs, x), resolvent(plain, x), atol=1e-12)
            np.testing.assert_allclose(resolvent(rhs, x), resolvent(plain, x), atol=1e-12)

    def test_index_3_zero_operator_gives_identity_resolvent(self):
        lhs, rhs = calculus_identity_pair(3, Zero(2), W2)
        for x in sample_points(rng(9), 2, 10):
            np.testing.assert_allclose(resolvent(lhs, x), x, atol=1e-12)
            np.testing.assert_allclose(resolvent(rhs, x), x, atol=1e-12)

    def test_index_5_constant_hand_expansion(self):
        a = np.array([1.5, -0.25])
        lhs, rhs = calculus_identity_pair(5, ConstantValued(a), W2)
        for x in sample_points(rng(10), 2, 10):
            np.testing.assert_allclose(resolvent(lhs, x), -a, atol=1e-10)
            np.testing.assert_allclose(resolvent(rhs, x), -a, atol=1e-10)

    @pytest.mark.parametrize("index", [1, 2, 3, 4, 5, 6])
    def test_all_identities_across_zoo(self, index):
        gen = rng(100 + index)
        for dim in (2, 3):
            for name, op in operator_zoo(dim):
                w = gen.normal(size=dim)
                lhs, rhs = calculus_identity_pair(index, op, w)
                for x in sample_points(gen, dim, 50):
                    gap = resolvent(lhs, x) - resolvent(rhs, x)
                    assert np.linalg.norm(gap) <= 1e-9, f"identity {index} on {name}"


class TestDualOfPerturbed:
    def test_zero_shift_matches_plain_dual_pair(self):
        a = NormalCone(Ball([0.0, 0.0], 1.0))
        b = AffineMonotone([[1.0, 0.0], [0.0, 2.0]], [0.3, -0.3])
        da, db = dual_of_perturbed((a, b), np.zeros(2))
        plain = dual_pair(OperatorPair(a, b))
        for x in sample_points(rng(11), 2, 10):
            np.testing.assert_allclose(resolvent(da, x), resolvent(plain.A, x), atol=1e-12)
            np.testing.assert_allclose(resolvent(db, x), resolvent(plain.B, x), atol=1e-12)

    def test_constant_pair_hand_expansion(self):
        a_val = np.array([1.0, -2.0])
        b_val = np.array([0.5, 3.0])
        w = np.array([1.0, 0.0])
        da, db = dual_of_perturbed((ConstantValued(a_val), ConstantValued(b_val)), w)
        for x in sample_points(rng(12), 2, 10):
            np.testing.assert_allclose(resolvent(da, x), -a_val, atol=1e-10)
            np.testing.assert_allclose(resolvent(db, x), b_val - w, atol=1e-10)

    def test_redualizing_recovers_perturbed_pair(self):
        gen = rng(13)
        a = NormalCone(Ball([0.0, 1.0], 1.5))
        b = AffineMonotone([[1.0, -1.0], [1.0, 1.0]], [0.2, 0.1])
        for _ in range(5):
            w = gen.normal(size=2)
            dual = dual_of_perturbed((a, b), w)
            recovered = dual_pair(OperatorPair(*dual))
            expect_a = inner_perturb(a, w)
            expect_b = outer_perturb(b, w)
            for x in sample_points(gen, 2, 10):
                np.testing.assert_allclose(
                    resolvent(recovered.A, x), resolvent(expect_a, x), atol=1e-10
                )
                np.testing.assert_allclose(
                    resolvent(recovered.B, x), resolvent(expect_b, x), atol=1e-10
                )

    def test_shares_splitting_operator_with_shifted_map(self):
        gen = rng(14)
        a = NormalCone(Ball([0.0, 0.0], 2.0))
        b = AffineMonotone([[0.0, -1.0], [1.0, 0.0]], [1.0, 1.0])
        pair = OperatorPair(a, b)
        for _ in range(5):
            w = gen.normal(size=2)
            dual = OperatorPair(*dual_of_perturbed((a, b), w))
            for x in sample_points(gen, 2, 10):
                np.testing.assert_allclose(
                    dr_apply(dual, x), dr_map_shifted(pair, w, x), atol=1e-10
                )


class TestShiftCommutationRemark:
    """Pointwise sum identity on a single-valued affine subfamily."""

    def test_affine_invertible_family(self):
        gen = rng(15)
        m_a = np.array([[2.0, 1.0], [0.0, 1.0]])
        a_off = np.array([0.5, -1.0])
        m_b = np.array([[1.0, -1.0], [1.0, 1.0]])
        b_off = np.array([-0.3, 0.7])

        def a_flip_inv(y):
            # A^-v(y) = -A^-1(-y) for single-valued invertible affine A
            return -solve_linear(m_a, -y - a_off)

        def b_inv(y):
            return solve_linear(m_b, y - b_off)

        for _ in range(20):
            w = gen.normal(size=2)
            x = gen.normal(size=2, scale=3.0)
            lhs = a_flip_inv(x - w) + (b_inv(x) - w)
            y = x - w
            rhs = (a_flip_inv(y) - w) + b_inv(y + w)
            assert np.linalg.norm(lhs - rhs) <= 1e-9
