import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hmftheta.errors import NonDivisibleWeight, WeightMismatch
from hmftheta.generators import random_cone_weight, random_weight
from hmftheta.shape import FieldShape, PrimeShape, Tau, ThetaIndex
from hmftheta.weights import (
    WeightVector,
    combine_hasse,
    expected_lambda_index,
    frob_phi,
    frob_weight_shift,
    frob_weight_unshift,
    hasse_matrix,
    hasse_weight,
    hbasis_decompose,
    in_min_cone,
    lambda_contains,
    lambda_index,
    leq_hasse,
    ptwt0_feasible,
    rho,
    theta_weight_shift,
)

from conftest import small_shapes
from oracles import hnf_membership, rational_coords, smith_diagonal

T = ThetaIndex
S521 = FieldShape.single(5, 2, 1)


def W(shape, *xs):
    return WeightVector(shape, xs)


class TestHasseWeights:
    def test_unramified_case(self):
        s = FieldShape.single(3, 1, 3)
        for i in range(3):
            h = hasse_weight(s, T("P", i, 1))
            expected = [0, 0, 0]
            expected[(i - 1) % 3] += 3
            expected[i] -= 1
            assert list(h) == expected

    def test_ramified_examples(self):
        assert list(hasse_weight(S521, T("P", 0, 2))) == [1, -1]
        assert list(hasse_weight(S521, T("P", 0, 1))) == [-1, 5]

    def test_matrix_oracle(self):
        # frozen from a sympy Smith form of the (2, 2, 3) h-matrix
        s = FieldShape.single(3, 2, 2)
        assert hasse_matrix(s) == ((-1, 0, 0, 3), (1, -1, 0, 0), (0, 3, -1, 0), (0, 0, 1, -1))
        assert smith_diagonal(hasse_matrix(s)) == [1, 1, 1, 8]


class TestCone:
    def test_examples(self):
        assert in_min_cone(W(S521, 0, 0))
        assert in_min_cone(W(S521, 1, 3))
        assert not in_min_cone(W(S521, 1, 6))

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_cone_inside_nonnegative_span(self, shape):
        rng = random.Random(shape.d * 31 + shape.p)
        for _ in range(200):
            k = random_cone_weight(shape, rng)
            assert all(x >= 0 for x in hbasis_decompose(k))


class TestThetaShift:
    @pytest.mark.parametrize(
        "p,e,f,tau,expected",
        [
            (5, 1, 1, Tau("P", 0), {T("P", 0, 1): 6}),
            (3, 1, 2, Tau("P", 1), {T("P", 1, 1): 1, T("P", 0, 1): 3}),
            (3, 1, 2, Tau("P", 0), {T("P", 0, 1): 1, T("P", 1, 1): 3}),
            (5, 2, 1, Tau("P", 0), {T("P", 0, 2): 1, T("P", 0, 1): 1}),
            (3, 2, 2, Tau("P", 0), {T("P", 0, 2): 1, T("P", 0, 1): 1}),
            (3, 2, 2, Tau("P", 1), {T("P", 1, 2): 1, T("P", 1, 1): 1}),
        ],
    )
    def test_bullet_cases(self, p, e, f, tau, expected):
        s = FieldShape.single(p, e, f)
        rng = random.Random(p * e * f)
        k = random_weight(s, rng)
        l = random_weight(s, rng)
        k2, l2 = theta_weight_shift(tau, k, l)
        for t in s:
            assert k2[t] == k[t] + expected.get(t, 0)
        t0 = s.theta0(tau)
        assert l2 == l - WeightVector.unit(s, t0)

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_character_shift(self, shape):
        rng = random.Random(shape.d)
        for tau in shape.taus():
            t0 = shape.theta0(tau)
            k = random_weight(shape, rng)
            k2, _ = theta_weight_shift(tau, k, k)
            delta = hasse_weight(shape, t0) + 2 * WeightVector.unit(shape, t0)
            assert rho(k2 - k) == rho(delta)
            assert rho(k2 - k) == rho(2 * WeightVector.unit(shape, t0))


class TestFrobShift:
    def test_example(self):
        k, l = frob_weight_shift("P", W(S521, 2, 3), W(S521, 1, 0))
        assert list(k) == [3, 10]
        assert list(l) == [0, 5]

    def test_other_primes_untouched(self):
        s = FieldShape(3, (PrimeShape("P", 2, 1), PrimeShape("Q", 1, 2)))
        k = W(s, 1, 2, 3, 4)
        k2, _ = frob_weight_shift("P", k, k)
        assert list(k2) == [2, 3, 3, 4]
        k3, _ = frob_weight_shift("Q", k, k)
        assert list(k3) == [1, 2, 12, 9]

    def test_unshift_examples(self):
        assert list(frob_weight_unshift("P", W(S521, 3, 10))) == [2, 3]
        with pytest.raises(NonDivisibleWeight):
            frob_weight_unshift("P", W(S521, 3, 7))
        assert list(frob_weight_unshift("P", W(S521, 0, 0))) == [0, 0]

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_power_is_p_times_phi(self, shape):
        rng = random.Random(shape.d * 7)
        for _ in range(100):
            k = random_weight(shape, rng, -20, 20)
            out = k
            for P in shape.primes:
                for _ in range(P.e):
                    out, _ = frob_weight_shift(P.id, out, out)
            assert out == shape.p * frob_phi(k)

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_shift_of_hasse_weight(self, shape):
        for t in shape:
            k2, _ = frob_weight_shift(t.prime, hasse_weight(shape, t), hasse_weight(shape, t))
            assert k2 == shape.multiplier_n(t) * hasse_weight(shape, shape.sigma_inv(t))

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_unshift_inverts_and_character_is_invariant(self, shape):
        rng = random.Random(shape.d * 3)
        for _ in range(50):
            k = random_weight(shape, rng)
            for P in shape.primes:
                k2, _ = frob_weight_shift(P.id, k, k)
                assert frob_weight_unshift(P.id, k2) == k
                assert rho(k2) == rho(k)


class TestCharacters:
    def test_examples(self):
        s = FieldShape.single(2, 1, 2)
        chi = rho(WeightVector.unit(s, T("P", 1, 1)))
        assert chi.classes == (2,) and chi.moduli == (3,)
        assert rho(WeightVector.zero(s)).is_trivial

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_hasse_weights_have_trivial_character(self, shape):
        for t in shape:
            assert rho(hasse_weight(shape, t)).is_trivial
            assert lambda_contains(hasse_weight(shape, t))

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_lambda_membership_against_sympy(self, shape):
        rng = random.Random(shape.d * 13)
        rows = hasse_matrix(shape)
        for _ in range(15):
            k = random_weight(shape, rng)
            assert lambda_contains(k) == hnf_membership(rows, k.entries)
            coeffs = [rng.randint(-3, 3) for _ in range(shape.d)]
            assert lambda_contains(k - k + combine_hasse(shape, coeffs))


class TestLatticeIndex:
    def test_examples(self):
        assert lambda_index(FieldShape.single(2, 1, 2)) == 3
        assert lambda_index(S521) == 4

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_against_sympy(self, shape):
        diag = smith_diagonal(hasse_matrix(shape))
        prod = 1
        for x in diag:
            prod *= x
        assert lambda_index(shape) == prod == expected_lambda_index(shape)


class TestHBasis:
    def test_examples(self):
        assert hbasis_decompose(hasse_weight(S521, T("P", 0, 1))) == [1, 0]
        assert hbasis_decompose(W(FieldShape.single(2, 1, 1), 3)) == [3]
        assert hbasis_decompose(W(S521, 1, 3)) == [1, 2]
        assert hbasis_decompose(W(S521, 1, 0)) == [Fraction(1, 4), Fraction(5, 4)]

    @pytest.mark.parametrize("shape", small_shapes(), ids=str)
    def test_against_sympy_solve(self, shape):
        rng = random.Random(shape.d * 17)
        for _ in range(5):
            k = random_weight(shape, rng)
            assert hbasis_decompose(k) == [Fraction(int(x.p), int(x.q)) for x in
                                           rational_coords(hasse_matrix(shape), k.entries)]

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=12), min_size=4, max_size=4))
    def test_roundtrip_on_rationals(self, s):
        shape = FieldShape.single(3, 2, 2)
        rows = hasse_matrix(shape)
        k = [sum(s[i] * rows[i][j] for i in range(4)) for j in range(4)]
        if all(Fraction(x).denominator == 1 for x in k):
            assert hbasis_decompose(WeightVector(shape, [int(x) for x in k])) == s


class TestHasseOrder:
    def test_examples(self):
        k = W(S521, 3, 4)
        assert leq_hasse(k, k) == (0, 0)
        assert leq_hasse(W(S521, 1, 1), W(S521, 2, 0)) == (0, 1)
        assert leq_hasse(W(S521, 0, 0), W(S521, 1, 0)) is None
        assert leq_hasse(W(S521, 2, 0), W(S521, 1, 1)) is None


class TestPositivityFeasibility:
    def test_examples(self):
        assert ptwt0_feasible(5, 1, 2) == set()
        assert ptwt0_feasible(5, 2, 1) == set()
        assert (0,) in ptwt0_feasible(2, 1, 1)
        # frozen: box search over s = (2,) for h = (1)
        assert ptwt0_feasible(2, 1, 1) == {(0,), (1,), (2,)}

    def test_small_cases_by_brute_force(self):
        # independent search on a larger box, without the h-basis bound
        import itertools

        for p, e, f in [(2, 2, 1), (3, 2, 1), (2, 1, 2), (3, 1, 2), (5, 1, 1)]:
            shape = FieldShape.single(p, e, f)
            target = 2 * WeightVector.unit(shape, T("P", 0, e))
            brute = set()
            for m in itertools.product(range(6), repeat=shape.d):
                if in_min_cone(target - combine_hasse(shape, m)):
                    brute.add(m)
            assert brute == ptwt0_feasible(p, e, f)


def test_mismatched_shapes():
    with pytest.raises(WeightMismatch):
        W(S521, 1, 2) + W(FieldShape.single(3, 2, 1), 1, 2)
    with pytest.raises(WeightMismatch):
        WeightVector(S521, [1])
