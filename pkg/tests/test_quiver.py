import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverperiod import (
    ONE_CYCLE,
    TWO_CYCLE,
    ExchangeMatrix,
    Period2Spec,
    Permutation,
    QuiverError,
    epsilon,
    find_relabeling,
    is_connected,
    is_period1,
    is_period2,
    mu1_partner,
    mutate,
    period1_from_row,
    permute,
)

from oracles import arrow_mutate

MARKOV = ExchangeMatrix.from_rows([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])


def random_matrix(rng, n, bound):
    return ExchangeMatrix.from_entries(
        n,
        {
            (i, j): rng.randint(-bound, bound)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        },
    )


@st.composite
def matrices(draw, max_n=6, bound=5):
    n = draw(st.integers(min_value=1, max_value=max_n))
    entries = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            entries[(i, j)] = draw(st.integers(min_value=-bound, max_value=bound))
    return ExchangeMatrix.from_entries(n, entries)


class TestMutate:
    def test_markov_mutation_value(self):
        # hand-applied exchange formula; cross-checked by the arrow procedure
        expected = ExchangeMatrix.from_rows([[0, -2, 2], [2, 0, -2], [-2, 2, 0]])
        assert mutate(MARKOV, 1) == expected
        assert arrow_mutate(MARKOV, 1) == expected

    def test_involution_on_markov(self):
        assert mutate(mutate(MARKOV, 1), 1) == MARKOV

    def test_zero_matrix_fixed(self):
        Z = ExchangeMatrix.zero(3)
        assert mutate(Z, 2) == Z

    def test_vertex_out_of_range(self):
        with pytest.raises(QuiverError):
            mutate(MARKOV, 4)
        with pytest.raises(QuiverError):
            mutate(MARKOV, 0)

    def test_agrees_with_arrow_procedure(self):
        rng = random.Random(101)
        for _ in range(300):
            n = rng.randint(2, 6)
            B = random_matrix(rng, n, 4)
            k = rng.randint(1, n)
            assert mutate(B, k) == arrow_mutate(B, k)

    @given(matrices())
    @settings(max_examples=150, deadline=None)
    def test_involution_and_skew(self, B):
        for k in range(1, B.n + 1):
            M = mutate(B, k)
            ExchangeMatrix.from_rows(M.rows)  # validates skew-symmetry
            assert mutate(M, k) == B


class TestEpsilon:
    def test_both_positive(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 2, (2, 3): 3})
        assert epsilon(B, 1, 2, 3) == 6

    def test_mixed_signs_vanish(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 2, (2, 3): -3})
        assert epsilon(B, 1, 2, 3) == 0
        B2 = ExchangeMatrix.from_entries(3, {(1, 2): -2, (2, 3): 3})
        assert epsilon(B2, 1, 2, 3) == 0

    def test_both_negative(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): -2, (2, 3): -3})
        assert epsilon(B, 1, 2, 3) == -6

    @given(matrices(max_n=5, bound=4))
    @settings(max_examples=60, deadline=None)
    def test_formula(self, B):
        n = B.n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for l in range(1, n + 1):
                    a, c = B.b(i, j), B.b(j, l)
                    assert 2 * epsilon(B, i, j, l) == abs(a) * c + a * abs(c)


class TestPermute:
    def test_markov_cycle(self):
        s = Permutation.from_cycles(3, [(1, 2, 3)])
        C = permute(MARKOV, s)
        for i in range(1, 4):
            for j in range(1, 4):
                assert C.b(s(i), s(j)) == MARKOV.b(i, j)

    def test_identity(self):
        assert permute(MARKOV, Permutation.identity(3)) == MARKOV

    def test_group_action(self):
        rng = random.Random(17)
        for _ in range(100):
            n = rng.randint(2, 6)
            B = random_matrix(rng, n, 3)
            s = Permutation(n, tuple(rng.sample(range(1, n + 1), n)))
            t = Permutation(n, tuple(rng.sample(range(1, n + 1), n)))
            assert permute(permute(B, s), t) == permute(B, t.compose(s))

    def test_degree_mismatch(self):
        with pytest.raises(QuiverError):
            permute(MARKOV, Permutation.identity(4))


class TestPeriod2Predicate:
    def test_triangle_family(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1})
        assert is_period2(B, Period2Spec(3, ONE_CYCLE, 2))

    def test_markov(self):
        assert is_period2(MARKOV, Period2Spec(3, ONE_CYCLE, 2))

    def test_single_arrow_is_not(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 1})
        assert not is_period2(B, Period2Spec(3, ONE_CYCLE, 2))

    def test_spec_validation(self):
        with pytest.raises(QuiverError):
            Period2Spec(3, ONE_CYCLE, 1)
        with pytest.raises(QuiverError):
            Period2Spec(3, ONE_CYCLE, 4)
        with pytest.raises(QuiverError):
            Period2Spec(3, "other", 2)
        # beyond the canonical range is still a valid equation
        spec = Period2Spec(6, ONE_CYCLE, 5)
        assert not spec.in_canonical_range()

    def test_sigma_shapes(self):
        assert Period2Spec(5, ONE_CYCLE, 2).sigma().image == (2, 3, 4, 5, 1)
        assert Period2Spec(5, TWO_CYCLE, 3).sigma().image == (2, 1, 4, 5, 3)
        assert Period2Spec(4, TWO_CYCLE, 2).sigma().image == (1, 3, 4, 2)


class TestPeriod1:
    def test_construction_row_n3(self):
        B = period1_from_row((-1, -1))
        assert is_period1(B)
        assert B.first_row() == (-1, -1)

    def test_markov_not_period1(self):
        assert not is_period1(MARKOV)

    def test_zero_matrix(self):
        assert is_period1(ExchangeMatrix.zero(3))

    def test_recurrence_quiver_row(self):
        B = period1_from_row((-1, 2, -1))
        assert is_period1(B)
        assert B.first_row() == (-1, 2, -1)

    def test_two_vertices(self):
        assert period1_from_row((3,)) == ExchangeMatrix.from_rows([[0, 3], [-3, 0]])
        assert is_period1(period1_from_row((3,)))

    def test_palindrome_violation(self):
        with pytest.raises(QuiverError):
            period1_from_row((1, 2, 3))

    def test_equivalence_small(self):
        # every period-1 matrix has a palindromic first row and equals the
        # construction from that row; exhaustive for n <= 4, |b| <= 2
        from oracles import all_matrices

        for n in (2, 3, 4):
            for B in all_matrices(n, 2):
                row = B.first_row()
                palindromic = all(
                    row[j - 2] == row[n - j] for j in range(2, n + 1)
                )
                fm = palindromic and B == period1_from_row(row)
                assert fm == is_period1(B), B


class TestMu1Partner:
    def test_triangle_self_paired(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1})
        spec = Period2Spec(3, ONE_CYCLE, 2)
        B2, spec2 = mu1_partner(B, spec)
        assert B2 == B and spec2 == spec

    def test_requires_period2(self):
        B = ExchangeMatrix.from_entries(3, {(1, 2): 1})
        with pytest.raises(QuiverError):
            mu1_partner(B, Period2Spec(3, ONE_CYCLE, 2))

    def test_partner_k_values(self):
        assert Period2Spec(5, ONE_CYCLE, 2).partner_k() == 4
        assert Period2Spec(5, TWO_CYCLE, 3).partner_k() == 4
        assert Period2Spec(4, TWO_CYCLE, 2).partner_k() == 4

    def test_double_partner_isomorphic(self):
        import quiverperiod.families as fm

        rng = random.Random(3)
        instances = fm.regression_instances(2)
        for fid, spec, B in rng.sample(instances, 25):
            B2, spec2 = mu1_partner(B, spec)
            assert is_period2(B2, spec2)
            B3, spec3 = mu1_partner(B2, spec2)
            assert spec3 == spec
            assert find_relabeling(B3, B) is not None


class TestConnected:
    def test_markov(self):
        assert is_connected(MARKOV)

    def test_zero(self):
        assert not is_connected(ExchangeMatrix.zero(4))

    def test_two_components(self):
        B = ExchangeMatrix.from_entries(4, {(1, 2): 1, (3, 4): 1})
        assert not is_connected(B)

    def test_single_vertex(self):
        assert is_connected(ExchangeMatrix.zero(1))
