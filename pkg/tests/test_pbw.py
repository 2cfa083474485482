"""
Tests for domains.quantum.pbw: word enumeration, the Serre ideal and reduction.
"""

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from domains.quantum.cartan import named_datum
from domains.quantum.pbw import GradedVector, SerreQuotient, echelonize, word_key
from domains.quantum.qfield import ONE, RatFunc, qint, qpow
from helpers.db_helper import IdealBasisCache
from helpers.reliability import CacheError, DegreeCapExceeded, ValidationError

q = qpow(1)


def positive_roots(datum):
    """Positive roots of a finite-type datum, by closing the simple roots under simple reflections."""
    rank = datum.rank
    simple = [tuple(int(k == i) for k in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in datum.index_set:
            coroot = sum(beta[j - 1] * datum.a(i, j) for j in datum.index_set)
            image = tuple(b - coroot * (k == i - 1) for k, b in enumerate(beta))
            if all(x >= 0 for x in image) and image not in seen:
                seen.add(image)
                frontier.append(image)
    return sorted(seen)


def kostant_count(weight, roots):
    """Number of multisets of positive roots summing to weight."""

    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total = 0
        while all(x >= 0 for x in rest):
            total += count(rest, k + 1)
            rest = tuple(x - r for x, r in zip(rest, roots[k]))
        return total

    return count(tuple(weight), 0)


def weights_up_to(degree):
    return [(m, d - m) for d in range(1, degree + 1) for m in range(d + 1)]


@pytest.fixture(scope="module")
def a2_quotient():
    return SerreQuotient(named_datum("A2"))


class TestEnumerateWords:
    """Test word enumeration."""

    def test_weight_one_one(self, a2_quotient):
        """Test weight (1,1) gives [E1E2, E2E1]."""
        assert a2_quotient.enumerate_words((1, 1)) == [(1, 2), (2, 1)]

    @pytest.mark.parametrize("weight,count", [((2, 1), 3), ((2, 2), 6), ((3, 2), 10), ((0, 0), 1)])
    def test_multinomial_counts(self, a2_quotient, weight, count):
        """Test the number of words is the multinomial coefficient."""
        words = a2_quotient.enumerate_words(weight)
        assert len(words) == count
        assert words == sorted(words, key=word_key)

    def test_cap_exceeded(self):
        """Test a weight above the degree cap raises DegreeCapExceeded."""
        quotient = SerreQuotient(named_datum("A2"), degree_cap=3)
        with pytest.raises(DegreeCapExceeded):
            quotient.enumerate_words((2, 2))

    def test_bad_weight(self, a2_quotient):
        """Test weights of the wrong length or sign are rejected."""
        with pytest.raises(ValidationError):
            a2_quotient.enumerate_words((1, 1, 1))
        with pytest.raises(ValidationError):
            a2_quotient.enumerate_words((-1, 2))


class TestSerreElement:
    """Test the q-Serre generators."""

    def test_a2(self, a2_quotient):
        """Test E1E1E2/[2] - E1E2E1 + E2E1E1/[2] in A2."""
        element = a2_quotient.serre_element(1, 2)
        half = qint(2).inverse()
        assert element.weight == (2, 1)
        assert dict(element.coords) == {(2, 1, 1): half, (1, 2, 1): -ONE, (1, 1, 2): half}

    def test_commuting_pair(self):
        """Test a_ij = 0 gives a commutator."""
        element = SerreQuotient(named_datum("A1xA1")).serre_element(1, 2)
        assert dict(element.coords) == {(2, 1): ONE, (1, 2): -ONE}

    def test_b2_long_root(self):
        """Test the long root of B2 uses [2]_i = q^2 + q^-2."""
        element = SerreQuotient(named_datum("B2")).serre_element(1, 2)
        assert element.coords[(1, 1, 2)] == (q ** 2 + q ** -2).inverse()

    def test_same_index_rejected(self, a2_quotient):
        """Test i = j is rejected."""
        with pytest.raises(ValidationError):
            a2_quotient.serre_element(1, 1)


class TestIdealBasis:
    """Test graded pieces of the Serre ideal."""

    @pytest.mark.parametrize("weight,rows", [((1, 1), 0), ((2, 1), 1), ((1, 2), 1), ((2, 2), 3)])
    def test_a2_rows(self, a2_quotient, weight, rows):
        """Test A2 ideal ranks at low weights."""
        assert len(a2_quotient.ideal_basis(weight)) == rows

    def test_echelon_invariants(self, a2_quotient):
        """Test pivots are distinct, pivot entries are 1 and no row holds another pivot."""
        basis = a2_quotient.ideal_basis((2, 2))
        for pivot, row in basis.rows.items():
            assert row[pivot] == ONE
            assert max(row, key=word_key) == pivot
            for other in basis.rows:
                if other != pivot:
                    assert other not in row

    @pytest.mark.parametrize("name", ["A2", "B2"])
    def test_dimension_matches_kostant(self, name):
        """Test quotient dimensions equal Kostant partition counts up to degree 6."""
        datum = named_datum(name)
        quotient = SerreQuotient(datum)
        roots = positive_roots(datum)
        for weight in weights_up_to(6):
            assert quotient.quotient_dimension(weight) == kostant_count(weight, roots), weight

    @pytest.mark.slow
    def test_dimension_matches_kostant_g2(self):
        """Test G2 quotient dimensions equal Kostant partition counts up to degree 6."""
        datum = named_datum("G2")
        quotient = SerreQuotient(datum)
        roots = positive_roots(datum)
        assert len(roots) == 6
        for weight in weights_up_to(6):
            assert quotient.quotient_dimension(weight) == kostant_count(weight, roots), weight

    def test_serre_off_is_empty(self):
        """Test the ideal is empty without Serre relations."""
        quotient = SerreQuotient(named_datum("A2"), serre_mode=False)
        assert len(quotient.ideal_basis((2, 1))) == 0
        assert quotient.quotient_dimension((2, 2)) == 6

    def test_concurrent_queries_share_one_basis(self):
        """Test concurrent queries for one weight see the same basis object."""
        quotient = SerreQuotient(named_datum("B2"))
        with ThreadPoolExecutor(max_workers=4) as pool:
            bases = list(pool.map(lambda _: quotient.ideal_basis((2, 2)), range(8)))
        assert all(b is bases[0] for b in bases)

    def test_persistent_store_round_trip(self, temp_db):
        """Test a stored basis is reloaded identically by a fresh quotient."""
        store = IdealBasisCache(temp_db)
        first = SerreQuotient(named_datum("A2"), store=store).ideal_basis((2, 2))
        assert store.load_ideal_basis("2 -1;-1 2", True, (2, 2)) is not None
        second = SerreQuotient(named_datum("A2"), store=store).ideal_basis((2, 2))
        assert dict(second.rows) == dict(first.rows)

    def test_failing_store_falls_back_to_memory(self):
        """Test a broken store does not stop the computation."""

        class BrokenStore:
            def load_ideal_basis(self, *args):
                raise CacheError("disk unavailable")

            def store_ideal_basis(self, *args):
                raise CacheError("disk unavailable")

        quotient = SerreQuotient(named_datum("A2"), store=BrokenStore())
        assert len(quotient.ideal_basis((2, 1))) == 1
        assert quotient.store is None


class TestEchelonize:
    """Test fraction-free elimination."""

    def test_dependent_rows_collapse(self):
        """Test proportional rows give a single normalized row."""
        rows = [{(1, 2): ONE, (2, 1): q}, {(1, 2): RatFunc(2), (2, 1): 2 * q}]
        assert echelonize(rows) == {(2, 1): {(2, 1): ONE, (1, 2): q ** -1}}

    def test_rational_entries(self):
        """Test rows with rational-function entries are cleared and restored."""
        rows = [{(1, 2): qint(2).inverse(), (2, 1): ONE}, {(1, 2): ONE}]
        assert echelonize(rows) == {(2, 1): {(2, 1): ONE}, (1, 2): {(1, 2): ONE}}


class TestReduce:
    """Test reduction modulo the ideal."""

    def test_serre_element_reduces_to_zero(self, a2_quotient):
        """Test scaled Serre elements lie in the ideal."""
        element = a2_quotient.serre_element(2, 1).scale(q ** 3 + 1)
        assert a2_quotient.reduce(element).is_zero()

    def test_no_relation_weight_unchanged(self, a2_quotient):
        """Test E1E2 at weight (1,1) is already reduced."""
        v = GradedVector.word((1, 2), 2)
        assert a2_quotient.reduce(v) == v

    def test_pivot_word(self, a2_quotient):
        """Test E2E1E1 = [2] E1E2E1 - E1E1E2."""
        assert a2_quotient.reduce_word((2, 1, 1)) == (((1, 1, 2), -ONE), ((1, 2, 1), qint(2)))
        assert a2_quotient.reduce_word((1, 1, 2)) == (((1, 1, 2), ONE),)

    def test_serre_off_is_identity(self):
        """Test reduce does nothing without Serre relations."""
        quotient = SerreQuotient(named_datum("A2"), serre_mode=False)
        element = quotient.serre_element(1, 2)
        assert quotient.reduce(element) == element

    @settings(max_examples=30, deadline=None)
    @given(
        st.sampled_from([(2, 1), (1, 2), (2, 2), (3, 1), (3, 2)]),
        st.lists(st.integers(-3, 3), min_size=10, max_size=10),
        st.lists(st.integers(-3, 3), min_size=10, max_size=10),
        st.integers(-2, 2),
    )
    def test_linear_and_idempotent(self, a2_quotient, weight, xs, ys, shift):
        """Test reduce is linear and reduce(reduce(v)) = reduce(v)."""
        words = a2_quotient.enumerate_words(weight)
        v = GradedVector.build(weight, {w: RatFunc(c) for w, c in zip(words, xs)})
        w = GradedVector.build(weight, {w: RatFunc(c) for w, c in zip(words, ys)})
        a, b = q ** shift, q + 1
        reduced = a2_quotient.reduce(v)
        assert a2_quotient.reduce(reduced) == reduced
        assert a2_quotient.reduce(v.scale(a) + w.scale(b)) == (
            a2_quotient.reduce(v).scale(a) + a2_quotient.reduce(w).scale(b)
        )
