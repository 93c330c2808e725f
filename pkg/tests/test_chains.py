import numpy as np
import pytest

from braceforge.algebra.chains import (
    Subspace,
    classify_nilpotency,
    full_space,
    left_chain,
    right_chain,
    star_span,
    strong_chain,
)
from braceforge.errors import DimensionMismatch


class TestSubspace:
    def test_canonical_basis(self):
        V = Subspace([[2, 4, 0], [1, 2, 1], [3, 6, 1]], 5, 3)
        assert V.dim == 2
        assert V.tolist() == [[1, 2, 0], [0, 0, 1]]
        assert V == Subspace([[1, 2, 1], [0, 0, 3]], 5, 3)

    def test_elements_and_membership(self):
        V = Subspace([[0, 1]], 3, 2)
        assert V.elements.tolist() == [0, 1, 2]
        assert V.contains([0, 2])
        assert not V.contains(3)

    def test_sum_and_inclusion(self):
        X = Subspace([[1, 0, 0]], 5, 3)
        Y = Subspace([[0, 1, 0]], 5, 3)
        assert (X + Y).dim == 2
        assert X <= X + Y
        assert not (X + Y) <= X
        assert Subspace.zero(5, 3) <= X

    def test_ambient_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Subspace.full(5, 3) + Subspace.full(5, 2)

    def test_hashable(self):
        assert len({Subspace([[1, 1]], 3, 2), Subspace([[2, 2]], 3, 2)}) == 1


class TestFamilyChains:
    def test_left_chain_reaches_zero_in_five_steps(self, family5):
        report = left_chain(family5)
        assert report.dims == [4, 3, 2, 1, 0]
        assert report.reaches_zero
        assert not report.stabilized_nonzero

    def test_right_chain_stabilizes_at_three(self, family5_skew):
        report = right_chain(family5_skew)
        assert report.dims == [4, 3, 3]
        assert report.stabilized_nonzero

    def test_strong_chain_stabilizes_nonzero(self, family5):
        report = strong_chain(family5)
        assert report.dims[-1] == report.dims[-2] == 3

    def test_nilpotency_flags(self, family5):
        flags = classify_nilpotency(family5)
        assert (flags.left, flags.right, flags.strong) == (True, False, False)

    def test_chain_terms_descend(self, family5):
        terms = left_chain(family5).terms
        for bigger, smaller in zip(terms, terms[1:]):
            assert smaller <= bigger

    def test_square_of_the_brace(self, family5):
        # A^2 = A * A is spanned by Q, P and S
        A2 = star_span(family5, None, full_space(family5))
        expected = Subspace.spanned_by(family5, [family5.index(g) for g in ("Q", "P", "S")])
        assert A2 == expected


class TestSmallChains:
    def test_trivial_brace(self, trivial5):
        assert left_chain(trivial5).dims == [4, 0]
        assert right_chain(trivial5).dims == [4, 0]
        assert strong_chain(trivial5).dims == [4, 0]

    def test_ring_brace(self, ring9):
        assert left_chain(ring9).dims == [2, 1, 0]
        flags = classify_nilpotency(ring9)
        assert flags.left and flags.right and flags.strong

    def test_star_span_of_zero_sides(self, ring9):
        zero = Subspace.zero(3, 2)
        assert star_span(ring9, zero, full_space(ring9)).is_zero
        assert star_span(ring9, None, zero).is_zero

    def test_left_factors_are_enumerated(self, family5):
        # brute force over every pair of (F_p S) x A
        line = Subspace.spanned_by(family5, [family5.index("S")])
        products = family5.star_array(line.elements[:, None], np.arange(family5.order)[None, :])
        brute = Subspace.spanned_by(family5, products.ravel())
        assert star_span(family5, line, full_space(family5)) == brute
