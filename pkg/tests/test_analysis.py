import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braceforge.algebra.analysis import (
    brace_isomorphic,
    commutator,
    commutator_star_check,
    commutator_star_rhs,
    invariant_fingerprint,
    is_isomorphism,
    verify_commutator_identity,
)
from braceforge.algebra.brace import BraceTable
from braceforge.algebra.family_xv import build_brace
from braceforge.algebra.fp_linalg import FpMatrix
from braceforge.algebra.hol import conjugate_brace, random_invertible
from braceforge.algebra.runner import CheckMode
from braceforge.errors import PreconditionViolated, TooLarge
from braceforge.models.params import FamilyParams
from braceforge.models.reports import GroupId

elements = st.integers(0, 624)


class TestCommutator:
    @given(elements, elements, elements)
    def test_star_identity_on_family(self, family5_skew, a, b, c):
        assert commutator_star_check(family5_skew, a, b, c)

    @pytest.mark.parametrize("y, i, k", [(1, 0, 0), (2, 3, 1), (3, 1, 4), (4, 4, 2), (1, 2, 0)])
    def test_star_identity_on_ten_thousand_triples(self, y, i, k):
        A = build_brace(FamilyParams.create(5, y, i, k))
        report = verify_commutator_identity(A, CheckMode.sampled(10_000, 1000 * y + 10 * i + k))
        assert report.passed
        assert report.check("commutator_identity").checked == 10_000

    def test_star_identity_in_full_on_small_brace(self, ring9):
        report = verify_commutator_identity(ring9)
        assert report.passed
        assert report.checks[0].checked == 9**3

    def test_worked_example_r_s_r(self, family5):
        # R o S = S o R o Q, so [R, S] = Q and Q * R = (y/2) S = 3S at p = 5, y = 1
        A = family5
        assert commutator(A, "R", "S") == A.index("Q")
        three_s = A.index([0, 0, 0, 3])
        assert A.star(commutator(A, "R", "S"), "R") == three_s
        assert commutator_star_rhs(A, "R", "S", "R") == three_s
        assert commutator_star_check(A, "R", "S", "R")

    def test_commutator_of_central_element_is_trivial(self, family5):
        P = family5.index("P")
        assert all(commutator(family5, P, b) == 0 for b in range(0, 625, 13))

    def test_requires_nilpotency_bound(self):
        n = 5
        products = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n - 1 - i):
                products[i, j, i + j + 1] = 1
        A = BraceTable.from_ring(3, n, products)
        with pytest.raises(PreconditionViolated):
            commutator_star_check(A, 1, 2, 3)


class TestIsomorphism:
    def test_self_isomorphism_is_identity(self, family5):
        witness = brace_isomorphic(family5, family5)
        assert witness is not None
        assert witness.matrix == np.eye(4, dtype=int).tolist()
        assert witness.images["R"] == [1, 0, 0, 0]

    def test_trivial_and_family_are_not_isomorphic(self, family5, trivial5):
        assert brace_isomorphic(family5, trivial5) is None
        assert brace_isomorphic(trivial5, family5) is None

    def test_different_dimensions(self, trivial9, trivial5):
        assert brace_isomorphic(trivial9, trivial5) is None

    def test_conjugated_small_brace(self, ring9):
        gamma = FpMatrix([[1, 1], [0, 2]], 3)
        conjugated = conjugate_brace(ring9, gamma)
        witness = brace_isomorphic(conjugated, ring9)
        assert witness is not None
        assert is_isomorphism(conjugated, ring9, FpMatrix(witness.matrix, 3))
        assert brace_isomorphic(ring9, BraceTable.trivial(3, 2)) is None

    @pytest.mark.slow
    def test_conjugated_brace_is_isomorphic(self, family5):
        gamma = random_invertible(5, 4, np.random.default_rng(11))
        conjugated = conjugate_brace(family5, gamma)
        assert is_isomorphism(conjugated, family5, gamma)
        witness = brace_isomorphic(conjugated, family5)
        assert witness is not None
        assert is_isomorphism(conjugated, family5, FpMatrix(witness.matrix, 5))

    @pytest.mark.slow
    def test_members_with_other_parameters(self, family5):
        other = build_brace(FamilyParams.create(5, 3, 2, 4))
        witness = brace_isomorphic(other, family5)
        if witness is not None:
            assert is_isomorphism(other, family5, FpMatrix(witness.matrix, 5))

    def test_conjugates_by_seeded_gammas_are_recognised(self, family5_skew):
        rng = np.random.default_rng(4096)
        for _ in range(25):
            gamma = random_invertible(5, 4, rng)
            conjugated = conjugate_brace(family5_skew, gamma)
            assert is_isomorphism(conjugated, family5_skew, gamma)
            witness = brace_isomorphic(conjugated, family5_skew)
            assert witness is not None
            assert is_isomorphism(conjugated, family5_skew, FpMatrix(witness.matrix, 5))

    def test_node_limit(self, family5):
        gamma = random_invertible(5, 4, np.random.default_rng(2))
        conjugated = conjugate_brace(family5, gamma)
        with pytest.raises(TooLarge):
            brace_isomorphic(conjugated, family5, node_limit=1)

    def test_singular_matrix_is_not_isomorphism(self, family5):
        assert not is_isomorphism(family5, family5, FpMatrix.zeros(4, 4, 5))


class TestFingerprint:
    def test_family_fingerprint(self, family5, family5_skew):
        fingerprint = invariant_fingerprint(family5)
        assert fingerprint.left_dims == [4, 3, 2, 1, 0]
        assert fingerprint.right_dims == [4, 3, 3]
        assert fingerprint.group is GroupId.XV
        assert fingerprint.prime is True
        assert fingerprint.center_size == 5
        assert fingerprint.ideal_dims == [0, 3, 4]
        assert invariant_fingerprint(family5_skew) == fingerprint

    def test_trivial_fingerprint(self, trivial5):
        fingerprint = invariant_fingerprint(trivial5, with_ideals=False)
        assert fingerprint.left_dims == fingerprint.right_dims == fingerprint.strong_dims == [4, 0]
        assert fingerprint.group is GroupId.ABELIAN
        assert fingerprint.prime is None
