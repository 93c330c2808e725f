import hashlib

import numpy as np
import pytest

from braceforge.algebra.axioms import verify_brace_axioms
from braceforge.algebra.fp_linalg import FpMatrix, rank
from braceforge.algebra.hol import (
    HolElement,
    conjugate_brace,
    embed,
    is_brace_automorphism,
    is_regular,
    iter_conjugate_braces,
    random_invertible,
)
from braceforge.algebra.runner import CheckMode
from braceforge.errors import ClosureFailure, NotASubgroup, Singular


class TestHolElement:
    def test_composition_applies_right_factor_first(self):
        g = HolElement([1, 0], FpMatrix([[0, 1], [1, 0]], 3))
        h = HolElement([0, 2], FpMatrix([[1, 1], [0, 1]], 3))
        point = np.array([2, 1])
        assert (g @ h).apply(point).tolist() == g.apply(h.apply(point)).tolist()

    def test_inverse(self):
        g = HolElement([2, 1], FpMatrix([[1, 2], [0, 1]], 3))
        identity = HolElement([0, 0], FpMatrix.identity(2, 3))
        assert g @ g.inverse() == identity
        assert g.inverse() @ g == identity
        assert len({g, g @ identity}) == 1


class TestEmbedding:
    def test_family_embeds_as_regular_subgroup(self, family5):
        image = embed(family5)
        assert len(image) == 625
        assert is_regular(image, 5, 4)

    def test_tampered_table_is_not_closed(self, tampered9):
        with pytest.raises(ClosureFailure):
            embed(tampered9)

    def test_translations_are_regular(self):
        ident = FpMatrix.identity(2, 3)
        translations = [HolElement([a, b], ident) for a in range(3) for b in range(3)]
        assert is_regular(translations, 3, 2)

    def test_identity_alone_is_not_regular(self):
        assert not is_regular([HolElement([0, 0], FpMatrix.identity(2, 3))], 3, 2)

    def test_non_subgroup(self):
        ident = FpMatrix.identity(2, 3)
        with pytest.raises(NotASubgroup):
            is_regular([HolElement([0, 0], ident), HolElement([1, 0], ident)], 3, 2)
        with pytest.raises(NotASubgroup):
            is_regular([], 3, 2)


class TestConjugation:
    def test_identity_gamma(self, family5):
        assert conjugate_brace(family5, FpMatrix.identity(4, 5)).same_table(family5)
        assert is_brace_automorphism(family5, FpMatrix.identity(4, 5))

    def test_conjugates_are_braces(self, family5):
        rng = np.random.default_rng(25)
        for _ in range(5):
            gamma = random_invertible(5, 4, rng)
            conjugated = conjugate_brace(family5, gamma)
            assert verify_brace_axioms(conjugated, CheckMode.sampled(5000, 1)).passed
            # gamma(a o_gamma b) = gamma(a) o gamma(b)
            a, b = 17, 402
            lhs = gamma.apply(conjugated.vector(conjugated.circle(a, b)))
            rhs = family5.circle(gamma.apply(family5.vector(a)), gamma.apply(family5.vector(b)))
            assert family5.index(lhs) == rhs

    def test_gamma_moving_the_chain_is_not_an_automorphism(self, family5):
        # swaps R and S: S lies in A^4, R is outside A^2
        swap = np.eye(4, dtype=np.int64)[[3, 1, 2, 0]]
        assert not is_brace_automorphism(family5, FpMatrix(swap, 5))

    def test_automorphism_test_agrees_with_conjugated_table(self, family5_skew):
        rng = np.random.default_rng(20240611)
        gammas = [FpMatrix.identity(4, 5)] + [random_invertible(5, 4, rng) for _ in range(99)]
        verdicts = [is_brace_automorphism(family5_skew, g) for g in gammas]
        assert verdicts == [conjugate_brace(family5_skew, g).same_table(family5_skew) for g in gammas]
        assert verdicts[0]

    def test_conjugation_composes(self, family5):
        rng = np.random.default_rng(7)
        for _ in range(5):
            g1, g2 = random_invertible(5, 4, rng), random_invertible(5, 4, rng)
            once = conjugate_brace(family5, g1 @ g2)
            twice = conjugate_brace(conjugate_brace(family5, g1), g2)
            assert once == twice

    def test_singular_gamma(self, family5):
        with pytest.raises(Singular):
            conjugate_brace(family5, FpMatrix.zeros(4, 4, 5))

    def test_random_invertible(self):
        rng = np.random.default_rng(0)
        assert all(rank(random_invertible(5, 4, rng)) == 4 for _ in range(10))

    def test_walk_yields_distinct_braces(self, ring9):
        found = list(iter_conjugate_braces(ring9, 48))
        assert 1 <= len(found) <= 48
        digests = {hashlib.sha256(brace.lambda_matrices.tobytes()).hexdigest() for _, brace in found}
        assert len(digests) == len(found)
        for gamma, brace in found:
            assert rank(gamma) == 2
            assert verify_brace_axioms(brace).passed
