import time

import numpy as np
import pytest

from braceforge.algebra.axioms import (
    verify_brace_axioms,
    verify_exponent,
    verify_fp_linearity,
    verify_lambda_homomorphism,
)
from braceforge.algebra.brace import BraceTable
from braceforge.algebra.family_xv import build_brace
from braceforge.algebra.runner import CheckMode, TimeBudget, exhaustive, sampled
from braceforge.errors import BudgetExceeded, InvalidParams
from braceforge.models.params import FamilyParams

AXIOMS = [
    "additive_group",
    "identity",
    "inverses",
    "associativity",
    "compatibility",
    "star_of_circle",
    "star_right_additive",
]


class TestCheckMode:
    def test_sampled_needs_samples(self):
        with pytest.raises(InvalidParams):
            CheckMode.sampled(0, 1)

    def test_auto_switches_on_order(self):
        assert CheckMode.auto(625).is_full
        mode = CheckMode.auto(2401, samples=10, seed=3)
        assert (mode.kind, mode.samples, mode.seed) == ("sampled", 10, 3)


class TestRunner:
    def test_exhaustive_reports_lowest_failure(self):
        outcome = exhaustive(lambda a, b: (a + b) % 7 != 5, 6, 2)
        assert outcome.witness == (0, 5)

    def test_threads_do_not_change_the_witness(self):
        law = lambda a, b, c: (a * b + c) % 11 != 3  # noqa: E731
        single = exhaustive(law, 20, 3)
        pooled = exhaustive(law, 20, 3, threads=4)
        assert single.witness == pooled.witness

    def test_sampled_is_reproducible(self):
        law = lambda a, b: (a ^ b) != 13  # noqa: E731
        first = sampled(law, 64, 2, 5000, seed=42)
        second = sampled(law, 64, 2, 5000, seed=42)
        assert first == second
        assert first.witness is not None

    def test_budget_breach_carries_partial_count(self):
        budget = TimeBudget(1e-6)
        time.sleep(0.01)
        with pytest.raises(BudgetExceeded) as info:
            exhaustive(lambda a, b: a == a, 10, 2, budget=budget)
        assert info.value.partial == 0
        assert info.value.exit_code == 4


class TestBraceAxioms:
    @pytest.mark.parametrize("fixture", ["trivial9", "ring9"])
    def test_small_braces_pass_in_full(self, request, fixture):
        A = request.getfixturevalue(fixture)
        report = verify_brace_axioms(A)
        assert [c.name for c in report.checks] == AXIOMS
        assert report.passed
        assert report.check("associativity").checked == A.order**3

    def test_family_passes_sampled(self, family5_skew):
        report = verify_brace_axioms(family5_skew, CheckMode.sampled(20_000, 7))
        assert report.passed
        assert report.seed == 7 and report.samples == 20_000

    @pytest.mark.slow
    def test_family_passes_in_full(self, family5):
        report = verify_brace_axioms(family5, CheckMode.full(), threads=4)
        assert report.passed

    def test_tampered_lambda_breaks_associativity(self, tampered9):
        report = verify_brace_axioms(tampered9)
        assert not report.passed
        # 1 o 1 = 5 with lambda_5 = Id, but 1 o 5 = 0 and 5 o 1 = 3
        assert report.check("associativity").witness == [1, 1, 1]
        assert report.check("inverses").witness == [1]
        assert report.check("compatibility").passed
        assert report.check("star_right_additive").passed

    def test_witness_does_not_depend_on_threads(self, tampered9):
        one = verify_brace_axioms(tampered9, threads=1).check("associativity")
        many = verify_brace_axioms(tampered9, threads=3).check("associativity")
        assert one.witness == many.witness

    def test_singular_lambda_has_no_circle_inverse(self):
        mats = np.tile(np.eye(2, dtype=np.int64), (9, 1, 1))
        mats[1] = [[1, 0], [0, 0]]
        report = verify_brace_axioms(BraceTable(3, 2, mats))
        assert report.check("inverses").witness == [1]

    def test_budget_breach_keeps_finished_checks(self, family5):
        budget = TimeBudget(1e-6)
        time.sleep(0.01)
        with pytest.raises(BudgetExceeded) as info:
            verify_brace_axioms(family5, CheckMode.full(), budget=budget)
        partial = info.value.partial
        assert [c.name for c in partial.checks] == AXIOMS[:3]
        assert partial.passed

    @pytest.mark.slow
    def test_order_7_to_the_4_passes_in_full_within_two_minutes(self):
        A = build_brace(FamilyParams.create(7, 3, 2, 5))
        started = time.monotonic()
        report = verify_brace_axioms(A, CheckMode.full(), threads=4)
        assert report.passed
        assert report.check("associativity").checked == 2401**3
        assert time.monotonic() - started < 120

    def test_affine_certification_matches_every_triple(self, ring9, tampered9):
        for A in (ring9, tampered9):
            spanning = [0, *A.basis_indices]

            def law(a, b, c):
                return A.circle_array(A.circle_array(a, b), c) == A.circle_array(a, A.circle_array(b, c))

            assert exhaustive(law, A.order, 3, last=spanning) == exhaustive(law, A.order, 3)


class _BentLambda(BraceTable):
    """lambda_a for a != 0 is followed by swapping the basis elements 1 and 3, which breaks linearity."""

    def lambda_array(self, a, b):
        images = super().lambda_array(a, b)
        a = np.broadcast_to(a, np.shape(images))
        swapped = np.where(images == 1, 3, np.where(images == 3, 1, images))
        return np.where(a == 0, images, swapped)


class TestLinearityAndHomomorphism:
    def test_family_is_fp_linear(self, family5):
        report = verify_fp_linearity(family5)
        assert report.passed
        assert report.checks[0].checked == 625 * 4 * 5

    def test_nonlinear_lambda_fails_linearity(self, trivial9):
        bent = _BentLambda(3, 2, trivial9.lambda_matrices)
        report = verify_fp_linearity(bent)
        assert not report.passed
        # 1 * 3 = 1 - 3 = 7, yet 1 * 6 = 0 != 2 * 7
        assert report.checks[0].witness == [1, 3, 2]

    def test_family_lambda_is_homomorphism(self, family5):
        assert verify_lambda_homomorphism(family5).passed

    def test_tampered_lambda_is_not_homomorphism(self, tampered9):
        report = verify_lambda_homomorphism(tampered9)
        assert not report.passed
        assert report.checks[0].witness == [1, 1]

    @pytest.mark.parametrize("fixture", ["family5", "trivial9", "ring9"])
    def test_circle_exponent_is_p(self, request, fixture):
        assert verify_exponent(request.getfixturevalue(fixture)).passed
