import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braceforge.algebra.brace import FAMILY_BASIS
from braceforge.algebra.family_xv import (
    brace_from_generators,
    build_brace,
    cocycle_f,
    enumerate_group,
    family_parameters,
    generator_matrices,
    multiplicative_table,
    normal_form,
    sample_parameters,
    verify_cocycle,
    verify_filtration_properties,
    verify_generator_relations,
    verify_multiplicative_table,
    verify_presentation_constraints,
    witness_not_right_nilpotent,
)
from braceforge.algebra.fp_linalg import FpMatrix
from braceforge.algebra.runner import CheckMode
from braceforge.errors import InvalidParams, PreconditionViolated, RelationFailure
from braceforge.models.params import FamilyParams, NormalForm

P5_TRIPLES = list(family_parameters(5))


def mutation_detected(mats, params) -> bool:
    if not verify_generator_relations(mats).passed:
        return True
    if not verify_cocycle(mats, CheckMode.sampled(2000, 1)).passed:
        return True
    try:
        A = brace_from_generators(mats)
    except RelationFailure:
        return True
    return not verify_multiplicative_table(A, params).passed


class TestParams:
    def test_reduces_mod_p(self):
        params = FamilyParams.create(5, 6, -1, 12)
        assert (params.y, params.i, params.k) == (1, 4, 2)

    @pytest.mark.parametrize("p", [2, 3, 4, 9])
    def test_rejects_small_or_composite_p(self, p):
        with pytest.raises(InvalidParams, match="p must be prime"):
            FamilyParams.create(p, 1)

    def test_rejects_zero_y(self):
        with pytest.raises(InvalidParams, match="y must be nonzero"):
            FamilyParams.create(7, 14)

    def test_parameter_space(self):
        assert len(P5_TRIPLES) == 100
        assert len(set(P5_TRIPLES)) == 100
        assert len(list(family_parameters(7))) == 294

    def test_sampling_is_seeded_and_distinct(self):
        first = sample_parameters(11, 20, seed=5)
        assert first == sample_parameters(11, 20, seed=5)
        assert len(set(first)) == 20
        assert all(params.y != 0 for params in first)


class TestGeneratorMatrices:
    @pytest.mark.parametrize("params", P5_TRIPLES, ids=lambda params: params.label())
    def test_relations_hold_for_every_triple(self, params):
        report = verify_generator_relations(generator_matrices(params))
        assert report.passed
        assert len(report.checks) == 10

    def test_relations_at_p7(self):
        for params in family_parameters(7):
            assert verify_generator_relations(generator_matrices(params)).passed

    def test_single_entry_mutations_are_caught(self, params5):
        mats = generator_matrices(params5)
        rng = np.random.default_rng(20240917)
        for _ in range(10):
            name = str(rng.choice(["P", "Q", "R", "S"]))
            entries = np.array(getattr(mats, name).entries)
            r, c = int(rng.integers(1, 5)), int(rng.integers(0, 5))
            entries[r, c] = (entries[r, c] + int(rng.integers(1, 5))) % 5
            mutated = mats.with_matrix(name, FpMatrix(entries, 5))
            assert mutation_detected(mutated, params5), (name, r, c)


class TestCocycle:
    def test_bijective_and_cocycle_in_full(self, params5):
        report = verify_cocycle(generator_matrices(params5))
        assert report.passed
        assert report.check("cocycle").checked == 625**2

    @pytest.mark.parametrize("params", P5_TRIPLES[::9], ids=lambda params: params.label())
    def test_other_triples_sampled(self, params):
        assert verify_cocycle(generator_matrices(params), CheckMode.sampled(5000, 3)).passed

    def test_f_of_generators(self, params5):
        mats = generator_matrices(params5)
        assert cocycle_f(mats, NormalForm(alpha=1, beta=0, gamma=0, xi=0)) == (1, 0, 0, 0)
        assert cocycle_f(mats, NormalForm(alpha=0, beta=0, gamma=0, xi=1)) == (0, 0, 0, 1)

    def test_group_has_p4_distinct_matrices(self, params5):
        group = enumerate_group(generator_matrices(params5))
        assert len(group) == 625
        assert len(set(group.values())) == 625


class TestFamilyBrace:
    def test_build_is_cached(self, params5, family5):
        assert build_brace(params5) is family5
        assert family5.meta == params5

    @pytest.mark.parametrize("params", P5_TRIPLES[::7] + [FamilyParams.create(7, 3, 5, 6)])
    def test_multiplicative_table(self, params):
        report = verify_multiplicative_table(build_brace(params), params)
        assert report.passed
        assert len(report.checks) == 16

    def test_multiplicative_table_values(self):
        table = multiplicative_table(FamilyParams.create(7, 2, 3, 4))
        assert table[("R", "R")] == (0, 0, 3, 4)
        assert table[("Q", "Q")] == (0, 0, 0, 5)
        assert table[("S", "R")] == (0, 6, 1, 6)  # -Q + P - (y/2) S with y/2 = 1
        assert table[("S", "S")] == (0, 0, 0, 0)

    def test_mismatched_parameters_are_reported(self, family5):
        report = verify_multiplicative_table(family5, FamilyParams.create(5, 2))
        assert not report.passed
        assert not report.check("Q*Q").passed

    def test_non_right_nilpotency_witness(self):
        for params in P5_TRIPLES[::11]:
            assert witness_not_right_nilpotent(build_brace(params), params)

    def test_presentation_and_filtration(self, family5_skew):
        assert verify_presentation_constraints(family5_skew).passed
        filtration = verify_filtration_properties(family5_skew)
        assert filtration.passed, [c.name for c in filtration.failures]

    def test_structural_checks_need_family_basis(self, trivial9):
        with pytest.raises(PreconditionViolated):
            verify_presentation_constraints(trivial9)


class TestNormalForm:
    @settings(max_examples=200)
    @given(st.integers(0, 624))
    def test_every_element_has_a_normal_form(self, family5_skew, a):
        nf = normal_form(family5_skew, a)
        rebuilt = family5_skew.circle_product(
            *(family5_skew.circle_pow(g, e) for g, e in zip(("R", "Q", "P", "S"), nf.as_tuple()))
        )
        assert rebuilt == a

    def test_normal_forms_are_unique(self, family5):
        forms = {normal_form(family5, a) for a in range(family5.order)}
        assert len(forms) == 625

    def test_generators(self, family5):
        for position, g in enumerate(FAMILY_BASIS):
            exponents = [0, 0, 0, 0]
            exponents[position] = 1
            assert normal_form(family5, g).as_tuple() == tuple(exponents)
