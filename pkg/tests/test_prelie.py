import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braceforge.algebra.prelie import PreLieAlgebra, plproduct, prelie_nilpotency, verify_prelie_identity
from braceforge.errors import DimensionMismatch, InvalidParams

residues = st.integers(0, 4)


@given(residues, residues, st.integers(1, 4))
def test_identity_holds_for_every_parameter_choice(j, k, y):
    report = verify_prelie_identity(PreLieAlgebra.example(5, y, j, k))
    assert report.passed
    assert report.check("prelie_identity").checked == 64


def test_products_of_basis_vectors():
    V = PreLieAlgebra.example(7, 2, 3, 4)
    R, S, Q = V.vector({"R": 1}), V.vector({"S": 1}), V.vector({"Q": 1})
    assert plproduct(V, R, R).tolist() == V.vector({"P": 3, "S": 4}).tolist()
    assert plproduct(V, S, R).tolist() == V.vector({"Q": -1}).tolist()
    assert not plproduct(V, R, S).any()
    assert plproduct(V, Q, Q).tolist() == V.vector({"S": -2}).tolist()


def test_left_but_not_right_nilpotent():
    result = prelie_nilpotency(PreLieAlgebra.example(5, 3, 1, 2))
    assert result.left and not result.right
    assert result.left_dims == [4, 3, 2, 1, 0]
    assert result.right_dims == [4, 3, 3]


def test_zero_algebra():
    result = prelie_nilpotency(PreLieAlgebra.zero(5))
    assert result.left_dims == result.right_dims == [4, 0]
    assert verify_prelie_identity(PreLieAlgebra.zero(3, 2)).passed


def test_detects_a_non_pre_lie_product():
    consts = np.zeros((2, 2, 2), dtype=np.int64)
    consts[0, 0] = [0, 1]  # e1 e1 = e2
    consts[1, 0] = [1, 0]  # e2 e1 = e1
    report = verify_prelie_identity(PreLieAlgebra(5, consts, basis_names=("a", "b")))
    assert not report.passed
    assert len(report.check("prelie_identity").witness) == 3


def test_invalid_inputs():
    with pytest.raises(InvalidParams):
        PreLieAlgebra.example(5, 0)
    with pytest.raises(InvalidParams):
        PreLieAlgebra.example(6, 1)
    with pytest.raises(DimensionMismatch):
        PreLieAlgebra(5, np.zeros((2, 2, 3)))
