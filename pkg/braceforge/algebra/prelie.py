"""A four-dimensional pre-Lie algebra over F_p that is left but not right nilpotent.

Coordinates are taken in the basis order P, Q, R, S. The nonzero products of
basis vectors are

    RR = jP + kS,  QQ = -yS,  RP = yS,  SQ = -P,  PR = yS,  SR = -Q

and all other basis products vanish. The letter j is kept apart from the
parameter i of the family braces; no correspondence between the two is assumed.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from braceforge.algebra.chains import Subspace
from braceforge.algebra.fp_linalg import check_prime
from braceforge.errors import DimensionMismatch, InvalidParams
from braceforge.models.reports import CheckResult, PreLieNilpotency, VerificationReport

PRELIE_BASIS = ("P", "Q", "R", "S")


class PreLieAlgebra:
    """Bilinear product on F_p^n given by structure constants ``constants[a, b] = e_a e_b``."""

    def __init__(self, p: int, constants: np.ndarray, basis_names: Sequence[str] = PRELIE_BASIS):
        self.p = check_prime(p)
        consts = np.array(constants, dtype=np.int64) % self.p
        n = consts.shape[0]
        if consts.shape != (n, n, n) or len(basis_names) != n:
            raise DimensionMismatch(f"structure constants must have shape (n, n, n), got {consts.shape}")
        consts.setflags(write=False)
        self.constants = consts
        self.n = n
        self.basis_names = tuple(basis_names)

    @classmethod
    def example(cls, p: int, y: int, j: int = 0, k: int = 0) -> PreLieAlgebra:
        p = check_prime(p)
        if y % p == 0:
            raise InvalidParams(f"y must be nonzero mod {p}")
        P, Q, R, S = range(4)
        consts = np.zeros((4, 4, 4), dtype=np.int64)
        consts[R, R, P], consts[R, R, S] = j, k
        consts[Q, Q, S] = -y
        consts[R, P, S] = y
        consts[S, Q, P] = -1
        consts[P, R, S] = y
        consts[S, R, Q] = -1
        return cls(p, consts)

    @classmethod
    def zero(cls, p: int, n: int = 4) -> PreLieAlgebra:
        names = PRELIE_BASIS if n == 4 else tuple(f"e{i + 1}" for i in range(n))
        return cls(p, np.zeros((n, n, n), dtype=np.int64), names)

    def vector(self, coefficients: dict[str, int]) -> np.ndarray:
        """Coordinates of a combination of named basis vectors."""
        vec = np.zeros(self.n, dtype=np.int64)
        for name, coeff in coefficients.items():
            vec[self.basis_names.index(name)] += coeff
        return vec % self.p


def plproduct(V: PreLieAlgebra, a, b) -> np.ndarray:
    """Bilinear extension of the basis products; works on stacks of vectors too."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return np.einsum("...i,...j,ijk->...k", a, b, V.constants) % V.p


def verify_prelie_identity(V: PreLieAlgebra) -> VerificationReport:
    """(ab)c - a(bc) = (ba)c - b(ac) on every ordered triple of basis vectors."""
    C = V.constants
    left_assoc = np.einsum("abi,icx->abcx", C, C)  # (e_a e_b) e_c
    right_assoc = np.einsum("bci,aix->abcx", C, C)  # e_a (e_b e_c)
    associator = (left_assoc - right_assoc) % V.p
    ok = (associator == associator.transpose(1, 0, 2, 3)).all(axis=-1)
    witness = None
    if not ok.all():
        witness = list(np.unravel_index(int(np.argmin(ok.ravel())), ok.shape))
    check = CheckResult.from_outcome(
        "prelie_identity", witness is None, int(ok.size), witness, "witness is a triple of basis positions"
    )
    return VerificationReport(subject=f"pre-Lie algebra p={V.p}", mode="full", checks=[check])


def _span_of_products(V: PreLieAlgebra, left: Subspace, right: Subspace) -> Subspace:
    if left.is_zero or right.is_zero:
        return Subspace.zero(V.p, V.n)
    products = plproduct(V, left.basis[:, None, :], right.basis[None, :, :])
    return Subspace(products.reshape(-1, V.n), V.p, V.n)


def _chain(V: PreLieAlgebra, step) -> list[int]:
    terms = [Subspace.full(V.p, V.n)]
    while True:
        nxt = step(terms[-1])
        terms.append(nxt)
        if nxt.is_zero or nxt == terms[-2]:
            return [t.dim for t in terms]


def prelie_nilpotency(V: PreLieAlgebra) -> PreLieNilpotency:
    """V^{i+1} = V V^i and V^(i+1) = V^(i) V, using bases on both sides."""
    whole = Subspace.full(V.p, V.n)
    left_dims = _chain(V, lambda term: _span_of_products(V, whole, term))
    right_dims = _chain(V, lambda term: _span_of_products(V, term, whole))
    return PreLieNilpotency(
        left=left_dims[-1] == 0,
        right=right_dims[-1] == 0,
        left_dims=left_dims,
        right_dims=right_dims,
    )
