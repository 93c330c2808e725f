"""Finite F_p-braces represented by their lambda matrices.

A :class:`BraceTable` has additive group F_p^n (coordinate addition) and
stores, for every element ``a``, the matrix of the additive automorphism
``lambda_a``. Everything else is derived from it:

    a o b = a + lambda_a(b)        a * b = lambda_a(b) - b

Element ``(c_1, ..., c_n)`` has index ``sum c_j p^(n-j)``: base-p digits with
the first basis vector most significant, so for the family braces the
coordinates read in the normal-form order R, Q, P, S.

The stored primitive is the ``(p^n, n, n)`` matrix stack. Products are batched
matrix-vector products over whatever index arrays the caller passes; small
braces additionally keep a dense lambda table so that exhaustive checks
become table lookups.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import cached_property
from typing import TYPE_CHECKING, Union

import numpy as np

from braceforge.algebra.fp_linalg import (
    FpMatrix,
    batch_inverse,
    check_prime,
    indices_to_vectors,
    vectors_to_indices,
)
from braceforge.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    PreconditionViolated,
    RelationFailure,
)

if TYPE_CHECKING:
    from braceforge.models.params import FamilyParams

Element = Union[int, np.integer, Sequence[int], np.ndarray, str]

FAMILY_BASIS = ("R", "Q", "P", "S")

# dense lambda tables are kept only up to this many entries (32 MiB of int32)
DENSE_MAX_ENTRIES = 1 << 23

# rows of lambda images computed per block when filling a dense table
_BLOCK = 256


class BraceTable:
    """A finite F_p-brace: F_p^n plus one additive automorphism per element."""

    def __init__(
        self,
        p: int,
        n: int,
        matrices: np.ndarray,
        basis_names: Sequence[str] | None = None,
        meta: FamilyParams | None = None,
    ):
        """Build from one n x n matrix per element index (columns are images of the basis)."""
        self.p = check_prime(p)
        self.n = int(n)
        self.order = self.p**self.n
        mats = np.asarray(matrices, dtype=np.int64)
        if mats.shape != (self.order, self.n, self.n):
            raise DimensionMismatch(
                f"expected {self.order} matrices of shape {(self.n, self.n)}, got {mats.shape}"
            )
        mats = mats % self.p
        mats.setflags(write=False)
        self._mats = mats
        names = tuple(basis_names) if basis_names else tuple(f"e{j + 1}" for j in range(self.n))
        if len(names) != self.n:
            raise DimensionMismatch(f"{len(names)} basis names for dimension {self.n}")
        self.basis_names = names
        self.meta = meta

    # -- constructors -------------------------------------------------------

    @classmethod
    def trivial(cls, p: int, n: int, basis_names: Sequence[str] | None = None) -> BraceTable:
        """The zero-multiplication brace: lambda_a = Id, a o b = a + b."""
        order = check_prime(p) ** n
        mats = np.broadcast_to(np.eye(n, dtype=np.int64), (order, n, n))
        return cls(p, n, mats, basis_names=basis_names)

    @classmethod
    def from_ring(
        cls,
        p: int,
        n: int,
        products: np.ndarray,
        basis_names: Sequence[str] | None = None,
    ) -> BraceTable:
        """Brace of a nilpotent associative algebra: a o b = a + b + ab.

        ``products[i, j]`` is the coordinate vector of ``e_i e_j``.
        """
        p = check_prime(p)
        consts = np.asarray(products, dtype=np.int64) % p
        if consts.shape != (n, n, n):
            raise DimensionMismatch(f"structure constants must have shape {(n, n, n)}")
        vectors = indices_to_vectors(np.arange(p**n), p, n)
        # column j of the left-multiplication matrix of a is a * e_j
        left_mult = np.einsum("ai,ijk->akj", vectors, consts)
        return cls(p, n, left_mult + np.eye(n, dtype=np.int64), basis_names=basis_names)

    # -- stored and cached data ---------------------------------------------

    @property
    def lambda_matrices(self) -> np.ndarray:
        return self._mats

    @cached_property
    def vectors(self) -> np.ndarray:
        vecs = indices_to_vectors(np.arange(self.order), self.p, self.n)
        vecs.setflags(write=False)
        return vecs

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    @cached_property
    def basis_indices(self) -> tuple[int, ...]:
        return tuple(int(w) for w in self.weights)

    @property
    def dense(self) -> bool:
        """Whether a dense lambda table is kept for this order."""
        return self.order * self.order <= DENSE_MAX_ENTRIES

    @cached_property
    def _dense_lambda(self) -> np.ndarray:
        table = np.empty((self.order, self.order), dtype=np.int32)
        for lo in range(0, self.order, _BLOCK):
            images = np.einsum("aij,bj->abi", self._mats[lo : lo + _BLOCK], self.vectors)
            table[lo : lo + _BLOCK] = self.to_index(images)
        table.setflags(write=False)
        return table

    @cached_property
    def _dense_lambda_inverse(self) -> np.ndarray:
        table = np.empty_like(self._dense_lambda)
        table[np.arange(self.order)[:, None], self._dense_lambda] = np.arange(self.order, dtype=np.int32)
        table.setflags(write=False)
        return table

    @cached_property
    def _inverse_data(self) -> tuple[np.ndarray, np.ndarray]:
        inverses, ok = batch_inverse(self._mats, self.p)
        inverses.setflags(write=False)
        return inverses, ok

    def _require_invertible(self) -> None:
        ok = self._inverse_data[1]
        if not ok.all():
            bad = int(np.argmin(ok))
            raise RelationFailure(f"lambda of element {bad} is not invertible", witness=[bad])

    @property
    def invertible(self) -> np.ndarray:
        """Mask of elements whose lambda matrix is invertible mod p."""
        return self._inverse_data[1]

    @property
    def inverse_matrices(self) -> np.ndarray:
        """Stack of lambda_a^{-1}; raises RelationFailure if some lambda_a is singular."""
        self._require_invertible()
        return self._inverse_data[0]

    @cached_property
    def right_inverses(self) -> np.ndarray:
        """The solution lambda_a^{-1}(-a) of a o x = 0, or 0 where lambda_a is singular."""
        images = np.matmul(self._inverse_data[0], (-self.vectors)[..., None])[..., 0]
        right = self.to_index(images)
        right.setflags(write=False)
        return right

    @property
    def circle_inverses(self) -> np.ndarray:
        """Circle inverse of every element."""
        self._require_invertible()
        return self.right_inverses

    # -- array API ----------------------------------------------------------

    def to_index(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinate vectors (last axis) to element indices."""
        return (np.asarray(vectors, dtype=np.int64) % self.p) @ self.weights

    def _matvec(self, mats: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.to_index(np.matmul(mats, self.vectors[b][..., None])[..., 0])

    def lambda_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """lambda_a(b) for broadcastable index arrays."""
        a, b = np.asarray(a), np.asarray(b)
        if self.dense:
            return self._dense_lambda[a, b].astype(np.int64)
        a, b = np.broadcast_arrays(a, b)
        return self._matvec(self._mats[a], b)

    def lambda_inverse_array(self, a: np.ndarray, c: np.ndarray) -> np.ndarray:
        a, c = np.asarray(a), np.asarray(c)
        if self.dense:
            self._require_invertible()
            return self._dense_lambda_inverse[a, c].astype(np.int64)
        a, c = np.broadcast_arrays(a, c)
        return self._matvec(self.inverse_matrices[a], c)

    def add_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.to_index(self.vectors[np.asarray(a)] + self.vectors[np.asarray(b)])

    def neg_array(self, a: np.ndarray) -> np.ndarray:
        return self.to_index(-self.vectors[np.asarray(a)])

    def star_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """a * b = lambda_a(b) - b."""
        b = np.asarray(b)
        return self.to_index(self.vectors[self.lambda_array(a, b)] - self.vectors[b])

    def circle_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """a o b = a + lambda_a(b)."""
        return self.add_array(a, self.lambda_array(a, b))

    # -- element API --------------------------------------------------------

    def index(self, element: Element) -> int:
        """Element index from an index, a coordinate vector or a basis name."""
        if isinstance(element, str):
            try:
                return self.basis_indices[self.basis_names.index(element)]
            except ValueError:
                raise IndexOutOfRange(f"unknown basis element {element!r}") from None
        if isinstance(element, (int, np.integer)):
            idx = int(element)
            if not 0 <= idx < self.order:
                raise IndexOutOfRange(f"element index {idx} outside [0, {self.order})")
            return idx
        coords = np.asarray(element, dtype=np.int64)
        if coords.shape != (self.n,):
            raise IndexOutOfRange(f"coordinate vector must have length {self.n}")
        return int(vectors_to_indices(coords, self.p))

    def vector(self, element: Element) -> tuple[int, ...]:
        return tuple(int(c) for c in self.vectors[self.index(element)])

    def add(self, a: Element, b: Element) -> int:
        return int(self.add_array(self.index(a), self.index(b)))

    def neg(self, a: Element) -> int:
        return int(self.neg_array(self.index(a)))

    def scale(self, alpha: int, a: Element) -> int:
        return int(self.to_index(alpha * self.vectors[self.index(a)]))

    def combination(self, coefficients: dict[str, int]) -> int:
        """Linear combination of named basis elements, e.g. ``{"Q": -1, "P": 1}``."""
        vec = np.zeros(self.n, dtype=np.int64)
        for name, coeff in coefficients.items():
            vec[self.basis_names.index(name)] += coeff
        return int(self.to_index(vec))

    def lambda_apply(self, a: Element, b: Element) -> int:
        return int(self.lambda_array(self.index(a), self.index(b)))

    def lambda_inverse_apply(self, a: Element, c: Element) -> int:
        return int(self.lambda_inverse_array(self.index(a), self.index(c)))

    def lambda_matrix(self, a: Element) -> FpMatrix:
        return FpMatrix(self._mats[self.index(a)], self.p)

    def star(self, a: Element, b: Element) -> int:
        return int(self.star_array(self.index(a), self.index(b)))

    def circle(self, a: Element, b: Element) -> int:
        return int(self.circle_array(self.index(a), self.index(b)))

    def circle_inv(self, a: Element) -> int:
        return int(self.circle_inverses[self.index(a)])

    def circle_pow(self, a: Element, e: int) -> int:
        """e-fold circle product; negative exponents use the circle inverse."""
        base = self.index(a)
        if e < 0:
            base, e = self.circle_inv(base), -e
        result = 0
        while e:
            if e & 1:
                result = self.circle(result, base)
            base = self.circle(base, base)
            e >>= 1
        return result

    def circle_product(self, *elements: Element) -> int:
        result = 0
        for x in elements:
            result = self.circle(result, x)
        return result

    @cached_property
    def left_chain_vanishes_by_five(self) -> bool:
        from braceforge.algebra.chains import left_chain

        report = left_chain(self)
        return report.reaches_zero and len(report.dims) <= 5

    def lambda_inv_quartic(self, a: Element, b: Element) -> int:
        """lambda_a^{-1}(b) = b - a*b + a*(a*b) - a*(a*(a*b)), valid when A^5 = 0."""
        if not self.left_chain_vanishes_by_five:
            raise PreconditionViolated("quartic inverse formula requires A^5 = 0")
        a, b = self.index(a), self.index(b)
        t1 = self.star(a, b)
        t2 = self.star(a, t1)
        t3 = self.star(a, t2)
        plus = self.add(b, t2)
        minus = self.add(t1, t3)
        return self.add(plus, self.neg(minus))

    # -- invariants ---------------------------------------------------------

    def check_invariants(self) -> None:
        """lambda_0 = Id and every lambda_a is invertible."""
        if not np.array_equal(self._mats[0], np.eye(self.n, dtype=np.int64)):
            raise RelationFailure("lambda of the identity element is not the identity", witness=[0])
        self._require_invertible()

    def same_table(self, other: BraceTable) -> bool:
        return (
            self.p == other.p
            and self.n == other.n
            and bool(np.array_equal(self._mats, other._mats))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BraceTable):
            return NotImplemented
        return self.same_table(other)

    __hash__ = None  # type: ignore[assignment]

    @property
    def subject(self) -> str:
        """Short label used in reports."""
        if self.meta is not None:
            return f"family {self.meta.label()}"
        return f"table p={self.p} n={self.n}"

    def __repr__(self) -> str:
        origin = f", {self.meta.label()}" if self.meta is not None else ""
        return f"BraceTable(p={self.p}, n={self.n}{origin})"
