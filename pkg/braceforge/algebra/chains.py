"""Subspaces of F_p^n and the left, right and strong radical chains of a brace."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import cached_property

import numpy as np
from loguru import logger

from braceforge.algebra.brace import BraceTable
from braceforge.algebra.fp_linalg import FpMatrix, indices_to_vectors, rref, vectors_to_indices
from braceforge.errors import DimensionMismatch
from braceforge.models.reports import ChainKind, ChainReport, NilpotencyFlags


class Subspace:
    """An F_p-subspace of F_p^n held as the nonzero rows of its RREF basis."""

    def __init__(self, rows: np.ndarray | Iterable[Sequence[int]], p: int, n: int):
        arr = np.array(rows, dtype=np.int64).reshape(-1, n)
        if arr.shape[0]:
            reduced = rref(FpMatrix(arr, p)).entries
            arr = reduced[reduced.any(axis=1)]
        basis = np.array(arr, dtype=np.int64)
        basis.setflags(write=False)
        self.basis = basis
        self.p = p
        self.n = n

    @classmethod
    def zero(cls, p: int, n: int) -> Subspace:
        return cls(np.zeros((0, n), dtype=np.int64), p, n)

    @classmethod
    def full(cls, p: int, n: int) -> Subspace:
        return cls(np.eye(n, dtype=np.int64), p, n)

    @classmethod
    def spanned_by(cls, A: BraceTable, elements: Iterable[int] | np.ndarray) -> Subspace:
        """Span of brace elements given by index."""
        idx = np.unique(np.asarray(list(elements), dtype=np.int64))
        idx = idx[idx != 0]
        return cls(A.vectors[idx], A.p, A.n)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def elements(self) -> np.ndarray:
        """Indices of all p^dim members, ascending."""
        coeffs = indices_to_vectors(np.arange(self.p**self.dim), self.p, self.dim)
        members = vectors_to_indices((coeffs @ self.basis) % self.p, self.p)
        return np.sort(members)

    @cached_property
    def basis_indices(self) -> np.ndarray:
        return vectors_to_indices(self.basis, self.p) if self.dim else np.zeros(0, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership mask over all p^n element indices."""
        member = np.zeros(self.p**self.n, dtype=bool)
        member[self.elements] = True
        return member

    @cached_property
    def pivots(self) -> np.ndarray:
        return np.argmax(self.basis != 0, axis=1)

    def contains_vectors(self, vectors: np.ndarray) -> np.ndarray:
        """Membership of coordinate vectors (last axis) by reduction against the RREF rows."""
        vecs = np.asarray(vectors, dtype=np.int64) % self.p
        residual = (vecs - vecs[..., self.pivots] @ self.basis) % self.p
        return ~residual.any(axis=-1)

    def contains(self, element: int | Sequence[int] | np.ndarray) -> bool:
        if isinstance(element, (int, np.integer)):
            return bool(self.mask[int(element)])
        return bool(self.mask[int(vectors_to_indices(element, self.p))])

    def _check_ambient(self, other: Subspace) -> None:
        if (self.p, self.n) != (other.p, other.n):
            raise DimensionMismatch(f"ambient spaces differ: {(self.p, self.n)} vs {(other.p, other.n)}")

    def __add__(self, other: Subspace) -> Subspace:
        self._check_ambient(other)
        return Subspace(np.vstack([self.basis, other.basis]), self.p, self.n)

    def __le__(self, other: Subspace) -> bool:
        self._check_ambient(other)
        return all(other.mask[i] for i in self.basis_indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and bool(np.array_equal(self.basis, other.basis))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.basis.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.basis.tolist()

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, dim={self.dim}, basis={self.tolist()})"


def full_space(A: BraceTable) -> Subspace:
    return Subspace.full(A.p, A.n)


def star_span(A: BraceTable, left: Subspace | None, right: Subspace) -> Subspace:
    """Additive span of ``a * b`` with ``a`` ranging over every element of ``left``
    (the whole brace when None) and ``b`` over a basis of ``right``.

    The star product is additive only in its right argument, so the left side
    must be enumerated element by element.
    """
    if right.is_zero or (left is not None and left.is_zero):
        return Subspace.zero(A.p, A.n)
    lefts = np.arange(A.order) if left is None else left.elements
    products = A.star_array(lefts[:, None], right.basis_indices[None, :])
    return Subspace.spanned_by(A, products.ravel())


def _report(kind: ChainKind, terms: list[Subspace]) -> ChainReport:
    dims = [t.dim for t in terms]
    report = ChainReport(kind=kind, dims=dims, stabilized_nonzero=dims[-1] != 0, terms=terms)
    logger.debug(f"{kind.value} chain dims {dims}")
    return report


def _iterate(A: BraceTable, kind: ChainKind, step) -> ChainReport:
    terms = [full_space(A)]
    while True:
        nxt = step(terms)
        if nxt == terms[-1]:
            terms.append(nxt)
            break
        terms.append(nxt)
        if nxt.is_zero:
            break
    return _report(kind, terms)


def left_chain(A: BraceTable) -> ChainReport:
    """A^1 = A, A^{i+1} = A * A^i."""
    return _iterate(A, ChainKind.LEFT, lambda terms: star_span(A, None, terms[-1]))


def right_chain(A: BraceTable) -> ChainReport:
    """A^(1) = A, A^(i+1) = A^(i) * A."""
    whole = full_space(A)
    return _iterate(A, ChainKind.RIGHT, lambda terms: star_span(A, terms[-1], whole))


def strong_chain(A: BraceTable) -> ChainReport:
    """A^[1] = A, A^[i+1] = sum over j = 1..i of A^[j] * A^[i+1-j]."""

    def step(terms: list[Subspace]) -> Subspace:
        i = len(terms)
        total = Subspace.zero(A.p, A.n)
        for j in range(1, i + 1):
            total = total + star_span(A, terms[j - 1], terms[i - j])
        return total

    return _iterate(A, ChainKind.STRONG, step)


def classify_nilpotency(A: BraceTable) -> NilpotencyFlags:
    return NilpotencyFlags(
        left=left_chain(A).reaches_zero,
        right=right_chain(A).reaches_zero,
        strong=strong_chain(A).reaches_zero,
    )
