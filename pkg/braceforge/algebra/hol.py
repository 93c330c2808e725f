"""Holomorph of (F_p^n, +): affine maps b -> v + M b, regular subgroups and conjugated braces."""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Iterator, Sequence
from itertools import product

import numpy as np
from loguru import logger

from braceforge.algebra.brace import BraceTable
from braceforge.algebra.fp_linalg import FpMatrix, mat_inv, rank, vectors_to_indices
from braceforge.errors import ClosureFailure, NotASubgroup, RelationFailure


class HolElement:
    """The affine map b -> v + M b with M invertible."""

    __slots__ = ("v", "M")

    def __init__(self, v: Sequence[int] | np.ndarray, M: FpMatrix):
        vec = np.array(v, dtype=np.int64) % M.p
        vec.setflags(write=False)
        self.v = vec
        self.M = M

    @property
    def p(self) -> int:
        return self.M.p

    def apply(self, b: Sequence[int] | np.ndarray) -> np.ndarray:
        return (self.v + self.M.apply(b)) % self.p

    def compose(self, other: HolElement) -> HolElement:
        """(v, M)(w, N) = (v + M w, M N): apply ``other`` first."""
        return HolElement(self.v + self.M.apply(other.v), self.M @ other.M)

    def inverse(self) -> HolElement:
        m_inv = mat_inv(self.M)
        return HolElement(-m_inv.apply(self.v), m_inv)

    def __matmul__(self, other: HolElement) -> HolElement:
        return self.compose(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HolElement):
            return NotImplemented
        return bool(np.array_equal(self.v, other.v)) and self.M == other.M

    def __hash__(self) -> int:
        return hash((self.v.tobytes(), self.M))

    def __repr__(self) -> str:
        return f"HolElement(v={self.v.tolist()}, M={self.M.tolist()})"


def embed(A: BraceTable) -> list[HolElement]:
    """The image of a -> (a, lambda_a), checked to be closed under composition.

    Raises:
        ClosureFailure: If (a, lambda_a)(b, lambda_b) is not (a o b, lambda_{a o b}) for some pair
    """
    mats = A.lambda_matrices
    vecs = A.vectors
    for a in range(A.order):
        moved = (vecs[a] + np.einsum("ij,bj->bi", mats[a], vecs)) % A.p
        linear = np.einsum("ij,bjk->bik", mats[a], mats) % A.p
        target = A.circle_array(a, np.arange(A.order))
        ok = (vectors_to_indices(moved, A.p) == target) & (linear == mats[target]).all(axis=(1, 2))
        if not ok.all():
            b = int(np.argmin(ok))
            raise ClosureFailure(f"embedding not closed at pair ({a}, {b})", witness=[a, b])
    return [HolElement(vecs[a], FpMatrix(mats[a], A.p)) for a in range(A.order)]


def _keys(vs: np.ndarray, ms: np.ndarray, p: int) -> np.ndarray:
    flat = np.concatenate([vs, ms.reshape(len(ms), -1)], axis=1)
    width = flat.shape[1]
    if p**width < 2**63:
        return flat @ (p ** np.arange(width - 1, -1, -1, dtype=np.int64))
    return np.array([row.tobytes() for row in flat], dtype=object)


def is_regular(subgroup: Iterable[HolElement], p: int, n: int) -> bool:
    """Whether g -> g(0) is a bijection from the subgroup onto F_p^n.

    Raises:
        NotASubgroup: If the set is not closed under composition and inverses
    """
    elements = list(subgroup)
    if not elements:
        raise NotASubgroup("empty set is not a subgroup")
    vs = np.stack([g.v for g in elements])
    ms = np.stack([g.M.entries for g in elements])
    members = _keys(vs, ms, p)
    for g in elements:
        prod_v = (g.v + vs @ g.M.entries.T) % p
        prod_m = np.einsum("ij,bjk->bik", g.M.entries, ms) % p
        if not np.isin(_keys(prod_v, prod_m, p), members).all():
            raise NotASubgroup("set is not closed under composition")
    inverses = [g.inverse() for g in elements]
    inv_keys = _keys(np.stack([g.v for g in inverses]), np.stack([g.M.entries for g in inverses]), p)
    if not np.isin(inv_keys, members).all():
        raise NotASubgroup("set is not closed under inverses")
    images = np.unique(vectors_to_indices(vs, p))
    return len(elements) == p**n and images.size == p**n


def conjugate_brace(A: BraceTable, gamma: FpMatrix) -> BraceTable:
    """Brace with a o_gamma b = gamma^{-1}(gamma(a) o gamma(b)).

    Raises:
        Singular: If gamma is not invertible
    """
    g = gamma.entries
    g_inv = mat_inv(gamma).entries
    images = vectors_to_indices(A.vectors @ g.T, A.p)
    mats = np.einsum("ij,ajk,kl->ail", g_inv, A.lambda_matrices[images], g) % A.p
    return BraceTable(A.p, A.n, mats, basis_names=A.basis_names)


def is_brace_automorphism(A: BraceTable, gamma: FpMatrix) -> bool:
    """gamma(a o b) = gamma(a) o gamma(b) for all pairs, cross-checked against conjugate_brace.

    With gamma additive this is gamma lambda_a = lambda_{gamma(a)} gamma for every a.

    Raises:
        Singular: If gamma is not invertible
    """
    conjugated = conjugate_brace(A, gamma)
    g = gamma.entries
    mats = A.lambda_matrices
    phi = vectors_to_indices(A.vectors @ g.T, A.p)
    direct = bool(np.array_equal(np.matmul(g, mats) % A.p, np.matmul(mats[phi], g) % A.p))
    if direct != conjugated.same_table(A):
        raise RelationFailure("automorphism test disagrees with the conjugated table")
    return direct


def random_invertible(p: int, n: int, rng: np.random.Generator) -> FpMatrix:
    """Uniform element of GL(n, p) by rejection sampling."""
    while True:
        candidate = FpMatrix(rng.integers(0, p, size=(n, n)), p)
        if rank(candidate) == n:
            return candidate


def iter_conjugate_braces(A: BraceTable, budget: int) -> Iterator[tuple[FpMatrix, BraceTable]]:
    """Walk GL(n, p) in lexicographic order of entries and yield each gamma whose
    conjugated brace has not been seen before, examining at most ``budget`` gammas."""
    seen: set[str] = set()
    examined = 0
    for entries in product(range(A.p), repeat=A.n * A.n):
        if examined >= budget:
            break
        gamma = FpMatrix(np.array(entries).reshape(A.n, A.n), A.p)
        if rank(gamma) < A.n:
            continue
        examined += 1
        conjugated = conjugate_brace(A, gamma)
        digest = hashlib.sha256(conjugated.lambda_matrices.tobytes()).hexdigest()
        if digest in seen:
            continue
        seen.add(digest)
        yield gamma, conjugated
    logger.debug(f"Examined {examined} gammas, {len(seen)} distinct conjugated braces")
