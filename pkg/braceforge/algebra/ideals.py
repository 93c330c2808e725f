"""Ideals, ideal products, primeness and the center of the circle group."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from loguru import logger

from braceforge.algebra.axioms import verify_exponent
from braceforge.algebra.brace import BraceTable
from braceforge.algebra.chains import Subspace, star_span
from braceforge.algebra.fp_linalg import FpMatrix, indices_to_vectors, rref
from braceforge.config.settings import get_settings
from braceforge.errors import TooLarge, WrongCardinality
from braceforge.models.reports import CenterReport, GroupId, IdealEntry, IdealLatticeReport


def _pivot_layouts(n: int):
    """Pivot column sets with the free positions of the matching RREF shape."""
    for d in range(n + 1):
        for pivots in combinations(range(n), d):
            free = [
                (r, c)
                for r, pc in enumerate(pivots)
                for c in range(pc + 1, n)
                if c not in pivots
            ]
            yield pivots, free


def count_subspaces(p: int, n: int) -> int:
    """Sum of the Gaussian binomials [n choose d]_p."""
    return sum(p ** len(free) for _, free in _pivot_layouts(n))


def enumerate_subspaces(p: int, n: int, limit: int | None = None) -> list[Subspace]:
    """Every subspace of F_p^n exactly once, by dimension then pivot set.

    Args:
        p: Prime modulus
        n: Ambient dimension
        limit: Largest number of subspaces to produce (default: settings.max_subspaces)

    Returns:
        List of subspaces in canonical RREF

    Raises:
        TooLarge: If there are more subspaces than ``limit``
    """
    limit = limit if limit is not None else get_settings().max_subspaces
    total = count_subspaces(p, n)
    if total > limit:
        raise TooLarge(f"F_{p}^{n} has {total} subspaces, more than the limit {limit}")

    spaces = []
    for pivots, free in _pivot_layouts(n):
        fillings = indices_to_vectors(np.arange(p ** len(free)), p, len(free))
        for filling in fillings:
            rows = np.zeros((len(pivots), n), dtype=np.int64)
            for r, c in enumerate(pivots):
                rows[r, c] = 1
            for (r, c), value in zip(free, filling):
                rows[r, c] = value
            spaces.append(Subspace(rows, p, n))
    logger.debug(f"Enumerated {len(spaces)} subspaces of F_{p}^{n}")
    return spaces


def star_operators(A: BraceTable) -> np.ndarray:
    """Basis of the linear span of the maps lambda_a - Id, as a (k, n, n) stack.

    ``A * V`` lies in ``V`` exactly when every one of these maps sends ``V`` into itself.
    """
    eye = np.eye(A.n, dtype=np.int64)
    flat = ((A.lambda_matrices - eye) % A.p).reshape(A.order, A.n * A.n)
    reduced = rref(FpMatrix(flat, A.p)).entries
    return reduced[reduced.any(axis=1)].reshape(-1, A.n, A.n)


def is_ideal(A: BraceTable, V: Subspace, operators: np.ndarray | None = None) -> bool:
    """A * V and V * A both lie in V (left factors range over all elements).

    Args:
        A: Brace
        V: Candidate subspace
        operators: Precomputed :func:`star_operators`, reused across many candidates
    """
    if V.is_zero or V.dim == A.n:
        return True
    ops = operators if operators is not None else star_operators(A)
    images = np.einsum("kij,dj->kdi", ops, V.basis)
    if not V.contains_vectors(images).all():
        return False
    products = A.star_array(V.elements[:, None], np.array(A.basis_indices)[None, :])
    return bool(V.contains_vectors(A.vectors[products]).all())


@dataclass(frozen=True)
class Ideal:
    """An ideal together with its checked consequences."""

    space: Subspace
    lambda_invariant: bool
    circle_normal: bool

    @property
    def dim(self) -> int:
        return self.space.dim


def lambda_invariant(A: BraceTable, V: Subspace) -> bool:
    images = A.lambda_array(np.arange(A.order)[:, None], V.basis_indices[None, :])
    return bool(V.contains_vectors(A.vectors[images]).all())


def _generated(A: BraceTable, gens: np.ndarray) -> np.ndarray:
    """Mask of the circle subgroup generated by ``gens``."""
    reached = np.zeros(A.order, dtype=bool)
    reached[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size:
        products = np.unique(A.circle_array(frontier[:, None], gens[None, :]))
        frontier = products[~reached[products]]
        reached[frontier] = True
    return reached


def circle_generators(A: BraceTable) -> np.ndarray:
    """A generating set of (A, o): the additive basis, extended until everything is reached."""
    gens = list(A.basis_indices)
    while True:
        reached = _generated(A, np.array(gens, dtype=np.int64))
        if reached.all():
            return np.array(gens, dtype=np.int64)
        gens.append(int(np.argmin(reached)))


def circle_normal(A: BraceTable, V: Subspace, generators: np.ndarray | None = None) -> bool:
    """a o v o a^{-1} lies in V for all a and v in V.

    V is a finite subgroup of (A, o), so conjugation by a generating set decides it.
    """
    if V.is_zero or V.dim == A.n:
        return True
    gens = generators if generators is not None else circle_generators(A)
    left = A.circle_array(gens[:, None], V.elements[None, :])
    conj = A.circle_array(left, A.circle_inverses[gens][:, None])
    return bool(V.contains_vectors(A.vectors[conj]).all())


def all_ideals(A: BraceTable, subspaces: list[Subspace] | None = None) -> list[Ideal]:
    candidates = subspaces if subspaces is not None else enumerate_subspaces(A.p, A.n)
    operators = star_operators(A)
    gens = circle_generators(A)
    ideals = [
        Ideal(V, lambda_invariant(A, V), circle_normal(A, V, gens))
        for V in candidates
        if is_ideal(A, V, operators)
    ]
    logger.info(f"{A.subject}: {len(ideals)} ideals among {len(candidates)} subspaces")
    return ideals


def ideal_product(A: BraceTable, I: Subspace, J: Subspace) -> Subspace:
    """Additive span of a * b for a in I and b in J."""
    return star_span(A, I, J)


def is_prime(A: BraceTable, ideals: list[Ideal] | None = None) -> bool:
    """The product of any two nonzero ideals is nonzero."""
    ideals = ideals if ideals is not None else all_ideals(A)
    nonzero = [ideal.space for ideal in ideals if ideal.dim > 0]
    return all(not ideal_product(A, I, J).is_zero for I in nonzero for J in nonzero)


def ideal_lattice(A: BraceTable) -> IdealLatticeReport:
    subspaces = enumerate_subspaces(A.p, A.n)
    ideals = all_ideals(A, subspaces)
    return IdealLatticeReport(
        ideals=[IdealEntry(dim=ideal.dim, basis=ideal.space.tolist()) for ideal in ideals],
        prime=is_prime(A, ideals),
        subspaces_examined=len(subspaces),
    )


def _commuting(A: BraceTable, elements: np.ndarray, gens: np.ndarray) -> np.ndarray:
    left = A.circle_array(elements[:, None], gens[None, :])
    right = A.circle_array(gens[None, :], elements[:, None])
    return (left == right).all(axis=1)


def circle_center(A: BraceTable) -> CenterReport:
    """Elements commuting with everything under the circle operation."""
    central = np.flatnonzero(_commuting(A, np.arange(A.order), circle_generators(A)))
    span = Subspace.spanned_by(A, central)
    basis = span.tolist() if span.elements.size == central.size else None
    return CenterReport(size=int(central.size), elements=central.tolist(), basis=basis)


def identify_group(A: BraceTable) -> GroupId:
    """Tell apart the groups of order p^4 by commutativity, exponent and center size."""
    if A.n != 4:
        raise WrongCardinality(f"group identification needs |A| = p^4, got p^{A.n}")
    gens = circle_generators(A)
    if _commuting(A, gens, gens).all():
        return GroupId.ABELIAN
    if not verify_exponent(A).passed:
        return GroupId.OTHER
    size = circle_center(A).size
    if size == A.p**2:
        return GroupId.XIV
    if size == A.p:
        return GroupId.XV
    return GroupId.OTHER
