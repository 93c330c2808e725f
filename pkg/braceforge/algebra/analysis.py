"""Commutator identity for braces with A^5 = 0, isomorphism search and invariants."""

from __future__ import annotations

import numpy as np
from loguru import logger

from braceforge.algebra.brace import BraceTable
from braceforge.algebra.chains import (
    Subspace,
    classify_nilpotency,
    left_chain,
    right_chain,
    strong_chain,
)
from braceforge.algebra.fp_linalg import FpMatrix, indices_to_vectors, rank, vectors_to_indices
from braceforge.algebra.ideals import all_ideals, circle_center, enumerate_subspaces, identify_group, is_prime
from braceforge.algebra.runner import UNLIMITED, CheckMode, TimeBudget
from braceforge.config.settings import get_settings
from braceforge.errors import PreconditionViolated, RelationFailure, TooLarge
from braceforge.models.reports import ChainReport, CheckResult, Fingerprint, IsoWitness, VerificationReport


def _commutator_array(A: BraceTable, a, b) -> np.ndarray:
    inv = A.circle_inverses
    circle = A.circle_array
    return circle(circle(circle(inv[a], inv[b]), a), b)


def _commutator_rhs_array(A: BraceTable, a, b, c) -> np.ndarray:
    s, add, neg = A.star_array, A.add_array, A.neg_array
    bc, ac = s(b, c), s(a, c)
    plus = add(add(s(a, bc), s(a, s(b, ac))), s(b, s(b, ac)))
    minus = add(add(s(b, ac), s(b, s(a, bc))), s(a, s(a, bc)))
    return add(plus, neg(minus))


def commutator(A: BraceTable, a, b) -> int:
    """a^{-1} o b^{-1} o a o b."""
    return int(_commutator_array(A, A.index(a), A.index(b)))


def commutator_star_rhs(A: BraceTable, a, b, c) -> int:
    """Six-term expression in the star product alone that equals (a^{-1} o b^{-1} o a o b) * c."""
    return int(_commutator_rhs_array(A, A.index(a), A.index(b), A.index(c)))


def commutator_star_check(A: BraceTable, a, b, c) -> bool:
    """Compare both sides of the commutator identity at one triple.

    Raises:
        PreconditionViolated: If the left chain does not vanish by its fifth term
    """
    if not A.left_chain_vanishes_by_five:
        raise PreconditionViolated("commutator identity requires A^5 = 0")
    return A.star(commutator(A, a, b), c) == commutator_star_rhs(A, a, b, c)


def verify_commutator_identity(
    A: BraceTable,
    mode: CheckMode | None = None,
    *,
    threads: int = 1,
    budget: TimeBudget = UNLIMITED,
) -> VerificationReport:
    """Both sides of the commutator identity over triples; full mode certifies c on 0 and the basis.

    Raises:
        PreconditionViolated: If the left chain does not vanish by its fifth term
    """
    if not A.left_chain_vanishes_by_five:
        raise PreconditionViolated("commutator identity requires A^5 = 0")
    mode = mode or CheckMode.full()

    def identity(a, b, c):
        return A.star_array(_commutator_array(A, a, b), c) == _commutator_rhs_array(A, a, b, c)

    spanning = [0, *A.basis_indices]
    outcome = mode.run(
        identity, A.order, 3, last=spanning, threads=threads, budget=budget, what="commutator identity"
    )
    check = CheckResult.from_outcome("commutator_identity", outcome.ok, outcome.checked, outcome.witness)
    return VerificationReport(
        subject=A.subject,
        mode=mode.kind,
        seed=None if mode.is_full else mode.seed,
        samples=None if mode.is_full else mode.samples,
        checks=[check],
    )


def _layers(A: BraceTable, chain: ChainReport) -> np.ndarray:
    """Depth of every element in a chain: the largest i with x in the i-th term."""
    depth = np.zeros(A.order, dtype=np.int64)
    for i, term in enumerate(chain.terms, start=1):
        depth[term.mask] = i
    return depth


def _signatures(A: BraceTable) -> np.ndarray:
    """Per-element code of left depth, right depth and centrality; isomorphisms preserve it."""
    left = _layers(A, left_chain(A))
    right = _layers(A, right_chain(A))
    central = np.zeros(A.order, dtype=np.int64)
    central[circle_center(A).elements] = 1
    return (left * 64 + right) * 2 + central


def _adapted_basis(A: BraceTable, chain: ChainReport) -> list[tuple[int, int]]:
    """Basis of A built from the deepest chain term outwards, as (element, depth) pairs."""
    span = Subspace.zero(A.p, A.n)
    basis = []
    for depth in range(len(chain.terms), 0, -1):
        for idx in chain.terms[depth - 1].basis_indices:
            if not span.contains(int(idx)):
                span = span + Subspace.spanned_by(A, [int(idx)])
                basis.append((int(idx), depth))
    return basis


def _cheap_invariants(A: BraceTable) -> tuple:
    return (
        left_chain(A).dims,
        right_chain(A).dims,
        strong_chain(A).dims,
        circle_center(A).size,
    )


def is_isomorphism(A: BraceTable, B: BraceTable, matrix: FpMatrix) -> bool:
    """Whether the linear map with the given matrix carries A onto B preserving o.

    For an invertible linear phi this is phi lambda_a = lambda_{phi(a)} phi for every a.
    """
    if (A.p, A.n) != (B.p, B.n) or matrix.shape != (A.n, A.n) or rank(matrix) < A.n:
        return False
    m = matrix.entries
    phi = vectors_to_indices(matrix.apply(A.vectors), A.p)
    lhs = np.matmul(m, A.lambda_matrices) % A.p
    rhs = np.matmul(B.lambda_matrices[phi], m) % A.p
    return bool(np.array_equal(lhs, rhs))


def _witness(A: BraceTable, phi: np.ndarray) -> IsoWitness:
    columns = [A.vectors[phi[e]] for e in A.basis_indices]
    matrix = np.array(columns, dtype=np.int64).T
    return IsoWitness(
        images={name: col.tolist() for name, col in zip(A.basis_names, columns)},
        matrix=matrix.tolist(),
        full_map=phi.tolist(),
    )


def brace_isomorphic(
    A: BraceTable, B: BraceTable, node_limit: int | None = None
) -> IsoWitness | None:
    """Search for a brace isomorphism A -> B.

    Isomorphisms are additive, hence F_p-linear, so they are fixed by the
    images of a basis. Basis vectors are taken from the deepest left-chain
    term outwards and each may only map onto elements of B with the same
    left depth, right depth and centrality. The star product is additive in
    its right argument, so after each assignment only the newly spanned
    elements are compared against the chosen basis (and the older elements
    against the new basis vector); the complete assignment is compared on
    every element.

    Args:
        A: Source brace
        B: Target brace
        node_limit: Largest number of candidate images to try (default: settings.iso_node_limit)

    Returns:
        An IsoWitness, or None if the braces are not isomorphic

    Raises:
        TooLarge: If the search tries more candidates than ``node_limit``
    """
    if (A.p, A.n) != (B.p, B.n):
        return None
    if _cheap_invariants(A) != _cheap_invariants(B):
        logger.debug("Invariants differ; braces are not isomorphic")
        return None

    limit = node_limit if node_limit is not None else get_settings().iso_node_limit
    p, n = A.p, A.n
    basis = _adapted_basis(A, left_chain(A))
    sig_a, sig_b = _signatures(A), _signatures(B)
    sources = np.array([idx for idx, _ in basis], dtype=np.int64)
    source_vecs = A.vectors[sources]
    candidates = []
    for idx in sources:
        pool = np.flatnonzero(sig_b == sig_a[idx])
        # try the same element first so that A -> A finds the identity
        pool = np.concatenate([pool[pool == idx], pool[pool != idx]])
        candidates.append(pool)
    coeffs = [indices_to_vectors(np.arange(p**d), p, d) for d in range(n + 1)]
    nodes = 0

    def agrees(a_src, a_dst, b_src, b_dst, phi) -> bool:
        mapped = phi[A.star_array(a_src[:, None], b_src[None, :])]
        target = B.star_array(a_dst[:, None], b_dst[None, :])
        known = mapped >= 0
        return bool(np.array_equal(mapped[known], target[known]))

    def consistent(images: list[int]) -> np.ndarray | None:
        d = len(images)
        chosen = np.array(images, dtype=np.int64)
        src = A.to_index(coeffs[d] @ source_vecs[:d])
        dst = B.to_index(coeffs[d] @ B.vectors[chosen])
        if np.unique(dst).size != dst.size:
            return None
        phi = np.full(A.order, -1, dtype=np.int64)
        phi[src] = dst
        if d == n:
            return phi if agrees(src, dst, sources, chosen, phi) else None
        new = coeffs[d][:, d - 1] != 0
        if not agrees(src[new], dst[new], sources[:d], chosen, phi):
            return None
        if not agrees(src[~new], dst[~new], sources[d - 1 : d], chosen[-1:], phi):
            return None
        return phi

    def search(images: list[int]) -> np.ndarray | None:
        nonlocal nodes
        j = len(images)
        for cand in candidates[j]:
            nodes += 1
            if nodes > limit:
                raise TooLarge(f"isomorphism search exceeded {limit} candidate images")
            phi = consistent(images + [int(cand)])
            if phi is None:
                continue
            if j + 1 == n:
                return phi
            found = search(images + [int(cand)])
            if found is not None:
                return found
        return None

    phi = search([])
    logger.debug(f"Isomorphism search tried {nodes} candidate images")
    if phi is None:
        return None
    witness = _witness(A, phi)
    if not is_isomorphism(A, B, FpMatrix(witness.matrix, p)):
        raise RelationFailure("isomorphism search produced a map that does not preserve o")
    return witness


def invariant_fingerprint(A: BraceTable, with_ideals: bool = True) -> Fingerprint:
    """Isomorphism invariants; the ideal lattice is skipped when ``with_ideals`` is False."""
    left, right, strong = left_chain(A), right_chain(A), strong_chain(A)
    prime = ideal_dims = None
    if with_ideals:
        ideals = all_ideals(A, enumerate_subspaces(A.p, A.n))
        prime = is_prime(A, ideals)
        ideal_dims = sorted(ideal.dim for ideal in ideals)
    return Fingerprint(
        left_dims=left.dims,
        right_dims=right.dims,
        strong_dims=strong.dims,
        nilpotency=classify_nilpotency(A),
        prime=prime,
        group=identify_group(A) if A.n == 4 else None,
        center_size=circle_center(A).size,
        ideal_dims=ideal_dims,
    )
