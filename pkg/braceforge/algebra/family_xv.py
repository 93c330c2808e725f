"""The braces of order p^4 whose multiplicative group is XV.

Group elements are 5 x 5 affine matrices over F_p in the basis
``1, R', Q', P', S'``. The cocycle ``f(g) = M_g e_1 - e_1`` transports the
group onto F_p^4, and the lower-right 4 x 4 block of ``M_g`` is lambda at
the element ``f(g)``. Element coordinates and normal-form exponents are both
read in the order R, Q, P, S.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, fields, replace
from functools import lru_cache

import numpy as np
from loguru import logger

from braceforge.algebra.brace import FAMILY_BASIS, BraceTable
from braceforge.algebra.chains import Subspace, left_chain
from braceforge.algebra.fp_linalg import FpMatrix, mat_pow, scalar_inv, vectors_to_indices
from braceforge.algebra.runner import UNLIMITED, CheckMode, TimeBudget
from braceforge.errors import PreconditionViolated, RelationFailure
from braceforge.models.params import FamilyParams, NormalForm
from braceforge.models.reports import CheckResult, VerificationReport

Coords = tuple[int, int, int, int]


@dataclass(frozen=True)
class GeneratorMatrices:
    """Images of the generators P, Q, R, S of XV as 5 x 5 matrices."""

    P: FpMatrix
    Q: FpMatrix
    R: FpMatrix
    S: FpMatrix

    @property
    def p(self) -> int:
        return self.P.p

    def as_dict(self) -> dict[str, FpMatrix]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def with_matrix(self, name: str, matrix: FpMatrix) -> GeneratorMatrices:
        return replace(self, **{name: matrix})


def generator_matrices(params: FamilyParams) -> GeneratorMatrices:
    p, y, i, k = params.p, params.y, params.i, params.k
    half_y = scalar_inv(2, p) * y
    m_p = [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [1, 0, 0, 1, 0],
        [0, y, 0, 0, 1],
    ]
    m_q = [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [1, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, half_y, -y, 0, 1],
    ]
    m_r = [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, i, 0, 1, 0],
        [0, k, half_y, y, 1],
    ]
    m_s = [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, -1, 1, 0, 0],
        [0, 1, -1, 1, 0],
        [1, -half_y, 0, 0, 1],
    ]
    return GeneratorMatrices(
        P=FpMatrix(m_p, p), Q=FpMatrix(m_q, p), R=FpMatrix(m_r, p), S=FpMatrix(m_s, p)
    )


def verify_generator_relations(mats: GeneratorMatrices) -> VerificationReport:
    """The defining relations of XV among the matrices, plus X^p = Id for each generator."""
    P, Q, R, S = mats.P, mats.Q, mats.R, mats.S
    identity = FpMatrix.identity(5, mats.p)
    relations = [
        ("M_Q M_S = M_S M_Q M_P", Q @ S, S @ Q @ P),
        ("M_R M_S = M_S M_R M_Q", R @ S, S @ R @ Q),
        ("M_Q M_R = M_R M_Q", Q @ R, R @ Q),
        ("M_P M_S = M_S M_P", P @ S, S @ P),
        ("M_P M_Q = M_Q M_P", P @ Q, Q @ P),
        ("M_P M_R = M_R M_P", P @ R, R @ P),
    ]
    relations += [
        (f"M_{name}^p = Id", mat_pow(m, mats.p), identity) for name, m in mats.as_dict().items()
    ]
    checks = [CheckResult.from_outcome(name, lhs == rhs) for name, lhs, rhs in relations]
    return VerificationReport(subject=f"generator matrices p={mats.p}", mode="structural", checks=checks)


def _powers(m: FpMatrix) -> np.ndarray:
    out = [FpMatrix.identity(5, m.p)]
    for _ in range(m.p - 1):
        out.append(out[-1] @ m)
    return np.stack([x.entries for x in out])


def normal_form_matrices(mats: GeneratorMatrices) -> np.ndarray:
    """Stack of M_R^a M_Q^b M_P^c M_S^d, indexed by a p^3 + b p^2 + c p + d."""
    p = mats.p
    stack = _powers(mats.R)
    for gen in (mats.Q, mats.P, mats.S):
        stack = np.einsum("aij,bjk->abik", stack, _powers(gen)).reshape(-1, 5, 5) % p
    return stack


def _keys(stack: np.ndarray, p: int) -> np.ndarray:
    """Integer keys of the rows below the fixed first row."""
    flat = stack[..., 1:, :].reshape(*stack.shape[:-2], 20)
    if p**20 < 2**63:
        return flat @ (p ** np.arange(19, -1, -1, dtype=np.int64))
    return np.array([row.tobytes() for row in flat.reshape(-1, 20)], dtype=object).reshape(
        stack.shape[:-2]
    )


def _check_faithful(stack: np.ndarray, p: int) -> None:
    keys = _keys(stack, p)
    _, first, counts = np.unique(keys, return_index=True, return_counts=True)
    if (counts > 1).any():
        dup = int(first[np.argmax(counts > 1)])
        raise RelationFailure(
            f"normal-form matrices are not pairwise distinct (element {dup} repeats)", witness=[dup]
        )


def enumerate_group(mats: GeneratorMatrices) -> dict[NormalForm, FpMatrix]:
    """All p^4 group elements keyed by their normal form.

    Raises:
        RelationFailure: If two normal forms give the same matrix
    """
    p = mats.p
    stack = normal_form_matrices(mats)
    _check_faithful(stack, p)
    group = {}
    for idx, m in enumerate(stack):
        a, b, c, d = (idx // p**3) % p, (idx // p**2) % p, (idx // p) % p, idx % p
        group[NormalForm(alpha=a, beta=b, gamma=c, xi=d)] = FpMatrix(m, p)
    return group


def cocycle_f(mats: GeneratorMatrices, nf: NormalForm) -> Coords:
    """f(g) = M_g e_1 - e_1 in coordinates R', Q', P', S'."""
    m = FpMatrix.identity(5, mats.p)
    for gen, e in zip((mats.R, mats.Q, mats.P, mats.S), nf.as_tuple()):
        m = m @ mat_pow(gen, e)
    return tuple(int(v) for v in m.entries[1:, 0])  # type: ignore[return-value]


def verify_cocycle(
    mats: GeneratorMatrices,
    mode: CheckMode | None = None,
    *,
    threads: int = 1,
    budget: TimeBudget = UNLIMITED,
) -> VerificationReport:
    """f is bijective and f(g o h) = f(g) + lambda_g(f(h)) for all pairs.

    Every product M_g M_h must be one of the enumerated matrices; the witness
    of a failure is the pair of normal-form indices.
    """
    mode = mode or CheckMode.full()
    p = mats.p
    stack = normal_form_matrices(mats)
    values = stack[:, 1:, 0]
    distinct = np.unique(vectors_to_indices(values, p)).size
    checks = [
        CheckResult.from_outcome(
            "f_bijective", distinct == p**4, p**4, detail=f"{distinct} distinct values of f"
        )
    ]

    keys = _keys(stack, p)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    lam = stack[:, 1:, 1:]

    def cocycle(g, h):
        g, h = np.asarray(g), np.asarray(h)
        product = np.matmul(stack[g], stack[h]) % p
        k = _keys(product, p)
        pos = np.clip(np.searchsorted(sorted_keys, k), 0, len(sorted_keys) - 1)
        found = sorted_keys[pos] == k
        expected = values[g] + np.einsum("...ij,...j->...i", lam[g], values[h])
        return found & ((values[order[pos]] - expected) % p == 0).all(axis=-1)

    outcome = mode.run(cocycle, p**4, 2, threads=threads, budget=budget, what="cocycle")
    checks.append(
        CheckResult.from_outcome("cocycle", outcome.ok, outcome.checked, outcome.witness)
    )
    return VerificationReport(
        subject=f"cocycle p={p}",
        mode=mode.kind,
        seed=None if mode.is_full else mode.seed,
        samples=None if mode.is_full else mode.samples,
        checks=checks,
    )


def brace_from_generators(mats: GeneratorMatrices, meta: FamilyParams | None = None) -> BraceTable:
    """The brace carried by the group the matrices generate, with addition transported through f.

    Raises:
        RelationFailure: If the matrix representation is not faithful or f is not bijective
    """
    p = mats.p
    stack = normal_form_matrices(mats)
    _check_faithful(stack, p)
    positions = vectors_to_indices(stack[:, 1:, 0], p)
    if np.unique(positions).size != p**4:
        raise RelationFailure("cocycle f is not bijective")
    lambdas = np.empty((p**4, 4, 4), dtype=np.int64)
    lambdas[positions] = stack[:, 1:, 1:]
    return BraceTable(p, 4, lambdas, basis_names=FAMILY_BASIS, meta=meta)


# a brace holds p^4 matrices plus, for p <= 7, dense lookup tables
@lru_cache(maxsize=4)
def build_brace(params: FamilyParams) -> BraceTable:
    """The family brace for ``params``."""
    logger.debug(f"Assembling family brace {params.label()}")
    return brace_from_generators(generator_matrices(params), meta=params)


def multiplicative_table(params: FamilyParams) -> dict[tuple[str, str], Coords]:
    """Star products of the generators, coordinates in the order R, Q, P, S."""
    p, y, i, k = params.p, params.y, params.i, params.k
    half_y = scalar_inv(2, p) * y % p
    zero = (0, 0, 0, 0)

    def v(r=0, q=0, pp=0, s=0) -> Coords:
        return (r % p, q % p, pp % p, s % p)

    return {
        ("P", "P"): zero,
        ("P", "Q"): zero,
        ("P", "R"): v(s=y),
        ("P", "S"): zero,
        ("Q", "P"): zero,
        ("Q", "Q"): v(s=-y),
        ("Q", "R"): v(s=half_y),
        ("Q", "S"): zero,
        ("R", "P"): v(s=y),
        ("R", "Q"): v(s=half_y),
        ("R", "R"): v(pp=i, s=k),
        ("R", "S"): zero,
        ("S", "P"): zero,
        ("S", "Q"): v(pp=-1),
        ("S", "R"): v(q=-1, pp=1, s=-half_y),
        ("S", "S"): zero,
    }


def verify_multiplicative_table(A: BraceTable, params: FamilyParams) -> VerificationReport:
    checks = []
    for (a, b), expected in multiplicative_table(params).items():
        got = A.vector(A.star(a, b))
        checks.append(
            CheckResult.from_outcome(
                f"{a}*{b}",
                got == expected,
                witness=[A.index(a), A.index(b)],
                detail=f"expected {list(expected)}, got {list(got)}",
            )
        )
    return VerificationReport(subject=A.subject, mode="structural", checks=checks)


def _require_family_basis(A: BraceTable) -> None:
    if A.n != 4 or A.basis_names != FAMILY_BASIS:
        raise PreconditionViolated("operation needs a brace on the basis R, Q, P, S")


def normal_form(A: BraceTable, a) -> NormalForm:
    """Exponents with R^alpha o Q^beta o P^gamma o S^xi = a, found by peeling off R then Q."""
    _require_family_basis(A)
    a = A.index(a)
    alpha = A.vector(a)[0]
    rest = A.circle(A.circle_pow("R", -alpha), a)
    beta = A.vector(rest)[1]
    rest = A.circle(A.circle_pow("Q", -beta), rest)
    _, _, gamma, xi = A.vector(rest)
    nf = NormalForm(alpha=alpha, beta=beta, gamma=gamma, xi=xi)
    rebuilt = A.circle_product(
        A.circle_pow("R", alpha), A.circle_pow("Q", beta), A.circle_pow("P", gamma), A.circle_pow("S", xi)
    )
    if rebuilt != a:
        raise RelationFailure(f"element {a} has no normal form {nf.as_tuple()}", witness=[a])
    return nf


def witness_not_right_nilpotent(A: BraceTable, params: FamilyParams) -> bool:
    """(S*Q) * ((-1/y) R) = S."""
    scaled_r = A.scale(-scalar_inv(params.y, params.p), "R")
    return A.star(A.star("S", "Q"), scaled_r) == A.index("S")


def verify_presentation_constraints(A: BraceTable) -> VerificationReport:
    """Relations of XV hold as brace elements, and so do their star products with each generator."""
    _require_family_basis(A)
    words = [
        ("Q o S = S o Q o P", ["Q", "S"], ["S", "Q", "P"]),
        ("R o S = S o R o Q", ["R", "S"], ["S", "R", "Q"]),
        ("Q o R = R o Q", ["Q", "R"], ["R", "Q"]),
        ("P o S = S o P", ["P", "S"], ["S", "P"]),
        ("P o Q = Q o P", ["P", "Q"], ["Q", "P"]),
        ("P o R = R o P", ["P", "R"], ["R", "P"]),
    ]
    checks = []
    for name, lhs, rhs in words:
        w1, w2 = A.circle_product(*lhs), A.circle_product(*rhs)
        bad = [A.index(g) for g in FAMILY_BASIS if A.star(w1, g) != A.star(w2, g)]
        ok = w1 == w2 and not bad
        checks.append(
            CheckResult.from_outcome(name, ok, 1 + len(FAMILY_BASIS), [w1, w2, *bad[:1]])
        )
    for g in FAMILY_BASIS:
        power = A.circle_pow(g, A.p)
        bad = [A.index(x) for x in FAMILY_BASIS if A.star(power, x) != 0]
        checks.append(
            CheckResult.from_outcome(
                f"{g}^p = 0", power == 0 and not bad, 1 + len(FAMILY_BASIS), [power, *bad[:1]]
            )
        )
    return VerificationReport(subject=A.subject, mode="structural", checks=checks)


def verify_filtration_properties(A: BraceTable) -> VerificationReport:
    """Layer dimensions of the left chain and where the generators and their products sit."""
    _require_family_basis(A)
    chain = left_chain(A)
    zero = Subspace.zero(A.p, A.n)

    def layer(i: int) -> Subspace:
        return chain.terms[i - 1] if i <= len(chain.terms) else zero

    star = A.star_array
    everything = np.arange(A.order)
    P, Q, R, S = (A.index(g) for g in ("P", "Q", "R", "S"))
    line_p = Subspace.spanned_by(A, [P])
    a2 = layer(2).elements

    def inside(products: np.ndarray, space: Subspace) -> bool:
        return bool(space.mask[np.asarray(products)].all())

    facts = [
        ("left layers have dimension 4, 3, 2, 1, 0", chain.dims == [4, 3, 2, 1, 0]),
        ("Q in A^2 and not in A^3", layer(2).contains(Q) and not layer(3).contains(Q)),
        ("P in A^3 and not in A^4", layer(3).contains(P) and not layer(4).contains(P)),
        ("S in A^4 and nonzero", layer(4).contains(S) and S != 0),
        ("R not in A^2", not layer(2).contains(R)),
        ("A^3 = F_p P + A^4", layer(3) == line_p + layer(4)),
    ]
    for i in (1, 2):
        facts.append((f"Q * A^{i} in A^{i + 2}", inside(star(Q, layer(i).elements), layer(i + 2))))
        facts.append((f"P * A^{i} in A^{i + 3}", inside(star(P, layer(i).elements), layer(i + 3))))
    facts += [
        ("P*P = Q*P = P*Q = 0", star(P, P) == 0 and star(Q, P) == 0 and star(P, Q) == 0),
        (
            "A*P and P*A in A^4",
            inside(star(everything, P), layer(4)) and inside(star(P, everything), layer(4)),
        ),
        ("P*A^2 = A^2*P = 0", not star(P, a2).any() and not star(a2, P).any()),
        ("a*Q in F_p P for a in A^4", inside(star(layer(4).elements, Q), line_p)),
    ]
    checks = [CheckResult.from_outcome(name, bool(ok)) for name, ok in facts]
    return VerificationReport(subject=A.subject, mode="structural", checks=checks)


def family_parameters(p: int) -> Iterator[FamilyParams]:
    """Every admissible (y, i, k) for the prime p, y outermost."""
    FamilyParams.create(p, 1)
    for y in range(1, p):
        for i in range(p):
            for k in range(p):
                yield FamilyParams.create(p, y, i, k)


def sample_parameters(p: int, count: int, seed: int) -> list[FamilyParams]:
    """``count`` distinct parameter triples drawn without replacement."""
    total = (p - 1) * p * p
    rng = np.random.default_rng(seed)
    picks = np.sort(rng.choice(total, size=min(count, total), replace=False))
    return [
        FamilyParams.create(p, 1 + int(t) // (p * p), (int(t) // p) % p, int(t) % p) for t in picks
    ]
