"""Verification of the brace axioms, F_p-linearity and the lambda homomorphism."""

from __future__ import annotations

import numpy as np
from loguru import logger

from braceforge.algebra.brace import BraceTable
from braceforge.algebra.runner import UNLIMITED, CheckMode, SearchOutcome, TimeBudget
from braceforge.errors import BudgetExceeded
from braceforge.models.reports import CheckResult, VerificationReport


def _result(name: str, outcome: SearchOutcome, detail: str = "") -> CheckResult:
    result = CheckResult.from_outcome(name, outcome.ok, outcome.checked, outcome.witness, detail)
    logger.debug(f"{name}: {result.status.value} after {outcome.checked} instances")
    return result


def _report(A: BraceTable, mode: CheckMode, checks: list[CheckResult]) -> VerificationReport:
    return VerificationReport(
        subject=A.subject,
        mode=mode.kind,
        seed=None if mode.is_full else mode.seed,
        samples=None if mode.is_full else mode.samples,
        checks=checks,
    )


def _identity_check(A: BraceTable) -> CheckResult:
    elements = np.arange(A.order)
    ok = (A.circle_array(elements, 0) == elements) & (A.circle_array(0, elements) == elements)
    witness = None if ok.all() else [int(np.argmin(ok))]
    return CheckResult.from_outcome("identity", witness is None, A.order, witness, "0 o a = a o 0 = a")


def _inverse_check(A: BraceTable) -> CheckResult:
    """Every element has a two-sided circle inverse."""
    elements = np.arange(A.order)
    ok = A.invertible & (A.circle_array(A.right_inverses, elements) == 0)
    witness = None if ok.all() else [int(np.argmin(ok))]
    return CheckResult.from_outcome("inverses", witness is None, A.order, witness)


def verify_brace_axioms(
    A: BraceTable,
    mode: CheckMode | None = None,
    *,
    threads: int = 1,
    budget: TimeBudget = UNLIMITED,
) -> VerificationReport:
    """Check (A,+), (A,o) and the compatibility laws, reporting the first counterexample of each.

    Every triple law is affine in its last argument once lambda is given by
    matrices, so full mode certifies it on 0 and the basis.

    Args:
        A: Brace table to check
        mode: Full or sampled iteration over triples (default: full)
        threads: Worker threads for full iteration
        budget: Cooperative time budget; on expiry the finished checks travel
            in the exception's ``partial``

    Returns:
        VerificationReport with one entry per axiom
    """
    mode = mode or CheckMode.full()
    add, circle, star = A.add_array, A.circle_array, A.star_array
    N = A.order
    spanning = [0, *A.basis_indices]
    logger.info(f"Verifying brace axioms of {A.subject} ({mode.kind})")

    def associativity(a, b, c):
        return circle(circle(a, b), c) == circle(a, circle(b, c))

    def compatibility(a, b, c):
        # a o (b + c) + a = a o b + a o c
        return add(circle(a, add(b, c)), a) == add(circle(a, b), circle(a, c))

    def star_of_circle(a, b, c):
        # (a o b) * c = a * c + b * c + a * (b * c)
        bc = star(b, c)
        return star(circle(a, b), c) == add(add(star(a, c), bc), star(a, bc))

    def star_right_additive(a, b, c):
        return star(a, add(b, c)) == add(star(a, b), star(a, c))

    checks = [
        CheckResult.from_outcome(
            "additive_group",
            True,
            detail=f"coordinate addition on F_{A.p}^{A.n}: abelian of exponent {A.p}",
        ),
        _identity_check(A),
        _inverse_check(A),
    ]
    detail = "last argument certified on 0 and the basis" if mode.is_full else ""
    for name, law in (
        ("associativity", associativity),
        ("compatibility", compatibility),
        ("star_of_circle", star_of_circle),
        ("star_right_additive", star_right_additive),
    ):
        try:
            outcome = mode.run(law, N, 3, last=spanning, threads=threads, budget=budget, what=name)
        except BudgetExceeded as e:
            raise BudgetExceeded(str(e), partial=_report(A, mode, checks)) from e
        checks.append(_result(name, outcome, detail))
    return _report(A, mode, checks)


def verify_fp_linearity(A: BraceTable) -> VerificationReport:
    """a * (alpha b) = alpha (a * b) for all a, basis b and alpha in F_p."""
    scaled = np.stack(
        [A.to_index(alpha * A.vectors) for alpha in range(A.p)]
    )  # scaled[alpha, x] = index of alpha x
    basis = np.array(A.basis_indices)
    elements = np.arange(A.order)
    products = A.star_array(elements[:, None], basis[None, :])
    # ok[a, j, alpha]
    lhs = A.star_array(elements[:, None, None], scaled[:, basis].T[None, :, :])
    rhs = scaled[:, products].transpose(1, 2, 0)
    ok = lhs == rhs
    witness = None
    if not ok.all():
        a, j, alpha = np.unravel_index(int(np.argmin(ok.ravel())), ok.shape)
        witness = [int(a), int(basis[j]), int(alpha)]
    check = CheckResult.from_outcome(
        "fp_linearity", witness is None, int(ok.size), witness, "witness is (a, b, alpha)"
    )
    return _report(A, CheckMode.full(), [check])


def verify_lambda_homomorphism(
    A: BraceTable,
    mode: CheckMode | None = None,
    *,
    threads: int = 1,
    budget: TimeBudget = UNLIMITED,
) -> VerificationReport:
    """lambda_{a o b} = lambda_a lambda_b as matrices."""
    mode = mode or CheckMode.full()
    mats = A.lambda_matrices

    def homomorphism(a, b):
        a, b = np.broadcast_arrays(a, b)
        composed = np.matmul(mats[a], mats[b]) % A.p
        return (mats[A.circle_array(a, b)] == composed).all(axis=(-1, -2))

    outcome = mode.run(homomorphism, A.order, 2, threads=threads, budget=budget, what="lambda_homomorphism")
    return _report(A, mode, [_result("lambda_homomorphism", outcome)])


def verify_exponent(A: BraceTable) -> VerificationReport:
    """Every element has circle order dividing p (expected whenever n + 1 <= p)."""
    elements = np.arange(A.order)
    power = np.zeros(A.order, dtype=np.int64)
    for _ in range(A.p):
        power = A.circle_array(power, elements)
    ok = power == 0
    witness = None if ok.all() else [int(np.argmin(ok))]
    expected = A.n + 1 <= A.p
    detail = f"exponent p {'expected' if expected else 'not guaranteed'} for n={A.n}, p={A.p}"
    check = CheckResult.from_outcome("exponent", witness is None, A.order, witness, detail)
    return _report(A, CheckMode.full(), [check])
