"""Orchestrator service that runs the classification and sweep pipelines."""

from dataclasses import dataclass, field
from typing import Callable

from loguru import logger

from braceforge.algebra.analysis import invariant_fingerprint
from braceforge.algebra.axioms import verify_brace_axioms
from braceforge.algebra.brace import BraceTable
from braceforge.algebra.chains import left_chain, right_chain, strong_chain
from braceforge.algebra.family_xv import (
    build_brace,
    family_parameters,
    generator_matrices,
    sample_parameters,
    verify_cocycle,
    verify_generator_relations,
    verify_multiplicative_table,
    witness_not_right_nilpotent,
)
from braceforge.algebra.ideals import (
    all_ideals,
    circle_center,
    count_subspaces,
    enumerate_subspaces,
    identify_group,
    is_prime,
)
from braceforge.algebra.runner import CheckMode, TimeBudget
from braceforge.config.settings import Settings, get_settings
from braceforge.errors import BraceForgeError, BudgetExceeded, InvalidParams, TooLarge
from braceforge.models.params import FamilyParams
from braceforge.models.reports import (
    CheckResult,
    ClassificationReport,
    SweepEntry,
    SweepReport,
    VerificationReport,
)

ProgressCallback = Callable[[str, float], None]

# parameter triples checked per sweep once p is too large to cover them all
DEFAULT_SWEEP_SAMPLE = 20


@dataclass
class ClassificationResult:
    """Result of the classification pipeline."""

    success: bool
    verification: VerificationReport | None = None
    classification: ClassificationReport | None = None
    error: str | None = None
    exit_code: int = 0


@dataclass
class SweepResult:
    """Result of a parameter sweep over the family."""

    success: bool
    report: SweepReport | None = None
    error: str | None = None
    exit_code: int = 0
    reports: list[VerificationReport] = field(default_factory=list)


def _first_failure(report: VerificationReport) -> str:
    failure = report.failures[0]
    return f"{failure.name} fails at {failure.witness}"


class BraceOrchestrator:
    """Coordinates verification, chains, ideals and group identification."""

    def __init__(
        self,
        settings: Settings | None = None,
        threads: int | None = None,
        time_budget: float | None = None,
    ):
        """
        Initialize the orchestrator.

        Args:
            settings: Application settings. If None, uses get_settings().
            threads: Worker threads for full checks (overrides settings)
            time_budget: Wall-clock budget in seconds (overrides settings)
        """
        self.settings = settings or get_settings()
        self.threads = threads or self.settings.threads
        self.time_budget = time_budget if time_budget is not None else self.settings.time_budget

    def _budget(self) -> TimeBudget:
        return TimeBudget(self.time_budget)

    def classify(
        self,
        A: BraceTable,
        mode: CheckMode | None = None,
        on_progress: ProgressCallback | None = None,
    ) -> ClassificationResult:
        """
        Verify the brace axioms, then compute chains, ideals and the circle group.

        Args:
            A: Brace to classify
            mode: Axiom check mode (default: auto for the brace's order)
            on_progress: Optional callback for progress updates (message, percentage)

        Returns:
            ClassificationResult; on an axiom failure ``success`` is False with exit code 3
        """

        def update_progress(message: str, pct: float):
            logger.info(f"[{pct:.0%}] {message}")
            if on_progress:
                on_progress(message, pct)

        mode = mode or CheckMode.auto(A.order, self.settings.samples, self.settings.seed)
        budget = self._budget()
        verification: VerificationReport | None = None
        try:
            # Step 1: Axioms
            update_progress("Verifying brace axioms...", 0.1)
            verification = verify_brace_axioms(A, mode, threads=self.threads, budget=budget)
            if not verification.passed:
                error = _first_failure(verification)
                logger.error(f"Axiom check failed: {error}")
                return ClassificationResult(
                    success=False, verification=verification, error=error, exit_code=3
                )

            # Step 2: Radical chains
            update_progress("Computing radical chains...", 0.4)
            left, right, strong = left_chain(A), right_chain(A), strong_chain(A)
            logger.info(f"Chain dims: left {left.dims}, right {right.dims}, strong {strong.dims}")

            # Step 3: Ideals
            update_progress("Enumerating ideals...", 0.6)
            prime = None
            try:
                subspaces = enumerate_subspaces(A.p, A.n, self.settings.max_subspaces)
                prime = is_prime(A, all_ideals(A, subspaces))
            except TooLarge as e:
                logger.warning(f"Skipping ideal lattice: {e}")

            # Step 4: Circle group
            update_progress("Identifying the circle group...", 0.85)
            center = circle_center(A)
            group = identify_group(A) if A.n == 4 else None

            update_progress("Complete!", 1.0)
            return ClassificationResult(
                success=True,
                verification=verification,
                classification=ClassificationReport(
                    left_nilpotent=left.reaches_zero,
                    right_nilpotent=right.reaches_zero,
                    strongly_nilpotent=strong.reaches_zero,
                    prime=prime,
                    group=group,
                    center_size=center.size,
                    chain_dims={"left": left.dims, "right": right.dims, "strong": strong.dims},
                ),
            )

        except BudgetExceeded as e:
            logger.warning(f"Classification stopped: {e}")
            if isinstance(e.partial, VerificationReport):
                verification = e.partial
            return ClassificationResult(
                success=False, verification=verification, error=str(e), exit_code=e.exit_code
            )
        except BraceForgeError as e:
            logger.error(f"Classification failed: {e}")
            return ClassificationResult(success=False, error=str(e), exit_code=e.exit_code)
        except Exception as e:
            logger.error(f"Classification failed: {e}")
            return ClassificationResult(success=False, error=str(e), exit_code=1)

    def verify_family_member(
        self, params: FamilyParams, mode: CheckMode
    ) -> tuple[BraceTable, list[VerificationReport]]:
        """Matrix relations, cocycle, multiplicative table, axioms and the non-right-nilpotency witness."""
        budget = self._budget()
        mats = generator_matrices(params)
        A = build_brace(params)
        witness = CheckResult.from_outcome(
            "not_right_nilpotent_witness", witness_not_right_nilpotent(A, params)
        )
        reports = [
            verify_generator_relations(mats),
            verify_cocycle(mats, mode, threads=self.threads, budget=budget),
            verify_multiplicative_table(A, params),
            verify_brace_axioms(A, mode, threads=self.threads, budget=budget),
            VerificationReport(subject=A.subject, mode="structural", checks=[witness]),
        ]
        return A, reports

    def sweep(
        self,
        p: int,
        mode: str = "sampled",
        parameter_samples: int | None = None,
        on_progress: ProgressCallback | None = None,
    ) -> SweepResult:
        """
        Construct, verify and fingerprint every family member at the prime p.

        All (y, i, k) are covered for p <= 7; larger primes use a seeded
        sample of parameter triples.

        Args:
            p: Prime greater than 3
            mode: "full" or "sampled" triple checks
            parameter_samples: Number of triples to sample for p > 7
            on_progress: Optional callback for progress updates (message, percentage)

        Returns:
            SweepResult with one entry per parameter triple
        """
        try:
            if p <= 7:
                params_list = list(family_parameters(p))
            else:
                FamilyParams.create(p, 1)
                params_list = sample_parameters(
                    p, parameter_samples or DEFAULT_SWEEP_SAMPLE, self.settings.seed
                )
        except InvalidParams as e:
            logger.error(f"Sweep failed: {e}")
            return SweepResult(success=False, error=str(e), exit_code=e.exit_code)

        if mode == "full":
            check_mode = CheckMode.full()
        else:
            check_mode = CheckMode.sampled(self.settings.samples, self.settings.seed)

        with_ideals = count_subspaces(p, 4) <= self.settings.max_subspaces
        if not with_ideals:
            logger.warning(f"F_{p}^4 has too many subspaces; fingerprints omit the ideal lattice")
        entries: list[SweepEntry] = []
        fingerprints: set[str] = set()
        all_reports: list[VerificationReport] = []
        total = len(params_list)
        try:
            for done, params in enumerate(params_list):
                pct = done / total
                logger.info(f"[{pct:.0%}] Checking {params.label()}")
                if on_progress:
                    on_progress(params.label(), pct)

                A, reports = self.verify_family_member(params, check_mode)
                failures = [c.name for report in reports for c in report.failures]
                fingerprint = invariant_fingerprint(A, with_ideals=with_ideals)
                fingerprints.add(fingerprint.model_dump_json())
                all_reports.extend(reports)
                entries.append(
                    SweepEntry(
                        params={"y": params.y, "i": params.i, "k": params.k},
                        passed=not failures,
                        failures=failures,
                        fingerprint=fingerprint,
                    )
                )
        except BraceForgeError as e:
            logger.error(f"Sweep stopped at entry {len(entries)}: {e}")
            return SweepResult(success=False, error=str(e), exit_code=e.exit_code)

        passed = sum(entry.passed for entry in entries)
        report = SweepReport(
            p=p,
            mode=check_mode.kind,
            total=total,
            passed=passed,
            distinct_fingerprints=len(fingerprints),
            entries=entries,
        )
        logger.info(f"Sweep at p={p}: {passed}/{total} passed, {len(fingerprints)} fingerprints")
        success = passed == total
        return SweepResult(
            success=success,
            report=report,
            error=None if success else f"{total - passed} parameter triples failed",
            exit_code=0 if success else 3,
            reports=all_reports,
        )
