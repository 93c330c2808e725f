"""Command-line entry point: python -m braceforge.main <command> ..."""

import argparse
import sys
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

from loguru import logger

from braceforge.algebra.analysis import brace_isomorphic, is_isomorphism
from braceforge.algebra.axioms import (
    verify_brace_axioms,
    verify_exponent,
    verify_fp_linearity,
    verify_lambda_homomorphism,
)
from braceforge.algebra.chains import classify_nilpotency, left_chain, right_chain, strong_chain
from braceforge.algebra.family_xv import (
    build_brace,
    family_parameters,
    generator_matrices,
    verify_cocycle,
    verify_filtration_properties,
    verify_generator_relations,
    verify_multiplicative_table,
    verify_presentation_constraints,
)
from braceforge.algebra.hol import (
    conjugate_brace,
    embed,
    is_brace_automorphism,
    is_regular,
    iter_conjugate_braces,
)
from braceforge.algebra.ideals import ideal_lattice
from braceforge.algebra.prelie import PreLieAlgebra, prelie_nilpotency, verify_prelie_identity
from braceforge.algebra.runner import CheckMode, TimeBudget
from braceforge.algebra.ybe import verify_braid, verify_involutive, verify_nondegenerate
from braceforge.config.settings import Settings, get_settings
from braceforge.errors import BraceForgeError, BudgetExceeded
from braceforge.generators.brace_file import brace_json, family_document, table_document
from braceforge.generators.csv_table import write_circle_csv
from braceforge.generators.markdown import (
    generate_classification_markdown,
    generate_sweep_markdown,
    generate_verification_markdown,
)
from braceforge.generators.report import build_report, report_json
from braceforge.models.params import FamilyParams
from braceforge.models.reports import VerificationReport
from braceforge.parsers.brace_loader import load_brace
from braceforge.parsers.gamma_loader import load_gamma
from braceforge.services.orchestrator import BraceOrchestrator

# braid checks default to this many triples unless --full or --samples is given
YBE_DEFAULT_SAMPLES = 1_000_000


class Outcome:
    """What a command hands back to main: a JSON-able result, an exit code and optional Markdown."""

    def __init__(self, result: Any, exit_code: int = 0, markdown: str | None = None, seed: int | None = None):
        self.result = result
        self.exit_code = exit_code
        self.markdown = markdown
        self.seed = seed


def build_argparser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write the report to this path instead of stdout.")
    common.add_argument("--format", choices=["json", "markdown"], default="json")
    common.add_argument("--threads", type=int, help="Worker threads (default: BRACEFORGE_THREADS or all cores).")
    common.add_argument("--time-budget", type=float, help="Wall-clock budget in seconds.")
    common.add_argument("--seed", type=int, help="Seed for sampled checks.")
    common.add_argument("--samples", type=int, help="Number of sampled tuples per check.")
    common.add_argument("--full", action="store_true", help="Check every tuple instead of sampling.")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    common.add_argument("--deterministic", action="store_true", help="Omit wall time from the report.")

    parser = argparse.ArgumentParser(
        prog="braceforge", description="Construct and analyse finite F_p-braces."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--p", type=int, required=True, help="Prime greater than 3.")
        p.add_argument("--y", type=int, required=required, default=1)
        p.add_argument("--i", type=int, default=0)
        p.add_argument("--k", type=int, default=0)

    construct = sub.add_parser("construct", parents=[common], help="Build a family brace file.")
    family_args(construct)
    construct.add_argument("--expand", action="store_true", help="Write the raw lambda table.")
    construct.add_argument("--csv", help="Also write the circle table as CSV.")

    for name, text in (
        ("classify", "Nilpotency, primeness and circle group of a brace."),
        ("verify", "Brace axioms and, for family braces, the construction checks."),
        ("chains", "Left, right and strong radical chains."),
        ("ideals", "Ideal lattice and prime test."),
        ("ybe", "Yang-Baxter solution checks."),
    ):
        cmd = sub.add_parser(name, parents=[common], help=text)
        cmd.add_argument("brace", help="Brace JSON file.")

    sweep = sub.add_parser("sweep", parents=[common], help="Check every family member at a prime.")
    sweep.add_argument("--p", type=int, required=True)
    sweep.add_argument("--mode", choices=["full", "sampled"], default="sampled")
    sweep.add_argument("--param-samples", type=int, help="Parameter triples to sample when p > 7.")

    iso = sub.add_parser("iso", parents=[common], help="Search for a brace isomorphism.")
    iso.add_argument("a")
    iso.add_argument("b")

    prelie = sub.add_parser("prelie", parents=[common], help="Check the pre-Lie algebra example.")
    prelie.add_argument("--p", type=int, required=True)
    prelie.add_argument("--y", type=int, default=1)
    prelie.add_argument("--j", type=int, default=0)
    prelie.add_argument("--k", type=int, default=0)

    hol = sub.add_parser("hol", parents=[common], help="Holomorph embedding and conjugated braces.")
    hol.add_argument("brace")
    hol.add_argument("--gamma", help="Gamma JSON file {p, n, matrix}.")
    hol.add_argument("--cosets", type=int, default=0, help="Examine this many gammas for distinct conjugates.")
    hol.add_argument("--conjugated-out", help="Write the conjugated brace table here.")

    relations = sub.add_parser("matrix-relations", parents=[common], help="Check the generator matrix relations.")
    family_args(relations, required=False)
    relations.add_argument("--all", action="store_true", help="Every (y, i, k) at this prime.")

    return parser


def _settings(args: argparse.Namespace) -> Settings:
    base = get_settings()
    overrides = {
        "threads": args.threads,
        "time_budget": args.time_budget,
        "seed": args.seed,
        "samples": args.samples,
    }
    return base.model_copy(update={k: v for k, v in overrides.items() if v is not None})


def _mode(args: argparse.Namespace, settings: Settings, order: int, default_samples: int | None = None) -> CheckMode:
    if args.full:
        return CheckMode.full()
    if args.samples is not None:
        return CheckMode.sampled(args.samples, settings.seed)
    if default_samples is not None:
        return CheckMode.sampled(default_samples, settings.seed)
    return CheckMode.auto(order, settings.samples, settings.seed)


def _bundle(reports: list[VerificationReport]) -> dict[str, Any]:
    passed = all(r.passed for r in reports)
    return {"passed": passed, "reports": [r.model_dump(mode="json") for r in reports]}


def _verification_outcome(reports: list[VerificationReport], mode: CheckMode) -> Outcome:
    bundle = _bundle(reports)
    markdown = "\n".join(generate_verification_markdown(r) for r in reports)
    return Outcome(bundle, 0 if bundle["passed"] else 3, markdown, mode.seed)


def cmd_construct(args: argparse.Namespace, settings: Settings) -> Outcome:
    params = FamilyParams.create(args.p, args.y, args.i, args.k)
    document = family_document(params)
    if args.expand or args.csv:
        A = build_brace(params)
        if args.expand:
            document = table_document(A)
        if args.csv:
            write_circle_csv(A, args.csv)
            logger.info(f"Wrote circle table to {args.csv}")
    text = brace_json(document)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {document.kind} brace to {args.out}")
        return Outcome({"kind": document.kind, "params": params.model_dump(), "path": args.out})
    sys.stdout.write(text + "\n")
    return Outcome(None)


def cmd_classify(args: argparse.Namespace, settings: Settings) -> Outcome:
    A = load_brace(args.brace)
    mode = _mode(args, settings, A.order)
    result = BraceOrchestrator(settings).classify(A, mode)
    if not result.success:
        payload = {"error": result.error}
        if result.verification is not None:
            payload["verification"] = result.verification.model_dump(mode="json")
        return Outcome(payload, result.exit_code, seed=mode.seed)
    markdown = generate_classification_markdown(A.subject, result.classification)
    return Outcome(result.classification, 0, markdown, mode.seed)


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> Outcome:
    result = BraceOrchestrator(settings).sweep(args.p, args.mode, args.param_samples)
    if result.report is None:
        return Outcome({"error": result.error}, result.exit_code, seed=settings.seed)
    markdown = generate_sweep_markdown(result.report)
    return Outcome(result.report, result.exit_code, markdown, settings.seed)


def cmd_verify(args: argparse.Namespace, settings: Settings) -> Outcome:
    A = load_brace(args.brace)
    mode = _mode(args, settings, A.order)
    budget = TimeBudget(settings.time_budget)
    reports = [
        verify_brace_axioms(A, mode, threads=settings.threads, budget=budget),
        verify_fp_linearity(A),
        verify_lambda_homomorphism(A, mode, threads=settings.threads, budget=budget),
        verify_exponent(A),
    ]
    if A.meta is not None:
        mats = generator_matrices(A.meta)
        reports += [
            verify_generator_relations(mats),
            verify_cocycle(mats, mode, threads=settings.threads, budget=budget),
            verify_multiplicative_table(A, A.meta),
            verify_presentation_constraints(A),
            verify_filtration_properties(A),
        ]
    return _verification_outcome(reports, mode)


def cmd_chains(args: argparse.Namespace, settings: Settings) -> Outcome:
    A = load_brace(args.brace)
    result = {
        "left": left_chain(A).model_dump(mode="json"),
        "right": right_chain(A).model_dump(mode="json"),
        "strong": strong_chain(A).model_dump(mode="json"),
        "nilpotency": classify_nilpotency(A).model_dump(),
    }
    return Outcome(result)


def cmd_ideals(args: argparse.Namespace, settings: Settings) -> Outcome:
    return Outcome(ideal_lattice(load_brace(args.brace)))


def cmd_iso(args: argparse.Namespace, settings: Settings) -> Outcome:
    A, B = load_brace(args.a), load_brace(args.b)
    witness = brace_isomorphic(A, B, settings.iso_node_limit)
    result: dict[str, Any] = {"isomorphic": witness is not None}
    if witness is not None:
        result["witness"] = witness.model_dump()
    return Outcome(result)


def cmd_ybe(args: argparse.Namespace, settings: Settings) -> Outcome:
    A = load_brace(args.brace)
    mode = _mode(args, settings, A.order, default_samples=YBE_DEFAULT_SAMPLES)
    budget = TimeBudget(settings.time_budget)
    reports = [
        verify_involutive(A),
        verify_nondegenerate(A),
        verify_braid(A, mode, threads=settings.threads, budget=budget),
    ]
    return _verification_outcome(reports, mode)


def cmd_prelie(args: argparse.Namespace, settings: Settings) -> Outcome:
    V = PreLieAlgebra.example(args.p, args.y, args.j, args.k)
    identity = verify_prelie_identity(V)
    nilpotency = prelie_nilpotency(V)
    result = {"identity": identity.model_dump(mode="json"), "nilpotency": nilpotency.model_dump()}
    return Outcome(result, 0 if identity.passed else 3)


def cmd_hol(args: argparse.Namespace, settings: Settings) -> Outcome:
    A = load_brace(args.brace)
    regular = is_regular(embed(A), A.p, A.n)
    result: dict[str, Any] = {"embedding_closed": True, "regular": regular}
    exit_code = 0 if regular else 3

    if args.gamma:
        gamma = load_gamma(args.gamma)
        conjugated = conjugate_brace(A, gamma)
        mode = _mode(args, settings, A.order)
        axioms = verify_brace_axioms(conjugated, mode, threads=settings.threads)
        result["gamma"] = {
            "automorphism": is_brace_automorphism(A, gamma),
            "conjugated_axioms": axioms.model_dump(mode="json"),
            "gamma_is_isomorphism": is_isomorphism(conjugated, A, gamma),
        }
        if not axioms.passed:
            exit_code = 3
        if args.conjugated_out:
            Path(args.conjugated_out).write_text(brace_json(table_document(conjugated)) + "\n", encoding="utf-8")

    if args.cosets:
        gammas = [g.tolist() for g, _ in iter_conjugate_braces(A, args.cosets)]
        result["cosets"] = {"examined": args.cosets, "distinct": len(gammas), "representatives": gammas}
    return Outcome(result, exit_code)


def cmd_matrix_relations(args: argparse.Namespace, settings: Settings) -> Outcome:
    if args.all:
        params_list = list(family_parameters(args.p))
    else:
        params_list = [FamilyParams.create(args.p, args.y, args.i, args.k)]
    entries = []
    for params in params_list:
        report = verify_generator_relations(generator_matrices(params))
        entries.append({"params": params.model_dump(), "passed": report.passed, "report": report.model_dump(mode="json")})
    passed = all(e["passed"] for e in entries)
    return Outcome({"passed": passed, "entries": entries}, 0 if passed else 3)


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], Outcome]] = {
    "construct": cmd_construct,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "chains": cmd_chains,
    "ideals": cmd_ideals,
    "iso": cmd_iso,
    "ybe": cmd_ybe,
    "prelie": cmd_prelie,
    "hol": cmd_hol,
    "matrix-relations": cmd_matrix_relations,
}


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_argparser().parse_args(argv)
    settings = _settings(args)
    configure_logging("DEBUG" if args.verbose else settings.log_level)

    started = time.monotonic()
    try:
        outcome = COMMANDS[args.command](args, settings)
    except BudgetExceeded as e:
        logger.warning(str(e))
        partial = e.partial.model_dump(mode="json") if isinstance(e.partial, VerificationReport) else e.partial
        outcome = Outcome({"error": str(e), "partial": partial}, e.exit_code)
    except BraceForgeError as e:
        logger.error(str(e))
        outcome = Outcome({"error": str(e), "witness": e.witness}, e.exit_code)
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        outcome = Outcome({"error": str(e)}, 1)

    if args.command == "construct" and outcome.exit_code == 0 and outcome.result is None:
        return 0
    # construct keeps stdout for the brace document; its envelope follows the written file
    out = None if args.command == "construct" else args.out
    wall_time = None if args.deterministic else time.monotonic() - started
    seed = outcome.seed if outcome.seed is not None else settings.seed
    if args.format == "markdown" and outcome.markdown is not None:
        _emit(outcome.markdown, out)
    else:
        report = build_report(argv, outcome.result, seed=seed, exit_code=outcome.exit_code, wall_time=wall_time)
        _emit(report_json(report, args.deterministic), out)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
