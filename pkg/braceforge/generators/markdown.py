"""Markdown rendering of classification, verification and sweep reports."""

from braceforge.models.reports import ClassificationReport, SweepReport, VerificationReport


def _flag(value: bool | None) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "no"


def generate_classification_markdown(subject: str, report: ClassificationReport) -> str:
    """
    Render a classification as a Markdown document.

    Args:
        subject: Label of the brace
        report: Classification results

    Returns:
        Markdown string
    """
    lines = [f"# Classification of {subject}", ""]

    lines.append("| Property | Value |")
    lines.append("|---|---|")
    lines.append(f"| Left nilpotent | {_flag(report.left_nilpotent)} |")
    lines.append(f"| Right nilpotent | {_flag(report.right_nilpotent)} |")
    lines.append(f"| Strongly nilpotent | {_flag(report.strongly_nilpotent)} |")
    lines.append(f"| Prime | {_flag(report.prime)} |")
    lines.append(f"| Circle group | {report.group.value if report.group else 'n/a'} |")
    lines.append(f"| Center size | {report.center_size} |")
    lines.append("")

    lines.append("## Radical chains")
    lines.append("")
    for kind, dims in report.chain_dims.items():
        lines.append(f"- **{kind}**: {' > '.join(str(d) for d in dims)}")
    lines.append("")

    return "\n".join(lines)


def generate_verification_markdown(report: VerificationReport) -> str:
    lines = [f"## {report.subject} ({report.mode})", ""]
    if report.seed is not None:
        lines.append(f"Seed {report.seed}, {report.samples} samples")
        lines.append("")
    for check in report.checks:
        mark = "PASS" if check.passed else "FAIL"
        line = f"- [{mark}] {check.name}"
        if check.witness:
            line += f" (witness {check.witness})"
        lines.append(line)
    lines.append("")
    return "\n".join(lines)


def generate_sweep_markdown(report: SweepReport) -> str:
    """Summary table of a parameter sweep followed by every failing entry."""
    lines = [f"# Family sweep at p = {report.p}", ""]
    lines.append(f"**{report.passed}/{report.total}** parameter triples passed ({report.mode} checks)")
    lines.append("")
    lines.append(f"Distinct fingerprints: {report.distinct_fingerprints}")
    lines.append("")

    failed = [entry for entry in report.entries if not entry.passed]
    if failed:
        lines.append("## Failures")
        lines.append("")
        for entry in failed:
            params = ", ".join(f"{k}={v}" for k, v in entry.params.items())
            lines.append(f"- {params}: {', '.join(entry.failures)}")
        lines.append("")

    return "\n".join(lines)
