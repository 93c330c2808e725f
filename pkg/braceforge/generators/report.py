"""The JSON envelope written by every command."""

from typing import Any

from pydantic import BaseModel

from braceforge import __version__
from braceforge.models.reports import RunReport


def build_report(
    command: list[str],
    result: Any,
    *,
    seed: int | None,
    exit_code: int,
    wall_time: float | None,
) -> RunReport:
    payload = result.model_dump(mode="json") if isinstance(result, BaseModel) else result
    return RunReport(
        version=__version__,
        command=command,
        seed=seed,
        wall_time=None if wall_time is None else round(wall_time, 3),
        exit_code=exit_code,
        result=payload,
    )


def report_json(report: RunReport, deterministic: bool = False) -> str:
    exclude = {"wall_time"} if deterministic else None
    return report.model_dump_json(indent=2, exclude=exclude) + "\n"
