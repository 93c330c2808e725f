import csv
import json

from braceforge import __version__
from braceforge.algebra.chains import classify_nilpotency
from braceforge.generators.csv_table import write_circle_csv
from braceforge.generators.markdown import (
    generate_classification_markdown,
    generate_sweep_markdown,
    generate_verification_markdown,
)
from braceforge.generators.report import build_report, report_json
from braceforge.models.reports import (
    CheckResult,
    ClassificationReport,
    GroupId,
    SweepEntry,
    SweepReport,
    VerificationReport,
)


def test_circle_csv(ring9, tmp_path):
    path = tmp_path / "circle.csv"
    write_circle_csv(ring9, path)
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["a\\b", *map(str, range(9))]
    assert len(rows) == 10
    assert rows[1 + 3][1 + 3] == "7"


def test_report_envelope():
    result = ClassificationReport(
        left_nilpotent=True,
        right_nilpotent=False,
        strongly_nilpotent=False,
        prime=True,
        group=GroupId.XV,
        center_size=5,
        chain_dims={"left": [4, 3, 2, 1, 0]},
    )
    report = build_report(["classify", "b.json"], result, seed=1, exit_code=0, wall_time=0.12345)
    data = json.loads(report_json(report))
    assert data["tool"] == "braceforge"
    assert data["version"] == __version__
    assert data["wall_time"] == 0.123
    assert data["result"]["group"] == "XV"


def test_deterministic_report_omits_wall_time():
    first = report_json(build_report(["x"], {"a": 1}, seed=3, exit_code=0, wall_time=1.5), True)
    second = report_json(build_report(["x"], {"a": 1}, seed=3, exit_code=0, wall_time=9.0), True)
    assert first == second
    assert "wall_time" not in json.loads(first)


def test_nested_models_are_dumped(family5):
    report = build_report(["chains"], classify_nilpotency(family5), seed=None, exit_code=0, wall_time=None)
    assert report.result == {"left": True, "right": False, "strong": False}


def test_classification_markdown():
    report = ClassificationReport(
        left_nilpotent=True,
        right_nilpotent=False,
        strongly_nilpotent=False,
        prime=None,
        group=GroupId.XV,
        center_size=5,
        chain_dims={"left": [4, 3, 2, 1, 0], "right": [4, 3, 3]},
    )
    text = generate_classification_markdown("family p=5 y=1 i=0 k=0", report)
    assert text.startswith("# Classification of family p=5 y=1 i=0 k=0")
    assert "| Left nilpotent | yes |" in text
    assert "| Prime | n/a |" in text


def test_verification_markdown_lists_failures():
    report = VerificationReport(
        subject="table p=3 n=2",
        mode="full",
        checks=[
            CheckResult.from_outcome("identity", True, 9),
            CheckResult.from_outcome("compatibility", False, 20, [1, 3, 0]),
        ],
    )
    text = generate_verification_markdown(report)
    assert "compatibility" in text
    assert "[1, 3, 0]" in text


def test_sweep_markdown():
    report = SweepReport(
        p=5,
        mode="sampled",
        total=2,
        passed=1,
        distinct_fingerprints=1,
        entries=[
            SweepEntry(params={"y": 1, "i": 0, "k": 0}, passed=True),
            SweepEntry(params={"y": 1, "i": 0, "k": 1}, passed=False, failures=["cocycle"]),
        ],
    )
    text = generate_sweep_markdown(report)
    assert "1/2" in text
    assert "cocycle" in text
