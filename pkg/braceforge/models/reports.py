"""Report models produced by verification, classification and search."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class VerificationStatus(str, Enum):
    """Outcome of a single check."""

    PASSED = "passed"
    FAILED = "failed"


class CheckResult(BaseModel):
    """One named check with its first counterexample, if any."""

    name: str
    status: VerificationStatus
    checked: int = 0  # instances evaluated
    witness: list[int] | None = None  # element indices (or exponents) of the failure
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is VerificationStatus.PASSED

    @classmethod
    def from_outcome(
        cls, name: str, ok: bool, checked: int = 1, witness: Any = None, detail: str = ""
    ) -> "CheckResult":
        return cls(
            name=name,
            status=VerificationStatus.PASSED if ok else VerificationStatus.FAILED,
            checked=checked,
            witness=None if ok or witness is None else [int(w) for w in witness],
            detail=detail,
        )


class VerificationReport(BaseModel):
    """A batch of checks run against one subject."""

    subject: str
    mode: str  # "full", "sampled" or "structural"
    seed: int | None = None
    samples: int | None = None
    checks: list[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class ChainKind(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    STRONG = "strong"


class ChainReport(BaseModel):
    """Dimensions of a radical chain up to vanishing or stabilization."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ChainKind
    dims: list[int]
    stabilized_nonzero: bool
    terms: list[Any] = Field(default=[], exclude=True)  # chains.Subspace per step

    @property
    def reaches_zero(self) -> bool:
        return self.dims[-1] == 0


class NilpotencyFlags(BaseModel):
    left: bool
    right: bool
    strong: bool


class GroupId(str, Enum):
    """Identification of the circle group of a brace of order p^4."""

    ABELIAN = "abelian"
    XIV = "XIV"
    XV = "XV"
    OTHER = "other"


class CenterReport(BaseModel):
    size: int
    elements: list[int]
    basis: list[list[int]] | None = None  # set when the center is a subspace


class IdealEntry(BaseModel):
    dim: int
    basis: list[list[int]]
    is_ideal: bool = True


class IdealLatticeReport(BaseModel):
    ideals: list[IdealEntry]
    prime: bool
    subspaces_examined: int


class Fingerprint(BaseModel):
    """Isomorphism invariants; equality is necessary for isomorphism."""

    left_dims: list[int]
    right_dims: list[int]
    strong_dims: list[int]
    nilpotency: NilpotencyFlags
    prime: bool | None = None  # None when the ideal lattice was not computed
    group: GroupId | None = None  # None unless |A| = p^4
    center_size: int
    ideal_dims: list[int] | None = None


class IsoWitness(BaseModel):
    """A brace isomorphism A -> B given on the basis of A."""

    images: dict[str, list[int]]
    matrix: list[list[int]]
    full_map: list[int] = Field(default=[], exclude=True)


class ClassificationReport(BaseModel):
    left_nilpotent: bool
    right_nilpotent: bool
    strongly_nilpotent: bool
    prime: bool | None
    group: GroupId | None
    center_size: int
    chain_dims: dict[str, list[int]]


class SweepEntry(BaseModel):
    params: dict[str, int]
    passed: bool
    failures: list[str] = []
    fingerprint: Fingerprint | None = None


class SweepReport(BaseModel):
    p: int
    mode: str
    total: int
    passed: int
    distinct_fingerprints: int
    entries: list[SweepEntry] = []


class RunReport(BaseModel):
    """Envelope written by every CLI command."""

    tool: str = "braceforge"
    version: str
    command: list[str]
    seed: int | None = None
    wall_time: float | None = None
    exit_code: int = 0
    result: Any = None


class PreLieNilpotency(BaseModel):
    left: bool
    right: bool
    left_dims: list[int]
    right_dims: list[int]
