"""Parameter models for the group-XV brace family."""

from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from braceforge.algebra.fp_linalg import check_prime
from braceforge.errors import InvalidParams


class FamilyParams(BaseModel):
    """Selects one brace of the family: prime p > 3 and i, k, y in F_p, y != 0."""

    model_config = ConfigDict(frozen=True)

    p: int
    y: int
    i: int = 0
    k: int = 0

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "p" not in data:
            return data
        p = check_prime(data["p"], above=3)
        reduced = {key: int(data.get(key, 0)) % p for key in ("y", "i", "k")}
        if reduced["y"] == 0:
            raise ValueError(f"y must be nonzero mod {p}")
        return {**data, "p": p, **reduced}

    @classmethod
    def create(cls, p: int, y: int, i: int = 0, k: int = 0) -> "FamilyParams":
        """Validate and build, raising InvalidParams instead of a ValidationError."""
        try:
            return cls(p=p, y=y, i=i, k=k)
        except ValidationError as e:
            message = "; ".join(err["msg"].removeprefix("Value error, ") for err in e.errors())
            raise InvalidParams(message) from e

    def label(self) -> str:
        return f"p={self.p} y={self.y} i={self.i} k={self.k}"


class NormalForm(BaseModel):
    """Exponents of the unique expression R^alpha o Q^beta o P^gamma o S^xi."""

    model_config = ConfigDict(frozen=True)

    alpha: int
    beta: int
    gamma: int
    xi: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.xi)
