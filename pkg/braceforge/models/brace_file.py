"""On-disk document formats for braces and additive automorphisms."""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter


class FamilyBraceFile(BaseModel):
    """A family member, rebuilt from its parameters on load."""

    kind: Literal["family"] = "family"
    p: int
    y: int
    i: int = 0
    k: int = 0


class TableBraceFile(BaseModel):
    """A raw lambda table: one row-major n x n matrix per element index."""

    model_config = ConfigDict(populate_by_name=True)

    kind: Literal["table"] = "table"
    p: int
    n: int
    basis: list[str] = []
    lambdas: list[list[int]] = Field(alias="lambda")


BraceDocument = Annotated[
    Union[FamilyBraceFile, TableBraceFile], Field(discriminator="kind")
]
brace_document_adapter: TypeAdapter[BraceDocument] = TypeAdapter(BraceDocument)


class GammaFile(BaseModel):
    """An additive automorphism given as a row-major n x n matrix."""

    p: int
    n: int
    matrix: list[int]
