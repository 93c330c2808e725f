"""Loaders for brace documents of kind "family" and "table"."""

from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import ValidationError

from braceforge.algebra.axioms import verify_lambda_homomorphism
from braceforge.algebra.brace import BraceTable
from braceforge.algebra.family_xv import build_brace
from braceforge.errors import ParseError, RelationFailure
from braceforge.models.brace_file import FamilyBraceFile, TableBraceFile, brace_document_adapter
from braceforge.models.params import FamilyParams

from .base import BaseLoader, read_json


def _validation_message(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors()
    )


class FamilyLoader(BaseLoader[BraceTable]):
    """Rebuilds a family brace from its parameters."""

    def supports(self, document: dict[str, Any]) -> bool:
        return document.get("kind") == "family"

    def load(self, document: dict[str, Any]) -> BraceTable:
        try:
            doc = FamilyBraceFile.model_validate(document)
        except ValidationError as e:
            raise ParseError(f"invalid family brace document: {_validation_message(e)}") from e
        return build_brace(FamilyParams.create(doc.p, doc.y, doc.i, doc.k))


class TableLoader(BaseLoader[BraceTable]):
    """Reads a raw lambda table and validates it before use."""

    def __init__(self, check_homomorphism: bool = True):
        self.check_homomorphism = check_homomorphism

    def supports(self, document: dict[str, Any]) -> bool:
        return document.get("kind") == "table"

    def load(self, document: dict[str, Any]) -> BraceTable:
        """
        Build a BraceTable from one row-major n x n matrix per element.

        Args:
            document: Decoded kind="table" document

        Returns:
            BraceTable with lambda(0) = Id, invertible lambdas and, unless
            disabled, lambda a homomorphism

        Raises:
            ParseError: If the document is malformed
            RelationFailure: If a table invariant fails
        """
        try:
            doc = TableBraceFile.model_validate(document)
        except ValidationError as e:
            raise ParseError(f"invalid table brace document: {_validation_message(e)}") from e

        order = doc.p**doc.n
        if len(doc.lambdas) != order or any(len(row) != doc.n * doc.n for row in doc.lambdas):
            raise ParseError(
                f"lambda must list {order} matrices of {doc.n * doc.n} entries each"
            )
        matrices = np.array(doc.lambdas, dtype=np.int64).reshape(order, doc.n, doc.n)
        table = BraceTable(doc.p, doc.n, matrices, basis_names=doc.basis or None)
        table.check_invariants()

        if self.check_homomorphism:
            report = verify_lambda_homomorphism(table)
            if not report.passed:
                failure = report.failures[0]
                raise RelationFailure(
                    f"lambda is not a homomorphism at pair {failure.witness}",
                    witness=failure.witness,
                )
        logger.debug(f"Loaded lambda table p={doc.p} n={doc.n}")
        return table


LOADERS: list[BaseLoader[BraceTable]] = [FamilyLoader(), TableLoader()]


def parse_brace_document(document: dict[str, Any]) -> BraceTable:
    """Dispatch on the "kind" field."""
    try:
        brace_document_adapter.validate_python(document)
    except ValidationError as e:
        raise ParseError(f"unrecognised brace document: {_validation_message(e)}") from e
    for loader in LOADERS:
        if loader.supports(document):
            return loader.load(document)
    raise ParseError(f"no loader for kind {document.get('kind')!r}")


def load_brace(path: str | Path) -> BraceTable:
    """Read a brace file of either kind."""
    logger.info(f"Loading brace from {path}")
    return parse_brace_document(read_json(path))
