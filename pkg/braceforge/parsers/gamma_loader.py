"""Loader for additive automorphisms given as {p, n, matrix}."""

from pathlib import Path
from typing import Any

from pydantic import ValidationError

from braceforge.algebra.fp_linalg import FpMatrix, check_prime
from braceforge.errors import InvalidParams, ParseError
from braceforge.models.brace_file import GammaFile

from .base import BaseLoader, read_json


class GammaLoader(BaseLoader[FpMatrix]):
    """Parses a row-major n x n matrix over F_p."""

    def supports(self, document: dict[str, Any]) -> bool:
        return {"p", "n", "matrix"} <= document.keys()

    def load(self, document: dict[str, Any]) -> FpMatrix:
        try:
            doc = GammaFile.model_validate(document)
        except ValidationError as e:
            raise ParseError(f"invalid gamma document: {e.error_count()} validation errors") from e
        try:
            check_prime(doc.p)
        except InvalidParams as e:
            raise ParseError(str(e)) from e
        if doc.n < 1 or len(doc.matrix) != doc.n * doc.n:
            raise ParseError(f"matrix must have {doc.n * doc.n} entries, got {len(doc.matrix)}")
        rows = [doc.matrix[r * doc.n : (r + 1) * doc.n] for r in range(doc.n)]
        return FpMatrix(rows, doc.p)


def load_gamma(path: str | Path) -> FpMatrix:
    document = read_json(path)
    loader = GammaLoader()
    if not loader.supports(document):
        raise ParseError(f"{path} needs the fields p, n and matrix")
    return loader.load(document)
