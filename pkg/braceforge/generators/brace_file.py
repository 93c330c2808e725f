"""Serialisation of braces to the on-disk document formats."""

from braceforge.algebra.brace import BraceTable
from braceforge.models.brace_file import FamilyBraceFile, TableBraceFile
from braceforge.models.params import FamilyParams


def family_document(params: FamilyParams) -> FamilyBraceFile:
    return FamilyBraceFile(p=params.p, y=params.y, i=params.i, k=params.k)


def table_document(A: BraceTable) -> TableBraceFile:
    """Expanded form: every lambda matrix, row-major, in element-index order."""
    rows = A.lambda_matrices.reshape(A.order, A.n * A.n).tolist()
    return TableBraceFile(p=A.p, n=A.n, basis=list(A.basis_names), lambdas=rows)


def brace_json(document: FamilyBraceFile | TableBraceFile) -> str:
    return document.model_dump_json(by_alias=True, indent=2)
