"""Base loader interface."""

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Generic, TypeVar

from braceforge.errors import ParseError

T = TypeVar("T")


class BaseLoader(ABC, Generic[T]):
    """Abstract base class for JSON document loaders."""

    @abstractmethod
    def supports(self, document: dict[str, Any]) -> bool:
        """
        Check if this loader handles the given document.

        Args:
            document: Decoded JSON object

        Returns:
            True if this loader can build from the document
        """
        pass

    @abstractmethod
    def load(self, document: dict[str, Any]) -> T:
        """
        Build a value from a decoded document.

        Args:
            document: Decoded JSON object

        Returns:
            The validated value
        """
        pass


def read_json(path: str | Path) -> dict[str, Any]:
    """Read a JSON object from disk, raising ParseError on any I/O or syntax problem."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg} at line {e.lineno}") from e
    if not isinstance(document, dict):
        raise ParseError(f"{path} must contain a JSON object")
    return document
