"""Prime-field scalar, vector and matrix arithmetic.

Scalars are plain Python ints reduced mod p. Vectors and matrices are numpy
``int64`` arrays; :class:`FpMatrix` wraps a read-only array together with its
modulus so that products and inverses can check compatibility.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from braceforge.errors import DimensionMismatch, InvalidParams, Singular, ZeroInverse


def is_prime(p: int) -> bool:
    """Trial-division primality test (p fits in 16 bits at desk scale)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int, above: int = 1) -> int:
    """Return ``p`` if it is a prime greater than ``above``, else raise InvalidParams."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise InvalidParams(f"p must be an integer, got {p!r}")
    p = int(p)
    if not is_prime(p) or p <= above:
        if above > 1:
            raise InvalidParams(f"p must be prime > {above}, got {p}")
        raise InvalidParams(f"p must be prime, got {p}")
    return p


def scalar_inv(a: int, p: int) -> int:
    """Inverse of ``a`` in F_p via the extended Euclidean algorithm."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_s % p


def indices_to_vectors(indices: np.ndarray | int, p: int, n: int) -> np.ndarray:
    """Base-p digits, most significant first: index -> coordinate vector(s)."""
    idx = np.asarray(indices, dtype=np.int64)
    powers = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // powers) % p


def vectors_to_indices(vectors: np.ndarray | Sequence[int], p: int) -> np.ndarray:
    """Inverse of :func:`indices_to_vectors` along the last axis."""
    vecs = np.asarray(vectors, dtype=np.int64) % p
    n = vecs.shape[-1]
    powers = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vecs @ powers


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("_entries", "p")

    def __init__(self, entries: np.ndarray | Iterable[Iterable[int]], p: int):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-dimensional, got shape {arr.shape}")
        arr %= p
        arr.setflags(write=False)
        self._entries = arr
        self.p = int(p)

    @classmethod
    def identity(cls, n: int, p: int) -> FpMatrix:
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> FpMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self) -> tuple[int, int]:
        return self._entries.shape  # type: ignore[return-value]

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def tolist(self) -> list[list[int]]:
        return self._entries.tolist()

    def apply(self, vector: Sequence[int] | np.ndarray) -> np.ndarray:
        """Matrix-vector product mod p."""
        vec = np.asarray(vector, dtype=np.int64)
        if vec.shape[-1] != self.shape[1]:
            raise DimensionMismatch(f"vector length {vec.shape[-1]} != {self.shape[1]} columns")
        return (vec @ self._entries.T) % self.p

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        return mat_mul(self, other)

    def __getitem__(self, key):
        return self._entries[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self._entries, other._entries))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._entries.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"


def _check_modulus(a: FpMatrix, b: FpMatrix) -> None:
    if a.p != b.p:
        raise DimensionMismatch(f"moduli differ: {a.p} vs {b.p}")


def mat_mul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Standard matrix product mod p."""
    _check_modulus(a, b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return FpMatrix(a.entries @ b.entries, a.p)


def rref(a: FpMatrix) -> FpMatrix:
    """Reduced row-echelon form; zero rows are kept at the bottom."""
    p = a.p
    m = np.array(a.entries, dtype=np.int64)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = (m[r] * scalar_inv(int(m[r, c]), p)) % p
        factors = m[:, c].copy()
        factors[r] = 0
        m = (m - np.outer(factors, m[r])) % p
        r += 1
    return FpMatrix(m, p)


def rank(a: FpMatrix) -> int:
    return int(np.count_nonzero(rref(a).entries.any(axis=1)))


def mat_inv(a: FpMatrix) -> FpMatrix:
    """Inverse by Gauss-Jordan elimination on ``[A | Id]``."""
    if not a.is_square:
        raise DimensionMismatch(f"cannot invert non-square matrix {a.shape}")
    n = a.shape[0]
    augmented = FpMatrix(np.hstack([a.entries, np.eye(n, dtype=np.int64)]), a.p)
    reduced = rref(augmented).entries
    if not np.array_equal(reduced[:, :n], np.eye(n, dtype=np.int64)):
        raise Singular(f"matrix is singular mod {a.p}")
    return FpMatrix(reduced[:, n:], a.p)


def mat_pow(a: FpMatrix, e: int) -> FpMatrix:
    """``a`` raised to a non-negative power by repeated squaring."""
    if not a.is_square:
        raise DimensionMismatch(f"cannot raise non-square matrix {a.shape} to a power")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    result = FpMatrix.identity(a.shape[0], a.p)
    base = a
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def batch_inverse(matrices: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert a stack of square matrices mod p in one vectorised elimination.

    Returns ``(inverses, ok)``; singular entries have ``ok`` False and a zero inverse.
    """
    mats = np.asarray(matrices, dtype=np.int64) % p
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise DimensionMismatch(f"expected a stack of square matrices, got shape {mats.shape}")
    count, n, _ = mats.shape
    work = np.concatenate([mats, np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape)], axis=2)
    inverses_mod_p = np.array([0] + [scalar_inv(a, p) for a in range(1, p)], dtype=np.int64)
    ok = np.ones(count, dtype=bool)
    rows = np.arange(count)
    for c in range(n):
        candidates = work[:, c:, c] != 0
        ok &= candidates.any(axis=1)
        pivot = c + np.argmax(candidates, axis=1)
        pivot_rows = work[rows, pivot].copy()
        work[rows, pivot] = work[:, c]
        work[:, c] = (pivot_rows * inverses_mod_p[pivot_rows[:, c]][:, None]) % p
        factors = work[:, :, c].copy()
        factors[:, c] = 0
        work = (work - factors[:, :, None] * work[:, c][:, None, :]) % p
    inverses = work[:, :, n:]
    inverses[~ok] = 0
    return inverses, ok
