"""Exact scalar fields and the small amount of linear algebra the package needs.

Two fields are supported: prime fields ``GF(p)`` backed by ``int64`` numpy
arrays, and the rationals backed by ``object`` arrays of
:class:`fractions.Fraction`. All routines are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class PrimeField:
    """The finite field with ``p`` elements."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p

    name = property(lambda self: f"GF({self.p})")
    dtype = np.int64

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def scalar(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        flat = [self.scalar(x) for x in a.ravel()]
        return np.array(flat, dtype=np.int64).reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def elements(self) -> range:
        return range(self.p)


class RationalField:
    """The rational numbers with exact :class:`Fraction` arithmetic."""

    name = "QQ"
    dtype = object
    p = 0

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def scalar(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x) -> Fraction:
        return 1 / Fraction(x)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        flat = [Fraction(x) for x in a.ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def elements(self):
        raise ValueError("QQ is infinite")


Field = PrimeField | RationalField

QQ = RationalField()


def field_from_prime(p: int | None) -> Field:
    """``GF(p)`` for a prime ``p``, the rationals for ``0`` or ``None``."""
    return QQ if not p else PrimeField(p)


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return field.zeros((a.shape[0], b.shape[1]))
    return field.reduce(a @ b)


def rref(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = field.reduce(np.array(a, dtype=field.dtype, copy=True))
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if m[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = field.reduce(m[r] * field.inv(m[r, c]))
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col != 0)[0]
        if len(hit):
            m[hit] = field.reduce(m[hit] - np.outer(col[hit], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: Field, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(field, a)[1])


def nullspace(field: Field, a: np.ndarray) -> np.ndarray:
    """Columns spanning the right kernel of ``a``."""
    rows, cols = a.shape
    if rows == 0:
        return field.eye(cols)
    m, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = field.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = field.reduce(np.array([-m[r, f]], dtype=field.dtype))[0]
    return basis


def solve(field: Field, a: np.ndarray, b: Sequence) -> np.ndarray | None:
    """One solution of ``a x = b``, or ``None`` when inconsistent."""
    rows, cols = a.shape
    aug = field.zeros((rows, cols + 1))
    aug[:, :cols] = a
    aug[:, cols] = field.array(list(b))
    m, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = field.zeros(cols)
    for r, pc in enumerate(pivots):
        x[pc] = m[r, cols]
    return x


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a != 0)


def is_nilpotent(field: Field, a: np.ndarray) -> bool:
    n = a.shape[0]
    if n == 0:
        return True
    power = a
    for _ in range(n - 1):
        power = matmul(field, power, a)
    return is_zero(power)


def powers_rank_sequence(field: Field, a: np.ndarray) -> list[int]:
    """``[rank a^0, rank a^1, ...]`` until the rank stops changing."""
    n = a.shape[0]
    seq = [n]
    power = field.eye(n)
    while True:
        power = matmul(field, power, a)
        r = rank(field, power)
        if r == seq[-1]:
            return seq
        seq.append(r)


def block_diag(field: Field, blocks: Iterable[np.ndarray]) -> np.ndarray:
    blocks = list(blocks)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# Batched routines over GF(p), used by the exhaustive Jordan-form search.

def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        table[x] = pow(x, -1, p)
    return table


def batched_rank(a: np.ndarray, p: int) -> np.ndarray:
    """Ranks over GF(p) of a stack of matrices with shape ``(batch, m, n)``."""
    a = np.mod(a, p).astype(np.int64, copy=True)
    batch, m, n = a.shape
    row = np.zeros(batch, dtype=np.int64)
    if m == 0 or n == 0:
        return row
    inv = _inverse_table(p)
    idx_rows = np.arange(m)
    for c in range(n):
        live = row < m
        if not live.any():
            break
        mask = (a[:, :, c] != 0) & (idx_rows[None, :] >= row[:, None])
        has = mask.any(axis=1) & live
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        r = row[b]
        piv = np.argmax(mask[b], axis=1)
        top = a[b, r, :].copy()
        a[b, r, :] = a[b, piv, :]
        a[b, piv, :] = top
        scale = inv[a[b, r, c]]
        prow = np.mod(a[b, r, :] * scale[:, None], p)
        a[b, r, :] = prow
        factors = a[b, :, c].copy()
        factors[np.arange(len(b)), r] = 0
        a[b] = np.mod(a[b] - factors[:, :, None] * prow[:, None, :], p)
        row[b] += 1
    return row
