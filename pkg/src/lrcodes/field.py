"""Arithmetic over GF(2^p) backed by log/antilog tables.

Scalars are plain ``int`` values in ``[0, 2^p)``; vectors and matrices are
numpy integer arrays. :class:`FieldElement` wraps a scalar together with its
field for code that wants operator syntax and field-mismatch checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Conventional primitive polynomials (bitmask, including the x^p term).
DEFAULT_MODULI = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

MAX_BITS = 16


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class SingularMatrixError(ArithmeticError):
    """A linear system has no unique solution."""

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


def clmul(a: int, b: int) -> int:
    """Carryless (GF(2)[x]) product of two bitmask polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    """Remainder of ``a`` divided by ``m`` in GF(2)[x]."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(poly, d) == 0:
            return False
    return True


def schoolbook_mul(a: int, b: int, modulus: int) -> int:
    return poly_mod(clmul(a, b), modulus)


class GF:
    """The field GF(2^p) with a fixed irreducible modulus.

    Tables are built once at construction from a multiplicative generator
    (the modulus need only be irreducible, not primitive). Instances are
    immutable and cached, so ``GF(8)`` always returns the same object.
    """

    def __new__(cls, p: int = 8, modulus: int | None = None):
        if modulus is None:
            if p not in DEFAULT_MODULI:
                raise ValueError(f"bit width must be in 1..{MAX_BITS}, got {p}")
            modulus = DEFAULT_MODULI[p]
        return _make_field(int(p), int(modulus))

    def __init__(self, p: int = 8, modulus: int | None = None):
        pass  # all setup happens once in _make_field

    def _setup(self, p: int, modulus: int) -> None:
        if not 1 <= p <= MAX_BITS:
            raise ValueError(f"bit width must be in 1..{MAX_BITS}, got {p}")
        if modulus.bit_length() - 1 != p:
            raise ValueError(f"modulus {modulus:#x} does not have degree {p}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.p = p
        self.modulus = modulus
        self.order = 1 << p
        q1 = self.order - 1
        self.generator = self._find_generator()

        exp = np.zeros(2 * q1 + 1, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = schoolbook_mul(x, self.generator, modulus)
        exp[q1 : 2 * q1] = exp[:q1]
        self.exp = exp
        self.log = log
        self.dtype = np.uint8 if p <= 8 else np.uint16

        # full product table keeps bulk multiplication a single gather
        if p <= 8:
            a = np.arange(self.order)
            la = log[a]
            t = exp[(la[:, None] + la[None, :]) % q1]
            t[0, :] = 0
            t[:, 0] = 0
            self.table = t.astype(np.int64)
        else:
            self.table = None
        for arr in (self.exp, self.log) + ((self.table,) if self.table is not None else ()):
            arr.setflags(write=False)

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self._slow_pow(g, q1 // f) != 1 for f in factors):
                return g
        raise AssertionError("no generator found")  # unreachable for a field

    def _slow_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = schoolbook_mul(out, a, self.modulus)
            a = schoolbook_mul(a, a, self.modulus)
            e >>= 1
        return out

    def __repr__(self) -> str:
        return f"GF(2^{self.p}, modulus={self.modulus:#x})"

    def __reduce__(self):
        return (GF, (self.p, self.modulus))

    # scalar ops

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        return self._check(a) ^ self._check(b)

    sub = add

    def mul(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        a = self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = self._check(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if e == 0 else 0
        return int(self.exp[(self.log[a] * e) % (self.order - 1)])

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, self._check(value))

    # array ops

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise ValueError(f"array has entries outside {self}")
        return arr

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.order, size=shape, dtype=np.int64)

    def multiply(self, a, b) -> np.ndarray:
        """Elementwise product with numpy broadcasting."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return self.table[a, b]
        prod = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        squeeze = b.ndim == 1
        if squeeze:
            b = b[:, None]
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for i in range(a.shape[1]):
            out ^= self.multiply(a[:, i, None], b[None, i, :])
        return out[:, 0] if squeeze else out

    def row_reduce(self, mat) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the pivot columns.

        Pivots are taken as the first nonzero entry scanning rows top-down in
        each column, left to right.
        """
        m = np.array(mat, dtype=np.int64, copy=True)
        if m.ndim != 2:
            raise ValueError("expected a 2-D matrix")
        rows, cols = m.shape
        pivots = []
        row = 0
        for col in range(cols):
            if row == rows:
                break
            nz = np.nonzero(m[row:, col])[0]
            if nz.size == 0:
                continue
            pr = row + nz[0]
            if pr != row:
                m[[row, pr]] = m[[pr, row]]
            m[row] = self.multiply(self.inv(int(m[row, col])), m[row])
            factors = m[:, col].copy()
            factors[row] = 0
            hit = np.nonzero(factors)[0]
            if hit.size:
                m[hit] ^= self.multiply(factors[hit, None], m[row][None, :])
            pivots.append(col)
            row += 1
        return m, pivots

    def rank(self, mat) -> int:
        m = np.asarray(mat)
        if m.size == 0:
            return 0
        # eliminate along the shorter side
        if m.shape[0] > m.shape[1]:
            m = m.T
        return len(self.row_reduce(m)[1])

    def solve(self, mat, rhs) -> np.ndarray:
        """Solve ``mat @ x = rhs`` for a unique ``x``.

        ``rhs`` may be a vector or a matrix of right-hand sides. Raises
        :class:`SingularMatrixError` (carrying the rank) when the system is
        rank deficient or inconsistent.
        """
        a = np.asarray(mat, dtype=np.int64)
        b = np.asarray(rhs, dtype=np.int64)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        if a.ndim != 2 or a.shape[0] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
        rows, cols = a.shape
        red, pivots = self.row_reduce(np.hstack([a, b]))
        rank = sum(1 for p in pivots if p < cols)
        if rank < cols:
            raise SingularMatrixError(f"system has rank {rank} < {cols} unknowns", rank)
        if any(p >= cols for p in pivots) or np.any(red[cols:, cols:]):
            raise SingularMatrixError("inconsistent system", rank)
        x = red[:cols, cols:]
        return x[:, 0] if vec else x

    def solve_any(self, mat, rhs) -> np.ndarray:
        """One solution of ``mat @ x = rhs`` (free variables set to zero)."""
        a = np.asarray(mat, dtype=np.int64)
        b = np.asarray(rhs, dtype=np.int64)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        cols = a.shape[1]
        red, pivots = self.row_reduce(np.hstack([a, b]))
        if any(p >= cols for p in pivots):
            raise SingularMatrixError("inconsistent system", sum(p < cols for p in pivots))
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        for row, p in enumerate(pivots):
            x[p] = red[row, cols:]
        return x[:, 0] if vec else x

    def inverse(self, mat) -> np.ndarray:
        a = np.asarray(mat, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("inverse needs a square matrix")
        return self.solve(a, np.eye(a.shape[0], dtype=np.int64))


def gaussian_solve(field: GF, mat, rhs) -> np.ndarray:
    return field.solve(mat, rhs)


def rank(field: GF, mat) -> int:
    return field.rank(mat)


@lru_cache(maxsize=None)
def _make_field(p: int, modulus: int) -> GF:
    obj = object.__new__(GF)
    obj._setup(p, modulus)
    return obj


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldElement:
    field: GF
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field._check(other)

    def __add__(self, other):
        return FieldElement(self.field, self.value ^ self._other(other))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return self

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.value))
