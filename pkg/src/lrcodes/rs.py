"""Systematic Reed-Solomon erasure code over GF(2^p)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from .field import GF, SingularMatrixError


class InsufficientSymbolsError(ValueError):
    pass


class DecodeError(ValueError):
    """Received symbols are not consistent with any codeword."""


@dataclass(frozen=True)
class RsParams:
    n: int
    k: int
    field: GF = dc_field(default_factory=GF)
    generator: np.ndarray = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.n > self.field.order - 1:
            raise ValueError(f"n={self.n} exceeds q-1={self.field.order - 1} for {self.field}")
        object.__setattr__(self, "generator", systematic_generator(self.n, self.k, self.field))


def vandermonde(n: int, k: int, field: GF) -> np.ndarray:
    """Rows ``[1, a_i, a_i^2, ...]`` at the distinct points ``a_i = g^i``."""
    points = [field.pow(field.generator, i) for i in range(n)]
    return np.array([[field.pow(a, j) for j in range(k)] for a in points], dtype=np.int64)


def systematic_generator(n: int, k: int, field: GF) -> np.ndarray:
    v = vandermonde(n, k, field)
    g = field.matmul(v, field.inverse(v[:k]))
    g.setflags(write=False)
    return g


def is_mds(params: RsParams, samples: int | None = None, rng=None) -> bool:
    """Check every (or ``samples`` random) k x k row-submatrix is invertible."""
    f, g, n, k = params.field, params.generator, params.n, params.k
    if samples is None:
        subsets = itertools.combinations(range(n), k)
    else:
        rng = np.random.default_rng(rng)
        subsets = (sorted(rng.choice(n, size=k, replace=False)) for _ in range(samples))
    return all(f.rank(g[list(s)]) == k for s in subsets)


def rs_encode(params: RsParams, message) -> np.ndarray:
    """Codeword ``G @ message``; ``message`` is ``(k,)`` or ``(k, L)``."""
    m = params.field.asarray(message)
    if m.shape[0] != params.k:
        raise ValueError(f"message length {m.shape[0]} != k={params.k}")
    return params.field.matmul(params.generator, m)


def rs_decode(params: RsParams, received: Mapping[int, object]) -> np.ndarray:
    """Recover the message from ``{position: symbol}`` with at least k entries.

    Symbols may be scalars or equal-length vectors. Positions beyond the first
    k are used to check consistency.
    """
    f, k = params.field, params.k
    positions = sorted(received)
    if len(positions) < k:
        raise InsufficientSymbolsError(f"need {k} positions, got {len(positions)}")
    if positions[0] < 0 or positions[-1] >= params.n:
        raise ValueError(f"positions must lie in [0, {params.n})")
    values = f.asarray([received[p] for p in positions])
    use = positions[:k]
    try:
        msg = f.solve(params.generator[use], values[:k])
    except SingularMatrixError as exc:  # pragma: no cover - MDS guarantees invertibility
        raise DecodeError(str(exc)) from exc
    if len(positions) > k:
        check = f.matmul(params.generator[positions[k:]], msg)
        if not np.array_equal(check, values[k:]):
            raise DecodeError("received symbols are inconsistent (corruption, not erasure)")
    return msg
