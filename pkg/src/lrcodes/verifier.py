"""Exhaustive ground truth for distance and locality of small vector-linear codes."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .bounds import distance_bound
from .codeview import GeneratorView
from .field import SingularMatrixError
from .lrc import CodeParams, generator_view

log = logging.getLogger(__name__)

HARD_LIMIT = 24
PRACTICAL_LIMIT = 14


class SizeGuardError(ValueError):
    pass


def _guard(n: int, limit: int) -> None:
    if n > min(limit, HARD_LIMIT):
        raise SizeGuardError(f"n={n} exceeds the exhaustive-search limit {limit}")


def _candidates(n: int, size: int, seed: frozenset[int] | None) -> Iterator[tuple[int, ...]]:
    # supersets of the last rank-deficient set are the likeliest hits
    if seed is not None and len(seed) == size - 1:
        for j in range(n):
            if j not in seed:
                yield tuple(sorted(seed | {j}))
    yield from itertools.combinations(range(n), size)


def max_deficient_set(gen: GeneratorView, limit: int = HARD_LIMIT) -> frozenset[int]:
    """A largest node set whose joint rank is below M.

    Rank deficiency is closed under taking subsets, so sizes are scanned
    upward and the scan stops at the first size with no deficient set.
    """
    n, M = gen.n, gen.M
    _guard(n, limit)
    if gen.entropy(range(n)) < M:
        return frozenset(range(n))
    best: frozenset[int] = frozenset()
    for size in range(1, n):
        hit = next(
            (frozenset(s) for s in _candidates(n, size, best) if gen.entropy(s) < M),
            None,
        )
        if hit is None:
            break
        best = hit
    return best


def exact_distance(gen: GeneratorView, limit: int = HARD_LIMIT) -> int:
    """``n - max |S|`` over node sets S that cannot recover the file."""
    return gen.n - len(max_deficient_set(gen, limit))


def is_function_of(gen: GeneratorView, i: int, nodes: Iterable[int]) -> bool:
    nodes = set(nodes) - {i}
    return gen.entropy(nodes | {i}) == gen.entropy(nodes)


def exact_locality(gen: GeneratorView, i: int, limit: int = HARD_LIMIT) -> int:
    """Smallest number of other nodes whose columns span node ``i``'s columns.

    Returns ``n`` when node ``i`` is not determined by the rest at all.
    """
    n = gen.n
    _guard(n, limit)
    if not 0 <= i < n:
        raise ValueError(f"node {i} outside [0, {n})")
    others = [j for j in range(n) if j != i]
    if not is_function_of(gen, i, others):
        return n
    for size in range(0, n):
        for R in itertools.combinations(others, size):
            if is_function_of(gen, i, R):
                return size
    raise AssertionError("unreachable")


def repair_set(gen: GeneratorView, i: int, limit: int = HARD_LIMIT) -> tuple[int, ...] | None:
    """A smallest repair set for node ``i``, or None if there is none."""
    size = exact_locality(gen, i, limit)
    if size == gen.n:
        return None
    others = [j for j in range(gen.n) if j != i]
    return next(R for R in itertools.combinations(others, size) if is_function_of(gen, i, R))


def repair_coefficients(gen: GeneratorView, i: int, nodes: Iterable[int]) -> np.ndarray:
    """Matrix ``C`` with ``columns(nodes) @ C == columns(i)``.

    Raises :class:`~lrcodes.field.SingularMatrixError` when node ``i`` is not
    in the span of ``nodes``.
    """
    nodes = sorted(set(nodes) - {i})
    target = gen.columns([i])
    if not nodes:
        if np.any(target):
            raise SingularMatrixError("nonzero node has no empty repair set", 0)
        return np.zeros((0, gen.alpha), dtype=np.int64)
    return gen.field.solve_any(gen.columns(nodes), target)


def any_subset_decodes(gen: GeneratorView, size: int) -> bool:
    return all(
        gen.entropy(s) == gen.M for s in itertools.combinations(range(gen.n), size)
    )


@dataclass
class Certificate:
    params: CodeParams
    distance: int
    bound: int
    localities: list[int]
    any_k_decodes: bool
    bound_expected_tight: bool
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def locality(self) -> int:
        return max(self.localities)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def certify(params: CodeParams, limit: int = PRACTICAL_LIMIT) -> Certificate:
    """Build the explicit code for ``params`` and check distance, locality, decodability."""
    _guard(params.n, limit)
    gen = generator_view(params)
    d = exact_distance(gen, limit)
    bound = distance_bound(params.n, params.r, params.M, params.alpha)
    locs = [exact_locality(gen, i, limit) for i in range(params.n)]
    any_k = any_subset_decodes(gen, params.k)
    tight = params.bound_tight
    if tight:
        bound_ok = d == bound
    else:
        log.info("r+1 divides k: distance bound not expected to be tight for %s", params)
        bound_ok = d <= bound
    # any k nodes decode, so n-k+1 is guaranteed; the parity row can add more
    checks = {
        "bound": bound_ok,
        "distance": d >= params.n - params.k + 1,
        "locality": max(locs) == params.r,
        "any_k": any_k,
    }
    return Certificate(params, d, bound, locs, any_k, tight, checks)
