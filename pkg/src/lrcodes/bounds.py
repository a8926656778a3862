"""Distance/locality/storage trade-off and the greedy set-building witness."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .codeview import GeneratorView
from .lrc import CodeParams


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def distance_bound(n: int, r: int, M: int, alpha: int) -> int:
    """Largest possible minimum distance of an (n, r, d, M, alpha) LRC.

    ``n - ceil(M/alpha) - ceil(M/(r*alpha)) + 2``; holds for linear and
    nonlinear codes alike.
    """
    if min(n, r, M, alpha) < 1:
        raise ValueError(f"all of n, r, M, alpha must be positive, got {(n, r, M, alpha)}")
    return n - ceil_div(M, alpha) - ceil_div(M, r * alpha) + 2


def scalar_bound(n: int, k: int, r: int) -> int:
    """Scalar-code specialisation (M = k, alpha = 1)."""
    if not 1 <= k <= n or r < 1:
        raise ValueError(f"need 1 <= k <= n and r >= 1, got {(n, k, r)}")
    return distance_bound(n, r, k, 1)


def effective_rate(params: CodeParams) -> Fraction:
    return Fraction(params.M, params.n * params.alpha)


@dataclass
class WitnessStep:
    nodes: tuple[int, ...]  # symbols added in this step
    size: int  # s_i
    gain: int  # h_i, in symbols
    full_group: bool  # whole repair group added, not a partial subset


@dataclass
class WitnessResult:
    nodes: frozenset[int]
    bound: int  # d <= n - |S|
    entropy: int
    exit_line: int  # 9, 12, or 2 when every symbol was absorbed
    steps: list[WitnessStep] = field(default_factory=list)


def witness_search(gen: GeneratorView, groups: Sequence[Sequence[int]]) -> WitnessResult:
    """Greedily grow a set S of nodes with H(S) < M, one repair group at a time.

    Entropy is column rank. The next symbol is the lowest node id outside S;
    when its whole group would reach M, the largest subset of the group that
    stays below M is added (lexicographically first on ties) and the search
    stops. ``groups`` must partition the node ids.
    """
    n, M = gen.n, gen.M
    flat = sorted(j for g in groups for j in g)
    if flat != list(range(n)):
        raise ValueError("groups must partition range(n)")
    gamma = {j: tuple(sorted(g)) for g in groups for j in g}

    S: set[int] = set()
    H = 0
    steps: list[WitnessStep] = []
    while H < M:
        outside = [j for j in range(n) if j not in S]
        if not outside:
            return WitnessResult(frozenset(S), n - len(S), H, 2, steps)
        j = outside[0]
        new = [u for u in gamma[j] if u not in S]
        h_all = gen.entropy(S | set(new))
        if h_all < M:
            steps.append(WitnessStep(tuple(new), len(new), h_all - H, True))
            S.update(new)
            H = h_all
            continue
        best: tuple[int, ...] = ()
        best_h = H
        for size in range(len(new) - 1, 0, -1):
            for t in itertools.combinations(new, size):
                h = gen.entropy(S | set(t))
                if h < M:
                    best, best_h = t, h
                    break
            if best:
                break
        if not best:
            return WitnessResult(frozenset(S), n - len(S), H, 9, steps)
        steps.append(WitnessStep(best, len(best), best_h - H, False))
        S.update(best)
        return WitnessResult(frozenset(S), n - len(S), best_h, 12, steps)
    raise AssertionError("unreachable: loop exits only via return")


@dataclass
class CeilingReport:
    trials: int
    failures: list[tuple[str, tuple]]

    @property
    def ok(self) -> bool:
        return not self.failures


def ceiling_identities(n: int, m: int, x: Fraction) -> dict[str, tuple]:
    """Both sides of the three floor/ceiling identities used in the min-cut derivation."""
    return {
        "i": (n // m, ceil_div(n + 1, m) - 1),
        "ii": (math.ceil((x + m) / n), math.ceil(Fraction(math.ceil(x) + m, n))),
        "iii": (math.ceil(Fraction(math.ceil(x / m), n)), math.ceil(x / (n * m))),
    }


def check_ceiling_identities(trials: int, seed: int | None = 0) -> CeilingReport:
    rng = random.Random(seed)
    failures = []
    for _ in range(trials):
        n = rng.randint(1, 60)
        m = rng.randint(1, 60)
        x = Fraction(rng.randint(-5000, 5000), rng.randint(1, 97))
        for name, (lhs, rhs) in ceiling_identities(n, m, x).items():
            if lhs != rhs:
                failures.append((name, (n, m, x)))
    return CeilingReport(trials, failures)
