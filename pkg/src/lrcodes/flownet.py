"""Locality-aware information flow graph, its multicast capacity, and RLNC trials.

Vertices: source ``X``; one ``G<g>`` per repair group; ``Yin<i>``/``Yout<i>``
per storage node; one ``DC<t>`` per (n-d+1)-subset of nodes. Capacities are in
field symbols.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .bounds import ceil_div, distance_bound
from .codeview import GeneratorView
from .field import GF

log = logging.getLogger(__name__)


class CapacityRegimeError(ValueError):
    """Parameters fall outside the regime where the closed-form capacity holds."""


@dataclass
class FlowNet:
    n: int
    r: int
    M: int
    alpha: int
    d: int
    capacity: dict[tuple[str, str], int]
    collectors: list[tuple[int, ...]]

    @property
    def groups(self) -> list[list[int]]:
        g = self.r + 1
        return [list(range(b, b + g)) for b in range(0, self.n, g)]

    @property
    def vertices(self) -> list[str]:
        seen = {}
        for u, v in self.capacity:
            seen.setdefault(u, None)
            seen.setdefault(v, None)
        return list(seen)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.capacity:
            adj[u].append(v)
        return adj

    def write_edges(self, fh: TextIO) -> None:
        """One ``u v capacity`` line per edge."""
        for (u, v), c in self.capacity.items():
            fh.write(f"{u} {v} {c}\n")


def build_flownet(n: int, r: int, M: int, alpha: int) -> FlowNet:
    if min(n, r, M, alpha) < 1:
        raise ValueError("n, r, M, alpha must be positive")
    if n % (r + 1):
        raise ValueError(f"r+1={r + 1} must divide n={n}")
    d = distance_bound(n, r, M, alpha)
    if d < 1:
        raise ValueError(f"file too large for n={n}: distance bound is {d}")
    if r > n - d:
        raise ValueError(f"need r <= n-d, got r={r}, n-d={n - d}")
    cap: dict[tuple[str, str], int] = {}
    for g in range(n // (r + 1)):
        cap["X", f"G{g}"] = r * alpha
        for i in range(g * (r + 1), (g + 1) * (r + 1)):
            cap[f"G{g}", f"Yin{i}"] = r * alpha
    for i in range(n):
        cap[f"Yin{i}", f"Yout{i}"] = alpha
    collectors = list(itertools.combinations(range(n), n - d + 1))
    for t, F in enumerate(collectors):
        for i in F:
            cap[f"Yout{i}", f"DC{t}"] = alpha
    return FlowNet(n, r, M, alpha, d, cap, collectors)


def max_flow(capacity: dict[tuple[str, str], int], source: str, sink: str) -> int:
    """Shortest-augmenting-path (Edmonds-Karp) max flow on integer capacities."""
    # drop vertices that cannot reach the sink; they never carry flow to it
    rev: dict[str, list[str]] = {}
    for u, v in capacity:
        rev.setdefault(v, []).append(u)
    live = {sink}
    todo = [sink]
    while todo:
        v = todo.pop()
        for u in rev.get(v, ()):
            if u not in live:
                live.add(u)
                todo.append(u)
    if source not in live:
        return 0

    resid: dict[str, dict[str, int]] = {v: {} for v in live}
    for (u, v), c in capacity.items():
        if u in live and v in live:
            resid[u][v] = resid[u].get(v, 0) + c
            resid[v].setdefault(u, 0)

    flow = 0
    while True:
        parent = {source: source}
        q = deque([source])
        while q and sink not in parent:
            u = q.popleft()
            for v, c in resid[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    q.append(v)
        if sink not in parent:
            return flow
        push = math.inf
        v = sink
        while v != source:
            u = parent[v]
            push = min(push, resid[u][v])
            v = u
        v = sink
        while v != source:
            u = parent[v]
            resid[u][v] -= push
            resid[v][u] += push
            v = u
        flow += push


def collector_cuts(net: FlowNet) -> list[int]:
    return [max_flow(net.capacity, "X", f"DC{t}") for t in range(len(net.collectors))]


def min_cut_all_dcs(net: FlowNet) -> int:
    return min(collector_cuts(net))


def closed_form_capacity(n: int, r: int, M: int, alpha: int) -> int:
    """Closed-form multicast capacity; must equal ``ceil(M/alpha) * alpha``."""
    d = distance_bound(n, r, M, alpha)
    reach = n - d + 1
    if reach % (r + 1) == 0:
        log.warning(
            "(n-d+1)/(r+1) = %d is an integer for n=%d r=%d M=%d alpha=%d",
            reach // (r + 1), n, r, M, alpha,
        )
    cap = (reach - reach // (r + 1)) * alpha
    expected = ceil_div(M, alpha) * alpha
    if cap != expected:
        raise CapacityRegimeError(
            f"closed form gives {cap}, expected ceil(M/alpha)*alpha={expected} "
            f"for n={n} r={r} M={M} alpha={alpha}"
        )
    return cap


def valid_tuples(max_n: int, max_alpha: int = 4):
    """Every (n, r, M, alpha) with n <= max_n, (r+1) | n, d >= 1 and r <= n-d."""
    for n in range(2, max_n + 1):
        for r in range(1, n):
            if n % (r + 1):
                continue
            for alpha in range(1, max_alpha + 1):
                # total entropy of the graph is (n/(r+1)) * r * alpha
                for M in range(1, n // (r + 1) * r * alpha + 1):
                    d = distance_bound(n, r, M, alpha)
                    if d >= 1 and r <= n - d:
                        yield n, r, M, alpha


# random linear network coding


@dataclass
class RlncTrial:
    """One draw of local encoding matrices on the flow graph.

    ``source[g]`` is the ``C x r*alpha`` map X->G<g>; ``to_in[i]`` the
    ``r*alpha x r*alpha`` map G->Yin<i>; ``to_out[i]`` the ``r*alpha x alpha``
    map Yin<i>->Yout<i>. Yout nodes forward their alpha symbols unchanged.
    """

    net: FlowNet
    field: GF
    seed: int
    C: int
    source: list[np.ndarray]
    to_in: list[np.ndarray]
    to_out: list[np.ndarray]
    dc_ok: list[bool] = field(default_factory=list)
    local_ok: dict[tuple[int, tuple[int, ...]], bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.dc_ok) and all(self.local_ok.values())

    def local_map(self, i: int) -> np.ndarray:
        """How node i's alpha symbols depend on its group's r*alpha symbols."""
        return self.field.matmul(self.to_in[i], self.to_out[i])

    def global_map(self, i: int) -> np.ndarray:
        g = i // (self.net.r + 1)
        return self.field.matmul(self.source[g], self.local_map(i))


def draw_trial(net: FlowNet, field: GF, seed: int) -> RlncTrial:
    rng = np.random.default_rng(seed)
    ra, a = net.r * net.alpha, net.alpha
    C = ceil_div(net.M, a) * a
    source = [field.random((C, ra), rng) for _ in net.groups]
    to_in = [field.random((ra, ra), rng) for _ in range(net.n)]
    to_out = [field.random((ra, a), rng) for _ in range(net.n)]
    trial = RlncTrial(net, field, seed, C, source, to_in, to_out)
    glob = [trial.global_map(i) for i in range(net.n)]
    trial.dc_ok = [
        field.rank(np.hstack([glob[i] for i in F])) == C for F in net.collectors
    ]
    for g, members in enumerate(net.groups):
        for sub in itertools.combinations(members, net.r):
            mat = np.hstack([trial.local_map(i) for i in sub])
            trial.local_ok[g, sub] = field.rank(mat) == ra
    return trial


@dataclass
class RlncReport:
    q: int
    trials: list[RlncTrial]

    @property
    def success_rate(self) -> float:
        return sum(t.passed for t in self.trials) / len(self.trials)

    @property
    def dc_success_rate(self) -> float:
        return sum(all(t.dc_ok) for t in self.trials) / len(self.trials)

    @property
    def local_success_rate(self) -> float:
        return sum(all(t.local_ok.values()) for t in self.trials) / len(self.trials)


def rlnc_verify(net: FlowNet, q: int, trials: int, seed: int = 0) -> RlncReport:
    """Run seeded RLNC trials over GF(q) checking every global and local requirement."""
    if q < 2 or q & (q - 1):
        raise ValueError(f"field order must be a power of two >= 2, got {q}")
    if net.M % net.alpha:
        raise ValueError("rlnc_verify needs alpha | M so the capacity equals M")
    field = GF(q.bit_length() - 1)
    seeds = np.random.SeedSequence(seed).generate_state(trials)
    return RlncReport(q, [draw_trial(net, field, int(s)) for s in seeds])


def extract_code(trial: RlncTrial) -> GeneratorView:
    """The code whose node i stores the Yin<i> -> Yout<i> output."""
    if not trial.passed:
        raise ValueError(f"trial {trial.seed} does not meet every decoding requirement")
    mat = np.hstack([trial.global_map(i) for i in range(trial.net.n)])
    return GeneratorView(trial.field, mat, trial.net.n, trial.net.alpha)
