"""RS + XOR locally repairable code with circular block placement.

The file is split into ``r`` parts of ``k`` symbols. Each part is encoded by
the same systematic ``(n, k)`` Reed-Solomon code, giving rows ``y[0..r-1]``;
a parity row ``s`` is their XOR. Nodes come in repair groups of ``r + 1``;
within a group, row ``i`` of the node at local position ``t`` holds the block
whose in-group index is ``(t + i) % (r + 1)``. Every node therefore stores
``r + 1`` blocks with distinct indices, and each index appears exactly once
on every node of its group.

Node ids, block indices and rows are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .codeview import GeneratorView
from .field import GF
from .rs import InsufficientSymbolsError, RsParams, rs_decode, rs_encode


class RepairError(ValueError):
    pass


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    r: int
    field: GF = dc_field(default_factory=GF)

    def __post_init__(self):
        n, k, r = self.n, self.k, self.r
        if r < 1 or k < 1:
            raise ValueError("need r >= 1 and k >= 1")
        if k > n:
            raise ValueError(f"need k <= n, got n={n}, k={k}")
        if n % (r + 1):
            raise ValueError(f"r+1={r + 1} must divide n={n}")
        if n > self.field.order - 1:
            raise ValueError(f"n={n} exceeds q-1={self.field.order - 1}; use a larger field")

    @property
    def M(self) -> int:
        return self.r * self.k

    @property
    def alpha(self) -> int:
        return self.r + 1

    @property
    def groups(self) -> list[list[int]]:
        g = self.r + 1
        return [list(range(b, b + g)) for b in range(0, self.n, g)]

    def group_of(self, node: int) -> list[int]:
        self._check_node(node)
        return self.groups[node // (self.r + 1)]

    @property
    def bound_tight(self) -> bool:
        """The distance bound is met with equality only when r+1 does not divide k."""
        return self.k % (self.r + 1) != 0

    @property
    def rate(self) -> Fraction:
        return Fraction(self.M, self.n * self.alpha)

    @cached_property
    def rs(self) -> RsParams:
        return RsParams(self.n, self.k, self.field)

    def _check_node(self, node: int) -> None:
        if not 0 <= node < self.n:
            raise ValueError(f"node {node} outside [0, {self.n})")


@dataclass(frozen=True)
class NodeLayout:
    """``slots[j]`` lists ``(row, block index)`` for node ``j``; row ``r`` is parity."""

    params: CodeParams
    slots: tuple[tuple[tuple[int, int], ...], ...]

    def holder(self, row: int, index: int) -> int:
        """Node storing block ``index`` in ``row``."""
        g = self.params.r + 1
        base = index - index % g
        return base + (index - base - row) % g


@dataclass
class NodeContent:
    node: int
    blocks: np.ndarray  # (r+1,) or (r+1, L)

    def __eq__(self, other):
        if not isinstance(other, NodeContent):
            return NotImplemented
        return self.node == other.node and np.array_equal(self.blocks, other.blocks)


@dataclass
class Stripes:
    parts: np.ndarray  # (r, k[, L])
    codewords: np.ndarray  # (r, n[, L])
    parity: np.ndarray  # (n[, L])


def build_layout(params: CodeParams) -> NodeLayout:
    g = params.r + 1
    slots = []
    for j in range(params.n):
        base, t = j - j % g, j % g
        slots.append(tuple((i, base + (t + i) % g) for i in range(g)))
    return NodeLayout(params, tuple(slots))


def stripe(params: CodeParams, file_symbols) -> Stripes:
    x = params.field.asarray(file_symbols)
    if x.shape[0] != params.M:
        raise ValueError(f"file has {x.shape[0]} symbols, expected M={params.M}")
    parts = x.reshape((params.r, params.k) + x.shape[1:])
    codewords = np.stack([rs_encode(params.rs, part) for part in parts])
    parity = np.bitwise_xor.reduce(codewords, axis=0)
    return Stripes(parts, codewords, parity)


def lrc_encode(params: CodeParams, file_symbols) -> list[NodeContent]:
    """Encode ``M = r*k`` file symbols (each a scalar or a length-L vector)."""
    st = stripe(params, file_symbols)
    rows = np.concatenate([st.codewords, st.parity[None]], axis=0)  # (r+1, n[, L])
    layout = build_layout(params)
    nodes = []
    for j, slots in enumerate(layout.slots):
        blocks = np.stack([rows[i, b] for i, b in slots])
        nodes.append(NodeContent(j, blocks))
    return nodes


def repair_node(params: CodeParams, failed: int, donors: Sequence[NodeContent]) -> NodeContent:
    """Rebuild node ``failed`` by XOR-ing same-index blocks from its r group peers."""
    group = params.group_of(failed)
    peers = set(group) - {failed}
    got = [d.node for d in donors]
    if len(set(got)) != len(got):
        raise RepairError(f"duplicate donors {got}")
    if stray := set(got) - peers:
        raise RepairError(f"donors {sorted(stray)} are not in node {failed}'s repair group")
    if missing := peers - set(got):
        raise RepairError(f"missing donors {sorted(missing)}")

    layout = build_layout(params)
    # index -> list of donor blocks holding that index
    by_index: dict[int, list[np.ndarray]] = {}
    for d in donors:
        for (_, b), block in zip(layout.slots[d.node], d.blocks):
            by_index.setdefault(b, []).append(np.asarray(block, dtype=np.int64))
    out = []
    for _, b in layout.slots[failed]:
        same = by_index[b]
        assert len(same) == params.r
        out.append(np.bitwise_xor.reduce(np.stack(same), axis=0))
    return NodeContent(failed, np.stack(out))


def lrc_decode(params: CodeParams, available: Sequence[NodeContent]) -> np.ndarray:
    """Recover the file from any k distinct nodes by RS-decoding each part."""
    nodes = {c.node: c for c in available}
    if len(nodes) < params.k:
        raise InsufficientSymbolsError(f"need {params.k} nodes, got {len(nodes)}")
    layout = build_layout(params)
    parts = []
    for i in range(params.r):
        received = {}
        for j, c in nodes.items():
            row, b = layout.slots[j][i]
            received[b] = c.blocks[row]
        parts.append(rs_decode(params.rs, received))
    return np.concatenate(parts, axis=0)


def generator_view(params: CodeParams) -> GeneratorView:
    r, k, g = params.r, params.k, params.alpha
    G = params.rs.generator
    mat = np.zeros((params.M, params.n * g), dtype=np.int64)
    for j, slots in enumerate(build_layout(params).slots):
        for i, b in slots:
            col = j * g + i
            stripes = range(r) if i == r else [i]
            for s in stripes:
                mat[s * k : (s + 1) * k, col] = G[b]
    return GeneratorView(params.field, mat, params.n, g)
