"""On-disk cluster simulation: one block file per node plus a JSON manifest.

Directory layout::

    manifest.json
    node_<j>.blk     # r+1 blocks, row order, each block_len symbols

Symbols are bytes for p=8 and big-endian 16-bit words for p=16.
"""

from __future__ import annotations

import json
import os
import time
import zlib
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .field import GF
from .lrc import CodeParams, NodeContent, build_layout, lrc_decode, lrc_encode, repair_node
from .rs import InsufficientSymbolsError, RsParams, rs_decode, rs_encode

FORMAT_VERSION = 1
MANIFEST = "manifest.json"


class StorageError(Exception):
    pass


class ChecksumError(StorageError):
    pass


class LocalRepairImpossible(StorageError):
    """A repair-group peer is missing, so the node cannot be rebuilt locally."""


def node_path(directory, j: int) -> Path:
    return Path(directory) / f"node_{j}.blk"


def _symbol_dtype(p: int) -> np.dtype:
    if p == 8:
        return np.dtype(np.uint8)
    if p == 16:
        return np.dtype(">u2")
    raise ValueError(f"storage supports p=8 or p=16 symbols, got p={p}")


def crc(block: np.ndarray, dtype: np.dtype) -> int:
    return zlib.crc32(np.ascontiguousarray(block, dtype=dtype).tobytes())


@dataclass
class Manifest:
    version: int
    n: int
    k: int
    r: int
    p: int
    modulus: int
    file_len: int
    pad_len: int
    slots: list[list[list[int]]]  # per node: [row, global block index]
    crcs: list[list[int]]  # per node, per block

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.n, self.k, self.r, GF(self.p, self.modulus))

    @property
    def symbol_bytes(self) -> int:
        return self.p // 8

    @property
    def block_len(self) -> int:
        """Symbols per block."""
        return (self.file_len + self.pad_len) // (self.symbol_bytes * self.r * self.k)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    @classmethod
    def from_json(cls, text: str) -> Manifest:
        m = cls(**json.loads(text))
        if m.version != FORMAT_VERSION:
            raise StorageError(f"unsupported manifest version {m.version}")
        expected = [[list(s) for s in slots] for slots in build_layout(m.params).slots]
        if m.slots != expected:
            raise StorageError("manifest slot map does not match the code layout")
        return m

    @classmethod
    def load(cls, directory) -> Manifest:
        try:
            return cls.from_json((Path(directory) / MANIFEST).read_text())
        except OSError as exc:
            raise StorageError(f"cannot read manifest in {directory}: {exc}") from exc

    def save(self, directory) -> None:
        _atomic_write(Path(directory) / MANIFEST, self.to_json().encode())


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _to_symbols(data: bytes, params: CodeParams) -> tuple[np.ndarray, int]:
    dt = _symbol_dtype(params.field.p)
    sb = dt.itemsize
    per_block = params.M * sb
    block_len = max(1, -(-len(data) // per_block))
    pad = block_len * per_block - len(data)
    buf = np.frombuffer(data + bytes(pad), dtype=dt).astype(np.int64)
    return buf.reshape(params.M, block_len), pad


def store(data: bytes, params: CodeParams, directory) -> Manifest:
    """Encode ``data`` and write every node file plus the manifest."""
    dt = _symbol_dtype(params.field.p)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    symbols, pad = _to_symbols(bytes(data), params)
    nodes = lrc_encode(params, symbols)
    for c in nodes:
        write_node(directory, c, dt)
    m = Manifest(
        version=FORMAT_VERSION,
        n=params.n,
        k=params.k,
        r=params.r,
        p=params.field.p,
        modulus=params.field.modulus,
        file_len=len(data),
        pad_len=pad,
        slots=[[list(s) for s in slots] for slots in build_layout(params).slots],
        crcs=[[crc(b, dt) for b in c.blocks] for c in nodes],
    )
    m.save(directory)
    return m


def write_node(directory, content: NodeContent, dtype) -> None:
    data = np.ascontiguousarray(content.blocks, dtype=dtype).tobytes()
    _atomic_write(node_path(directory, content.node), data)


def read_node(directory, m: Manifest, j: int) -> NodeContent:
    """Load node ``j`` and verify every block checksum."""
    dt = _symbol_dtype(m.p)
    path = node_path(directory, j)
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    blocks = np.frombuffer(raw, dtype=dt).astype(np.int64)
    if blocks.size != (m.r + 1) * m.block_len:
        raise ChecksumError(f"{path.name} has {blocks.size} symbols, expected {(m.r + 1) * m.block_len}")
    blocks = blocks.reshape(m.r + 1, m.block_len)
    for row, (b, want) in enumerate(zip(blocks, m.crcs[j])):
        if crc(b, dt) != want:
            raise ChecksumError(f"checksum mismatch on node {j} block {row}")
    return NodeContent(j, blocks)


def live_nodes(directory, m: Manifest) -> list[int]:
    return [j for j in range(m.n) if node_path(directory, j).exists()]


@dataclass
class RepairReport:
    failed: int
    contacted: list[int]
    blocks_transferred: int
    bytes_transferred: int
    seconds: float
    success: bool


def repair(directory, j: int) -> RepairReport:
    """Rebuild a missing node file from its r repair-group peers."""
    m = Manifest.load(directory)
    params = m.params
    t0 = time.perf_counter()
    peers = [u for u in params.group_of(j) if u != j]
    missing = [u for u in peers if not node_path(directory, u).exists()]
    if missing:
        raise LocalRepairImpossible(f"group peers {missing} of node {j} are also missing")
    donors = [read_node(directory, m, u) for u in peers]
    blocks = sum(len(d.blocks) for d in donors)
    nbytes = sum(d.blocks.size for d in donors) * m.symbol_bytes
    rebuilt = repair_node(params, j, donors)
    dt = _symbol_dtype(m.p)
    ok = [crc(b, dt) for b in rebuilt.blocks] == m.crcs[j]
    if ok:
        write_node(directory, rebuilt, dt)
    return RepairReport(j, peers, blocks, nbytes, time.perf_counter() - t0, ok)


def fail_and_repair(directory, j: int) -> RepairReport:
    """Delete node ``j``'s file, then rebuild it locally."""
    m = Manifest.load(directory)
    m.params._check_node(j)
    path = node_path(directory, j)
    if not path.exists():
        raise StorageError(f"node {j} is already missing")
    path.unlink()
    return repair(directory, j)


def retrieve(directory, nodes: Iterable[int] | None = None, out=None) -> bytes:
    """Decode the file using only the given nodes (all live nodes by default)."""
    m = Manifest.load(directory)
    params = m.params
    nodes = live_nodes(directory, m) if nodes is None else sorted(set(nodes))
    if len(nodes) < params.k:
        raise InsufficientSymbolsError(f"need {params.k} nodes, got {len(nodes)}")
    try:
        contents = [read_node(directory, m, j) for j in nodes]
    except FileNotFoundError as exc:
        raise StorageError(f"node file missing: {exc.filename}") from exc
    symbols = lrc_decode(params, contents)
    dt = _symbol_dtype(m.p)
    data = symbols.astype(dt).tobytes()
    if len(data) != m.file_len + m.pad_len:
        raise StorageError("decoded length does not match manifest")
    data = data[: m.file_len]
    if out is not None:
        Path(out).write_bytes(data)
    return data


# scheme comparison


@dataclass
class SchemeStats:
    storage_overhead: float  # stored symbols / file symbols
    nodes_contacted: int  # per repair
    repair_blocks: int  # total over the trace
    repair_bytes: int


@dataclass
class ComparisonReport:
    params: CodeParams
    failures: list[int]
    block_bytes: int
    lrc: SchemeStats
    rs: SchemeStats

    @property
    def overhead_ratio(self) -> float:
        return self.lrc.storage_overhead / self.rs.storage_overhead


def compare_schemes(params: CodeParams, failures: int, seed: int = 0, block_len: int = 64) -> ComparisonReport:
    """Replay one seeded failure trace against the LRC and a plain (n, k) RS code.

    Both schemes give every node ``alpha = r+1`` blocks of ``block_len``
    symbols. The RS baseline encodes ``alpha`` independent stripes and rebuilds
    a node by decoding from k survivors.
    """
    f = params.field
    rng = np.random.default_rng(seed)
    trace = [int(j) for j in rng.integers(0, params.n, size=failures)]
    sb = max(1, f.p // 8)
    g = params.alpha

    file_lrc = f.random((params.M, block_len), rng)
    nodes = lrc_encode(params, file_lrc)
    lrc_blocks = 0
    for j in trace:
        peers = [nodes[u] for u in params.group_of(j) if u != j]
        rebuilt = repair_node(params, j, peers)
        assert rebuilt == nodes[j]
        lrc_blocks += sum(len(p.blocks) for p in peers)

    rs = RsParams(params.n, params.k, f)
    file_rs = f.random((g, params.k, block_len), rng)
    rs_nodes = np.stack([rs_encode(rs, part) for part in file_rs], axis=1)  # (n, alpha, L)
    rs_blocks = 0
    for j in trace:
        donors = [u for u in range(params.n) if u != j][: params.k]
        rebuilt = np.stack(
            [rs_encode(rs, rs_decode(rs, {u: rs_nodes[u, s] for u in donors}))[j] for s in range(g)]
        )
        assert np.array_equal(rebuilt, rs_nodes[j])
        rs_blocks += len(donors) * g

    block_bytes = block_len * sb
    lrc = SchemeStats(params.n * g / params.M, params.r, lrc_blocks, lrc_blocks * block_bytes)
    base = SchemeStats(params.n / params.k, params.k, rs_blocks, rs_blocks * block_bytes)
    return ComparisonReport(params, trace, block_bytes, lrc, base)
