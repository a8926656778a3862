"""Files on disk: store, lose nodes, repair, read back.

Then compare repair traffic with a plain RS code of the same (n, k).
"""
import os
import tempfile
from pathlib import Path

from lrcodes.lrc import CodeParams
from lrcodes.storesim import compare_schemes, node_path, repair, retrieve, store

params = CodeParams(9, 5, 2)
data = os.urandom(300_000)

with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    m = store(data, params, d)
    print(f"stored {m.file_len} bytes as {m.n} node files of {node_path(d, 0).stat().st_size} bytes")

    # one failure in every group at once
    lost = [g[1] for g in params.groups]
    for j in lost:
        node_path(d, j).unlink()
    for j in lost:
        rep = repair(d, j)
        print(f"node {j}: read {rep.contacted}, {rep.bytes_transferred} bytes, ok={rep.success}")
    print("round trip intact:", retrieve(d) == data)

for n, k, r in [(6, 4, 2), (9, 5, 2), (12, 7, 3)]:
    rep = compare_schemes(CodeParams(n, k, r), failures=20, seed=0)
    print(f"(n={n}, k={k}, r={r})  storage x{rep.overhead_ratio:.2f} vs RS,  "
          f"repair bytes {rep.lrc.repair_bytes} vs {rep.rs.repair_bytes}")
