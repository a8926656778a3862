"""A (6, 4, 2) locally repairable code, end to end.

Four data symbols per stripe, six nodes in two repair groups of three.
Each node holds three blocks: one from each RS codeword and one XOR parity.
"""
import numpy as np

from lrcodes.lrc import CodeParams, build_layout, lrc_decode, lrc_encode, repair_node

params = CodeParams(n=6, k=4, r=2)
print(f"M={params.M} symbols per stripe, alpha={params.alpha} blocks per node, rate={params.rate}")
print("repair groups:", params.groups)

# Where each block lives: slots[j] lists (row, index) pairs held by node j.
# Row 2 is the parity row.
layout = build_layout(params)
for j, slots in enumerate(layout.slots):
    print(f"node {j}: {[tuple(s) for s in slots]}")

# A file of M symbols over GF(256), one symbol per block for readability.
rng = np.random.default_rng(0)
file = params.field.random((params.M, 1), rng)
nodes = lrc_encode(params, file)

# Lose node 0; its two group peers hold enough to rebuild it.
peers = [nodes[u] for u in params.group_of(0) if u != 0]
rebuilt = repair_node(params, 0, peers)
print("node 0 rebuilt from", [p.node for p in peers], "->", rebuilt == nodes[0])
print("blocks read:", sum(len(p.blocks) for p in peers))

# Any four nodes recover the file.
back = lrc_decode(params, [nodes[j] for j in (1, 2, 3, 4)])
print("decoded from nodes 1..4:", np.array_equal(back, file))
