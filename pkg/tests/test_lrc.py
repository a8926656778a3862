"""Worked-example node labels are 1-based; ids here are 0-based (label j == id j-1)."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lrcodes.field import GF
from lrcodes.lrc import (
    CodeParams,
    NodeContent,
    RepairError,
    build_layout,
    generator_view,
    lrc_decode,
    lrc_encode,
    repair_node,
    stripe,
)
from lrcodes.rs import InsufficientSymbolsError

P642 = CodeParams(6, 4, 2)
Y1, Y2, S = 0, 1, 2  # rows


def valid_params(max_n=15):
    out = []
    for n in range(2, max_n + 1):
        for r in range(1, n):
            if n % (r + 1) == 0:
                out.extend(CodeParams(n, k, r) for k in range(1, n + 1))
    return out


@pytest.fixture
def file642():
    rng = np.random.default_rng(7)
    return P642.field.random((8, 16), rng)


def test_params_derived_quantities():
    assert (P642.M, P642.alpha) == (8, 3)
    assert P642.groups == [[0, 1, 2], [3, 4, 5]]
    assert P642.rate == Fraction(4, 9)


@pytest.mark.parametrize("n,k,r", [(7, 4, 2), (6, 7, 2), (6, 4, 0)])
def test_params_rejected(n, k, r):
    with pytest.raises(ValueError):
        CodeParams(n, k, r)


def test_params_need_field_large_enough():
    with pytest.raises(ValueError):
        CodeParams(16, 4, 3, GF(4))


def test_bound_tightness_flag():
    assert P642.bound_tight
    assert not CodeParams(6, 3, 2).bound_tight


def test_layout_first_group_nodes():
    slots = build_layout(P642).slots
    # 1-based node 1: y1_1, y2_2, s_3
    assert slots[0] == ((Y1, 0), (Y2, 1), (S, 2))
    # 1-based node 2: y1_2, y2_3, s_1
    assert slots[1] == ((Y1, 1), (Y2, 2), (S, 0))
    # 1-based node 3: y1_3, y2_1, s_2
    assert slots[2] == ((Y1, 2), (Y2, 0), (S, 1))
    # 1-based node 5: y1_5, y2_6, s_4
    assert slots[4] == ((Y1, 4), (Y2, 5), (S, 3))
    # 1-based nodes 4 and 6
    assert slots[3] == ((Y1, 3), (Y2, 4), (S, 5))
    assert slots[5] == ((Y1, 5), (Y2, 3), (S, 4))


def test_layout_table1_first_group_general_r():
    # first row 1..r+1, second row 2..r+1,1, parity row r+1,1,..,r
    r = 4
    p = CodeParams(10, 6, r)
    slots = build_layout(p).slots
    g = r + 1
    assert [slots[t][0][1] for t in range(g)] == list(range(g))
    assert [slots[t][1][1] for t in range(g)] == [1, 2, 3, 4, 0]
    assert [slots[t][r][1] for t in range(g)] == [4, 0, 1, 2, 3]
    # row r-1 (y^(r)): node 1 holds y_r
    assert slots[0][r - 1][1] == r - 1


@pytest.mark.parametrize("params", valid_params(), ids=str)
def test_layout_invariants(params):
    layout = build_layout(params)
    g = params.r + 1
    for j, slots in enumerate(layout.slots):
        idx = [b for _, b in slots]
        assert len(set(idx)) == g
        assert [row for row, _ in slots] == list(range(g))
        assert all(b // g == j // g for b in idx)
        for row, b in slots:
            assert layout.holder(row, b) == j
    for group in params.groups:
        for b in group:
            holders = [j for j in group for _, bb in layout.slots[j] if bb == b]
            assert sorted(holders) == group


def test_parity_is_xor_of_codewords(file642):
    st_ = stripe(P642, file642)
    assert np.array_equal(st_.parity, st_.codewords[0] ^ st_.codewords[1])


def test_xor_repair_identity(file642):
    st_ = stripe(P642, file642)
    rows = np.concatenate([st_.codewords, st_.parity[None]])
    for j in range(6):
        for drop in range(3):
            rest = np.bitwise_xor.reduce(np.delete(rows[:, j], drop, axis=0), axis=0)
            assert np.array_equal(rest, rows[drop, j])


def test_zero_file_zero_nodes():
    nodes = lrc_encode(P642, np.zeros(8, dtype=int))
    assert all(not c.blocks.any() for c in nodes)


def test_encode_node1_contents():
    x = np.arange(1, 9)
    st_ = stripe(P642, x)
    y1, y2 = st_.codewords
    node2 = lrc_encode(P642, x)[1].blocks
    assert node2.tolist() == [y1[1], y2[2], y1[0] ^ y2[0]]


def test_encode_bad_length():
    with pytest.raises(ValueError):
        lrc_encode(P642, np.zeros(7, dtype=int))


def test_total_storage(file642):
    nodes = lrc_encode(P642, file642)
    assert len(nodes) == 6
    assert sum(c.blocks.shape[0] for c in nodes) == 6 * 3


def test_repair_of_first_node(file642):
    nodes = lrc_encode(P642, file642)
    st_ = stripe(P642, file642)
    # y1_1 = s_1 (from node 2) xor y2_1 (from node 3)
    assert np.array_equal(nodes[1].blocks[S] ^ nodes[2].blocks[Y2], st_.codewords[0][0])
    rebuilt = repair_node(P642, 0, nodes[1:3])
    assert rebuilt == nodes[0]


def test_repair_all_zero():
    nodes = lrc_encode(P642, np.zeros((8, 3), dtype=int))
    assert not repair_node(P642, 4, [nodes[3], nodes[5]]).blocks.any()


@pytest.mark.parametrize("params", [P642, CodeParams(9, 4, 2), CodeParams(8, 5, 3), CodeParams(4, 3, 1)], ids=str)
def test_every_node_repairs_from_its_group(params):
    rng = np.random.default_rng(params.n)
    nodes = lrc_encode(params, params.field.random((params.M, 5), rng))
    for j in range(params.n):
        donors = [nodes[u] for u in params.group_of(j) if u != j]
        assert len(donors) == params.r
        assert repair_node(params, j, donors) == nodes[j]


def test_repair_rejects_wrong_donors(file642):
    nodes = lrc_encode(P642, file642)
    with pytest.raises(RepairError):
        repair_node(P642, 0, [nodes[1], nodes[3]])
    with pytest.raises(RepairError):
        repair_node(P642, 0, [nodes[1]])
    with pytest.raises(RepairError):
        repair_node(P642, 0, [nodes[1], nodes[1]])


def test_decode_from_nodes_1234(file642):
    nodes = lrc_encode(P642, file642)
    assert np.array_equal(lrc_decode(P642, nodes[1:5]), file642)


def test_decode_from_all(file642):
    nodes = lrc_encode(P642, file642)
    assert np.array_equal(lrc_decode(P642, nodes), file642)


@pytest.mark.parametrize("params", [P642, CodeParams(9, 4, 2), CodeParams(8, 5, 3)], ids=str)
def test_every_k_subset_decodes(params):
    rng = np.random.default_rng(3)
    x = params.field.random((params.M, 4), rng)
    nodes = lrc_encode(params, x)
    for s in itertools.combinations(range(params.n), params.k):
        assert np.array_equal(lrc_decode(params, [nodes[j] for j in s]), x)


def test_decode_needs_k_nodes(file642):
    nodes = lrc_encode(P642, file642)
    with pytest.raises(InsufficientSymbolsError):
        lrc_decode(P642, nodes[:3])
    with pytest.raises(InsufficientSymbolsError):
        lrc_decode(P642, [nodes[0]] * 4)


def test_scalar_file_shape_round_trip():
    x = np.arange(8)
    nodes = lrc_encode(P642, x)
    assert nodes[0].blocks.shape == (3,)
    assert np.array_equal(lrc_decode(P642, nodes[2:]), x)


def test_generator_view_columns():
    gv = generator_view(P642)
    G = P642.rs.generator
    assert gv.matrix.shape == (8, 18)
    # node 1's y^(1)_1 slot: generator row 0 over stripe 1, zero elsewhere
    col = gv.matrix[:, 0]
    assert col[:4].tolist() == G[0].tolist()
    assert not col[4:].any()
    # parity slot of node 1 (s_3) touches both stripes
    assert gv.matrix[:4, 2].tolist() == gv.matrix[4:, 2].tolist() == G[2].tolist()


@pytest.mark.parametrize("params", [P642, CodeParams(9, 4, 2), CodeParams(6, 3, 1)], ids=str)
def test_generator_view_matches_encode(params):
    gv = generator_view(params)
    rng = np.random.default_rng(0)
    x = params.field.random(params.M, rng)
    nodes = lrc_encode(params, x)
    assert np.array_equal(gv.encode(x), np.stack([c.blocks for c in nodes]))
    assert gv.entropy(range(params.n)) == params.M


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(valid_params(12)))
def test_rate_and_overhead(params):
    stored = params.n * params.alpha
    assert Fraction(params.M, stored) == Fraction(params.r, params.r + 1) * Fraction(params.k, params.n)
    # stored = (r+1)/r * M * n/k
    assert Fraction(stored) == Fraction(params.r + 1, params.r) * params.M * Fraction(params.n, params.k)


def test_node_content_equality():
    a = NodeContent(0, np.array([1, 2]))
    assert a == NodeContent(0, np.array([1, 2]))
    assert a != NodeContent(1, np.array([1, 2]))
