import itertools

import numpy as np
import pytest

from lrcodes.bounds import distance_bound
from lrcodes.codeview import GeneratorView, planted_locality_code
from lrcodes.field import GF, SingularMatrixError
from lrcodes.lrc import CodeParams, generator_view
from lrcodes.rs import RsParams
from lrcodes.verifier import (
    SizeGuardError,
    certify,
    exact_distance,
    exact_locality,
    repair_coefficients,
    repair_set,
)


def brute_distance(gen):
    """Scan all 2^n subsets with no ordering tricks."""
    best = max(
        (len(s) for size in range(gen.n + 1) for s in itertools.combinations(range(gen.n), size)
         if gen.entropy(s) < gen.M),
        default=0,
    )
    return gen.n - best


def min_weight(rs):
    """Minimum Hamming weight over all nonzero codewords (no rank computation)."""
    F = rs.field
    msgs = np.array(list(itertools.product(range(F.order), repeat=rs.k)))[1:]
    words = F.matmul(msgs, rs.generator.T)
    return int((words != 0).sum(axis=1).min())


def rs_view(rs):
    return GeneratorView(rs.field, rs.generator.T, rs.n, 1)


def test_worked_example_distance_and_locality():
    gen = generator_view(CodeParams(6, 4, 2))
    assert exact_distance(gen) == 3 == brute_distance(gen)
    assert [exact_locality(gen, i) for i in range(6)] == [2] * 6


def test_single_node_holding_everything():
    F = GF(8)
    gen = GeneratorView(F, np.eye(3, dtype=int), 1, 3)
    assert exact_distance(gen) == 1


def test_plain_rs_distance_gf256():
    rs = RsParams(6, 4)
    assert exact_distance(rs_view(rs)) == 3 == brute_distance(rs_view(rs))


def test_rs_distance_matches_weight_oracle():
    rs = RsParams(6, 4, GF(3))
    assert min_weight(rs) == 3 == exact_distance(rs_view(rs))
    rs = RsParams(7, 3, GF(3))
    assert min_weight(rs) == 5 == exact_distance(rs_view(rs))


def test_mds_locality_is_k():
    rs = RsParams(6, 4)
    gen = rs_view(rs)
    assert [exact_locality(gen, i) for i in range(6)] == [4] * 6


def test_replicated_pair_has_locality_one():
    F = GF(8)
    a = np.array([[1, 5], [2, 0], [7, 9]])
    gen = GeneratorView(F, np.hstack([a, a]), 2, 2)
    assert exact_locality(gen, 0) == exact_locality(gen, 1) == 1


def test_unrepairable_node_reports_n():
    F = GF(8)
    gen = GeneratorView(F, np.eye(3, dtype=int), 3, 1)
    assert exact_locality(gen, 1) == 3
    assert repair_set(gen, 1) is None


def test_zero_node_has_locality_zero():
    F = GF(8)
    gen = GeneratorView(F, np.array([[0, 1, 1], [0, 2, 2]]), 3, 1)
    assert exact_locality(gen, 0) == 0
    assert repair_coefficients(gen, 0, []).shape == (0, 1)


def test_undecodable_code_has_distance_zero():
    F = GF(8)
    gen = GeneratorView(F, np.array([[1, 1], [1, 1]]), 2, 1)
    assert exact_distance(gen) == 0


def test_repair_coefficients_reconstruct_node():
    p = CodeParams(9, 4, 2)
    gen = generator_view(p)
    rng = np.random.default_rng(0)
    x = p.field.random(p.M, rng)
    stored = gen.encode(x)
    for i in range(p.n):
        R = repair_set(gen, i)
        C = repair_coefficients(gen, i, R)
        assert np.array_equal(p.field.matmul(gen.columns(R), C), gen.columns([i]))
        # apply to actual data: node i = data(R) @ C
        assert np.array_equal(p.field.matmul(stored[list(R)].reshape(1, -1), C)[0], stored[i])


def test_repair_coefficients_reject_non_span():
    gen = GeneratorView(GF(8), np.eye(3, dtype=int), 3, 1)
    with pytest.raises(SingularMatrixError):
        repair_coefficients(gen, 0, [1, 2])


def test_span_membership_agrees_with_solvability():
    F = GF(8)
    gen = planted_locality_code(6, 2, 5, 2, F, 4)
    for i in range(6):
        others = [j for j in range(6) if j != i]
        for size in range(0, 4):
            for R in itertools.combinations(others, size):
                member = gen.entropy(set(R) | {i}) == gen.entropy(R)
                try:
                    repair_coefficients(gen, i, R)
                    solvable = True
                except SingularMatrixError:
                    solvable = False
                assert member == solvable


def test_random_codes_respect_bound():
    F = GF(8)
    rng = np.random.default_rng(9)
    for _ in range(20):
        r = int(rng.integers(1, 3))
        n = (r + 1) * int(rng.integers(1, 4))
        alpha = int(rng.integers(1, 3))
        M = int(rng.integers(1, n // (r + 1) * r * alpha + 1))
        gen = planted_locality_code(n, r, M, alpha, F, rng)
        if max(exact_locality(gen, i) for i in range(n)) > r:
            continue
        d = exact_distance(gen)
        assert d == brute_distance(gen)
        assert d <= distance_bound(n, r, M, alpha)


def test_size_guard():
    gen = GeneratorView(GF(8), np.ones((1, 25), dtype=int), 25, 1)
    with pytest.raises(SizeGuardError):
        exact_distance(gen)
    with pytest.raises(SizeGuardError):
        exact_locality(gen, 0)
    with pytest.raises(SizeGuardError):
        certify(CodeParams(16, 5, 1))


def test_certify_worked_example():
    c = certify(CodeParams(6, 4, 2))
    assert (c.distance, c.bound, c.locality) == (3, 3, 2)
    assert c.passed and c.bound_expected_tight


def test_certify_9_4_2():
    c = certify(CodeParams(9, 4, 2))
    assert c.distance == c.bound == 9 - 4 + 1 == 6
    assert c.passed


def test_certify_not_tight_case():
    c = certify(CodeParams(6, 3, 2))
    assert not c.bound_expected_tight
    # parity blocks lift the distance above n-k+1 = 4 here
    assert c.distance == brute_distance(generator_view(CodeParams(6, 3, 2))) == 5
    assert c.bound == 5
    assert c.passed
