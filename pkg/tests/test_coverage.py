import random

import numpy as np
import pytest

from cubedom.codes import hamming_graph_code
from cubedom.coverage import (
    VertexSet,
    ball1,
    brute_force_gamma,
    brute_force_lambda,
    check_domination,
    is_k_separated,
    naive_dominates,
)
from cubedom.errors import LengthMismatch, OutOfRange, ResourceRefusal
from cubedom.words import Word

VS = VertexSet.from_strings


def test_ball1():
    assert ball1(Word.from_str("00")) == VS(["00", "10", "01"])
    assert ball1(Word(3, 0)) == VS(["000", "100", "010", "001"])
    for n in range(1, 8):
        assert len(ball1(Word(n, (1 << n) - 1))) == n + 1


def test_vertex_set_basics():
    s = VS(["110", "000", "110"])
    assert len(s) == 2
    assert s.strings() == ["000", "110"]
    assert Word.from_str("110") in s and Word.from_str("111") not in s
    assert s.union(VS(["111"])).strings() == ["000", "110", "111"]
    assert s.difference(VS(["000"])) == VS(["110"])
    assert VS(["000"]).issubset(s)
    with pytest.raises(LengthMismatch):
        VS(["00", "000"])
    with pytest.raises(OutOfRange):
        VertexSet(3, [8])


def test_small_examples():
    assert check_domination(1, VS(["0"])).dominated
    r = check_domination(3, VS(["000"]))
    assert r.undominated_total == 4
    assert [str(w) for w in r.undominated] == ["011", "101", "110", "111"]
    assert r.covered_count + r.undominated_total == 8
    assert check_domination(3, VS(["000", "111"])).dominated


def test_two_words_at_distance_two_do_not_dominate_q3():
    # 011 and 101 are each at distance 2 from both members
    r = check_domination(3, VS(["000", "110"]))
    assert not r.dominated
    assert [str(w) for w in r.undominated] == ["011", "101"]


def test_bitmap_agrees_with_naive():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 10)
        k = rng.randint(1, max(1, (1 << n) // 3))
        members = rng.sample(range(1 << n), k)
        vs = VertexSet(n, members)
        assert check_domination(n, vs).dominated == naive_dominates(n, vs)


def test_threads_do_not_change_the_report():
    rng = np.random.default_rng(7)
    vs = VertexSet(16, rng.integers(0, 1 << 16, 4000))
    base = check_domination(16, vs)
    for t in (2, 3, 8):
        r = check_domination(16, vs, threads=t)
        assert r.undominated_total == base.undominated_total
        assert r.undominated == base.undominated


def test_histogram_of_perfect_code():
    for k in (2, 3, 4):
        code = hamming_graph_code(k).code
        n = code.dim
        r = check_domination(n, code, histogram=True)
        assert r.multiplicity_histogram == {1: 1 << n}


def test_histogram_mass():
    vs = VS(["0000", "0001", "1111"])
    r = check_domination(4, vs, histogram=True)
    assert sum(r.multiplicity_histogram.values()) == 16
    assert r.multiplicity_histogram.get(0, 0) == r.undominated_total


def test_undominated_listing_is_truncated():
    r = check_domination(12, VS(["0" * 12]), max_undominated=5)
    assert len(r.undominated) == 5
    assert r.undominated_total == (1 << 12) - 13
    assert "more" in r.summary()


def test_dimension_cap():
    with pytest.raises(ResourceRefusal) as exc:
        check_domination(29, VertexSet(29, [0]))
    assert exc.value.required_bytes == 1 << 29
    with pytest.raises(ResourceRefusal):
        check_domination(12, VertexSet(12, [0]), max_dim=10)


def test_dimension_cap_env(monkeypatch):
    monkeypatch.setenv("CUBEDOM_MAX_DIM", "9")
    with pytest.raises(ResourceRefusal):
        check_domination(10, VertexSet(10, [0]))


def test_k_separated():
    assert is_k_separated(VS(["000", "111"]), 3) == (True, None)
    ok, pair = is_k_separated(VS(["000", "110"]), 3)
    assert not ok and [str(w) for w in pair] == ["000", "110"]
    assert is_k_separated(VS(["0101"]), 5)[0]
    assert is_k_separated(VertexSet(4, []), 3)[0]


def test_k_separated_scan_path_agrees_with_pairwise():
    rng = random.Random(3)
    for _ in range(20):
        n = 12
        members = rng.sample(range(1 << n), 600)
        vs = VertexSet(n, members)
        ok, pair = is_k_separated(vs, 3)
        idx = vs.indices
        brute = all(
            bin(int(a) ^ int(b)).count("1") >= 3
            for i, a in enumerate(idx) for b in idx[i + 1:]
        )
        assert ok == brute
        if not ok:
            assert bin(pair[0].value ^ pair[1].value).count("1") < 3


@pytest.mark.parametrize("n,gamma", [(1, 1), (2, 2), (3, 2), (4, 4), (5, 7)])
def test_brute_force_gamma(n, gamma):
    value, witness = brute_force_gamma(n)
    assert value == gamma == len(witness)
    assert check_domination(n, witness).dominated


def test_brute_force_gamma_refuses():
    with pytest.raises(ResourceRefusal):
        brute_force_gamma(7)


@pytest.mark.parametrize("s,lam", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 8), (7, 16)])
def test_brute_force_lambda_small(s, lam):
    value, witness = brute_force_lambda(s)
    assert value == lam == len(witness)
    assert is_k_separated(witness, 3)[0]


def test_brute_force_lambda_refuses():
    with pytest.raises(ResourceRefusal):
        brute_force_lambda(9)
