import random

import numpy as np
import pytest

from cubedom.codes import hamming_graph_code
from cubedom.coverage import VertexSet, check_domination
from cubedom.errors import AdmissibilityError, OutOfRange
from cubedom.wedge import (
    MDecomposition,
    _VectorMaps,
    a_map,
    build_admissible,
    build_construction,
    canonical_decomposition,
    canonical_range,
    construct_canonical,
    enumerate_decompositions,
    f_map,
    g_map,
    rho,
    t_map,
    theta,
    theta2,
)
from cubedom.words import (
    EMPTY,
    Word,
    concat,
    hamming,
    iota_decompose,
    iota_embed,
    project_block,
    unit_delta,
)


def _setup(nhat, m, codes_by_s=None):
    code = hamming_graph_code(nhat)
    decomp = canonical_decomposition(nhat, m)
    sel = build_admissible(code, decomp, codes_by_s)
    return code, decomp, sel


class TestTheta:
    def test_examples(self):
        assert theta2(8).as_tuple() == (4, 2, 2, 1)
        assert theta2(64).as_tuple() == (11, 2, 2, 1)
        assert theta2(16).as_tuple() == (6, 5, 3, 1)
        assert theta2(32).as_tuple() == (8, 4, 3, 2)
        assert theta2(128).as_tuple() == (16, 8, 4, 2)
        assert theta2(256).as_tuple() == (23, 20, 6, 1)
        t = theta(1)
        assert (t.theta, t.xi) == (1, 0)

    def test_invariant_up_to_a_million(self):
        for q in range(1, 10**6 + 1):
            t = theta(q)
            tri = t.theta * (t.theta + 1) // 2
            assert tri == q + t.xi
            assert 0 <= t.xi < t.theta + 1
            assert (t.theta - 1) * t.theta // 2 < q

    def test_rejects_nonpositive(self):
        with pytest.raises(OutOfRange):
            theta(0)


class TestDecompositions:
    @pytest.mark.parametrize("nhat,expected", [
        (3, {0: (1, 3), 1: (3,), 2: (2,)}),
        (4, {0: (1, 4, 5), 1: (4, 5), 2: (3, 5), 3: (2, 5)}),
        (5, {0: (2, 4, 5, 6, 7), 1: (1, 4, 5, 6, 7), 2: (4, 5, 6, 7), 3: (3, 5, 6, 7)}),
        (6, {0: (1, *range(3, 11)), 1: tuple(range(3, 11)), 2: (2, *range(4, 11))}),
        (7, {0: (2, *range(5, 16)), 1: (1, *range(5, 16)), 2: tuple(range(5, 16)),
             3: (4, *range(6, 16)), 4: (3, *range(6, 16))}),
        (8, {0: (1, *range(7, 23)), 1: tuple(range(7, 23)), 2: (6, *range(8, 23)),
             3: (5, *range(8, 23)), 4: (4, *range(8, 23)), 5: (3, *range(8, 23)),
             6: (2, *range(8, 23))}),
    ])
    def test_canonical_sets(self, nhat, expected):
        assert list(canonical_range(nhat)) == sorted(expected)
        for m, S in expected.items():
            assert canonical_decomposition(nhat, m).S == S

    def test_canonical_satisfy_relation(self):
        for nhat in range(3, 13):
            for m in canonical_range(nhat):
                d = canonical_decomposition(nhat, m)
                assert d.theta + d.m + d.sigma == d.l + 1 == 1 << nhat
                assert d.m < d.theta - len(d.S)
                assert d.sigma <= d.l - nhat

    def test_out_of_range(self):
        with pytest.raises(OutOfRange, match="out of range"):
            canonical_decomposition(3, 3)
        with pytest.raises(OutOfRange):
            canonical_decomposition(8, 7)

    def test_enumerate(self):
        assert (1, 3) in [d.S for d in enumerate_decompositions(7, 0)]
        assert (2,) in [d.S for d in enumerate_decompositions(7, 2)]
        assert enumerate_decompositions(7, 4) == []
        for m in range(4):
            for d in enumerate_decompositions(15, m):
                assert d.admissible_for_theorem
                assert d.theta + m + d.sigma == 16
        lists = [d.S for d in enumerate_decompositions(15, 0)]
        assert lists == sorted(lists)

    def test_invalid_decomposition(self):
        with pytest.raises(ValueError):
            MDecomposition(7, 0, 4, (1, 2))
        with pytest.raises(ValueError):
            MDecomposition(7, 0, 4, (4,))


class TestAdmissible:
    @pytest.mark.parametrize("nhat,m,S,size", [(3, 0, (1, 3), 2), (4, 0, (1, 4, 5), 16), (4, 3, (2, 5), 64)])
    def test_sizes(self, nhat, m, S, size):
        code, decomp, sel = _setup(nhat, m)
        assert decomp.S == S
        assert len(sel.E) == size
        assert sel.E.issubset(code.code)
        for s in S:
            assert sel.projections(s).issubset(sel.codes_by_s[s])

    def test_rejects_non_separated_codes(self):
        code = hamming_graph_code(3)
        decomp = canonical_decomposition(3, 0)
        with pytest.raises(AdmissibilityError):
            build_admissible(code, decomp, {3: VertexSet.from_strings(["000", "011"])})

    def test_empty_E(self):
        code, decomp, sel = _setup(3, 1, {3: VertexSet(3, [])})
        assert len(sel.E) == 0
        res = build_construction(code.code, decomp, sel)
        assert len(res.result) == len(res.D) == (1 << (decomp.m + decomp.theta)) * 16
        assert check_domination(res.target_n, res.result).dominated


class TestMaps:
    def test_rho(self):
        code, decomp, sel = _setup(3, 0)
        lay = decomp.layout()
        z = Word(7, 0b1011010)
        assert rho(lay, Word(4, 0), z) == concat(Word(4, 0), z)
        # k = 3 in S: the first four letters become ι(z^(3))
        y = Word(3, 0b110)
        out = rho(lay, iota_embed(4, 3, y), z)
        assert out.length == 11
        assert Word(4, out.value >> 7) == iota_embed(4, 3, project_block(lay, z, 3))
        # when y equals the block of z the swap changes nothing
        zs = project_block(lay, z, 3)
        x = iota_embed(4, 3, zs)
        assert rho(lay, x, z) == concat(x, z)

    def test_rho_is_injective_for_each_x(self):
        _, decomp, _ = _setup(3, 0)
        lay = decomp.layout()
        for x in range(16):
            images = {rho(lay, Word(4, x), Word(7, z)) for z in range(128)}
            assert len(images) == 128

    def test_t(self):
        _, decomp, sel = _setup(3, 1)
        lay = decomp.layout()
        assert t_map(lay, sel, Word(4, 0)) == Word(lay.short, 0)
        # S = {3}, a(1) = 1: t(a(δ_1)) = δ_{Σ+a(1)}, the first letter of the (θ-1)-block
        ax = a_map(decomp, Word(1, 1))
        assert t_map(lay, sel, ax) == unit_delta(lay.short, lay.sigma + 1)
        assert lay.span("penultimate", lay.short)[0] == lay.sigma
        # k in S with y on a projected codeword adds δ_{Σ+s}
        c = next(iter(sel.projections(3)))
        out = t_map(lay, sel, iota_embed(4, 3, c))
        assert out == Word(6, c.value << 3) ^ unit_delta(6, lay.sigma + 3)

    def test_t_far_from_projections_is_zero(self):
        _, decomp, sel = _setup(4, 0)
        lay = decomp.layout()
        for s in decomp.S:
            for y in range(1 << s):
                if sel.nearest(s, y) is None:
                    assert t_map(lay, sel, iota_embed(decomp.theta, s, Word(s, y))).value == 0

    def test_a(self):
        _, decomp, _ = _setup(3, 1)
        assert decomp.S == (3,) and decomp.complement == (1, 2)
        assert a_map(decomp, Word(1, 1)) == Word.from_str("0100")
        assert a_map(decomp, Word(1, 0)) == Word(4, 0)
        _, d4, _ = _setup(4, 3)
        rng = random.Random(0)
        for _ in range(50):
            a, b = Word(3, rng.randrange(8)), Word(3, rng.randrange(8))
            assert a_map(d4, a ^ b) == a_map(d4, a) ^ a_map(d4, b)

    def test_g_with_empty_tail(self):
        _, decomp, sel = _setup(3, 0)
        lay = decomp.layout()
        rng = random.Random(1)
        for _ in range(200):
            x, z = Word(4, rng.randrange(16)), Word(7, rng.randrange(128))
            assert g_map(lay, sel, EMPTY, x, z) == f_map(lay, sel, x, z)

    @pytest.mark.parametrize("nhat,m", [(3, 0), (3, 1), (3, 2), (4, 0), (4, 2)])
    def test_scalar_and_vector_maps_agree(self, nhat, m):
        code, decomp, sel = _setup(nhat, m)
        lay = decomp.layout()
        vm = _VectorMaps(sel)
        rng = random.Random(nhat * 10 + m)
        zs = np.array([rng.randrange(1 << decomp.l) for _ in range(40)], dtype=np.int64)
        for alpha in range(1 << m):
            for x in rng.sample(range(1 << decomp.theta), min(16, 1 << decomp.theta)):
                vec = vm.g(alpha, x, zs).tolist()
                scal = [g_map(lay, sel, Word(m, alpha), Word(decomp.theta, x), Word(decomp.l, int(z))).value
                        for z in zs]
                assert vec == scal

    def test_f_isometry_randomized_nhat4(self):
        _, decomp, sel = _setup(4, 1)
        vm = _VectorMaps(sel)
        rng = np.random.default_rng(5)
        short = decomp.l - decomp.m
        for x in rng.integers(0, 1 << decomp.theta, 20).tolist():
            z = rng.integers(0, 1 << short, 500)
            w = rng.integers(0, 1 << short, 500)
            assert np.array_equal(np.bitwise_count(vm.f(x, z) ^ vm.f(x, w)), np.bitwise_count(z ^ w))

    def test_g_isometry_in_z(self):
        _, decomp, sel = _setup(3, 2)
        lay = decomp.layout()
        rng = random.Random(2)
        for _ in range(300):
            a = Word(2, rng.randrange(4))
            x = Word(4, rng.randrange(16))
            z, w = Word(7, rng.randrange(128)), Word(7, rng.randrange(128))
            assert hamming(g_map(lay, sel, a, x, z), g_map(lay, sel, a, x, w)) == hamming(z, w)

    def test_iota_decompose_drives_rho(self):
        _, decomp, _ = _setup(3, 0)
        for x in range(16):
            k, _ = iota_decompose(Word(4, x))
            assert -1 <= k <= 3


class TestConstruction:
    @pytest.mark.parametrize("m,size", [(0, 254), (1, 504), (2, 1008)])
    def test_nhat3(self, m, size):
        res = construct_canonical(3, m)
        assert res.target_n == 11 + m
        assert len(res.result) == size == res.predicted_D - res.predicted_V
        assert res.V.issubset(res.D)
        assert check_domination(res.target_n, res.D).dominated
        assert check_domination(res.target_n, res.result).dominated

    def test_metadata(self):
        meta = construct_canonical(3, 1).metadata()
        assert meta["S"] == "3" and meta["E_size"] == "4" and meta["predicted_result"] == "504"

    def test_arbitrary_dominating_delta(self):
        # a non-minimal Δ: the perfect code plus a few extra words
        code, decomp, sel = _setup(3, 0)
        delta = code.code.union(VertexSet(7, [1, 2, 3]))
        res = build_construction(delta, decomp, sel)
        assert len(res.result) == 16 * len(delta) - 2
        assert check_domination(res.target_n, res.result).dominated

    def test_E_must_lie_in_delta(self):
        code, decomp, sel = _setup(3, 0)
        with pytest.raises(AdmissibilityError):
            build_construction(VertexSet(7, [0]), decomp, sel)


def test_unshifted_t_indexing_leaves_holes(monkeypatch):
    """Placing t one letter further right (k outside S: x shifted down by one;
    k in S: marker at Σ+s+1) breaks domination; the shipped indexing does not."""
    from cubedom.wedge import _decompose

    def t_unshifted(self, x):
        k, y = _decompose(x, self.th)
        if k not in self.S:
            return 0 if k <= 0 else x >> 1
        hit = self.sel.nearest(k, y)
        if hit is None:
            return 0
        c, exact = hit
        start, size = self.block[k]
        out = c << (self.short - start - size)
        pos = self.layout.sigma + k + 1
        if exact and pos <= self.short:
            out |= 1 << (self.short - pos)
        return out

    monkeypatch.setattr(_VectorMaps, "t", t_unshifted)
    res = construct_canonical(3, 0)
    report = check_domination(res.target_n, res.result)
    assert report.undominated_total == len(res.V) == 2
