"""Decompositions, admissible subsets and the improved dominating-set construction.

Given a dominating set Δ of Q_l, a decomposition ``S`` of ``l`` and an
admissible subset E ⊆ Δ, the construction builds

    D = g(Q_m, Q_θ, Δ)          (dominates Q_{m+θ+l})
    V = g(α, a(α), σ), σ in E   (removable)

and returns D∖V.  Word layout for ``l``-letter words is
``s_1 … s_q | θ-1 | m``; the maps t, f and rho act on the first ``l - m``
letters.

Index conventions for the map t (checked exhaustively by the tests):

* for k ∉ S, t(x) is Σ zeros followed by x with its first letter dropped,
  so t(δ^θ_{j+1}) = δ^{l-m}_{Σ+j} and t is linear off the S-pieces;
* for k = s ∈ S with y within distance 1 of a projected codeword c,
  t(ι_s y) = e_s(c), plus δ^{l-m}_{Σ+s} when y = c.

Both land inside the (θ-1)-block for every k and s in 1..θ-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .codes import GraphCode, separated_code
from .coverage import MAX_INDEX_DIM, VertexSet, is_k_separated
from .errors import AdmissibilityError, InvariantViolation, LengthMismatch, OutOfRange, ResourceRefusal
from .words import EMPTY, SplitLayout, Word, concat, iota_decompose, iota_embed, project_block

__all__ = [
    "ThetaPair",
    "Theta2",
    "theta",
    "theta2",
    "MDecomposition",
    "canonical_decomposition",
    "enumerate_decompositions",
    "AdmissibleSelection",
    "build_admissible",
    "rho",
    "t_map",
    "f_map",
    "a_map",
    "g_map",
    "ConstructionResult",
    "build_construction",
    "construct_canonical",
]

MAX_CONSTRUCTION_SIZE = 1 << 26


@dataclass(frozen=True)
class ThetaPair:
    q: int
    theta: int
    xi: int


@dataclass(frozen=True)
class Theta2:
    theta: int
    xi: int
    psi: int
    xi_prime: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.theta, self.xi, self.psi, self.xi_prime


def theta(q: int) -> ThetaPair:
    """Smallest θ with 1 + … + θ >= q, and the excess ξ."""
    if q < 1:
        raise OutOfRange(f"theta needs q >= 1, got {q}")
    t = (isqrt(8 * q + 1) - 1) // 2
    while t * (t + 1) // 2 < q:
        t += 1
    while t > 1 and (t - 1) * t // 2 >= q:
        t -= 1
    return ThetaPair(q, t, t * (t + 1) // 2 - q)


def theta2(q: int) -> Theta2:
    first = theta(q)
    if first.xi == 0:
        # Θ(0) is the empty sum: θ = 0 with no excess
        return Theta2(first.theta, 0, 0, 0)
    second = theta(first.xi)
    return Theta2(first.theta, first.xi, second.theta, second.xi)


@dataclass(frozen=True)
class MDecomposition:
    l: int
    m: int
    theta: int
    S: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "S", tuple(self.S))
        S = self.S
        if any(b <= a for a, b in zip(S, S[1:])):
            raise ValueError(f"S must be strictly increasing: {S}")
        if S and (S[0] < 1 or S[-1] >= self.theta):
            raise ValueError(f"S must lie in 1..theta-1={self.theta - 1}: {S}")
        if self.theta + self.m + self.sigma != self.l + 1:
            raise ValueError(
                f"theta + m + sum(S) = {self.theta + self.m + self.sigma} != l + 1 = {self.l + 1}"
            )

    @property
    def sigma(self) -> int:
        return sum(self.S)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.theta) if k not in self.S)

    @property
    def admissible_for_theorem(self) -> bool:
        return self.m < self.theta - len(self.S)

    @property
    def target_n(self) -> int:
        return self.m + self.theta + self.l

    def layout(self) -> SplitLayout:
        return SplitLayout(self.l, self.m, self.S, self.theta)


def canonical_decomposition(nhat: int, m: int) -> MDecomposition:
    """The standard decomposition S_m of l = 2^nhat - 1 for 0 <= m <= ψ."""
    if nhat < 3:
        raise OutOfRange(f"canonical decompositions need nhat >= 3, got {nhat}")
    th, _, psi, xi_p = theta2(1 << nhat).as_tuple()
    if not 0 <= m <= psi:
        raise OutOfRange(f"m={m} is out of range for nhat={nhat} (need 0 <= m <= {psi})")
    if m < xi_p:
        S = (xi_p - m, *range(psi + 1, th))
    else:
        S = (psi + 1 - m + xi_p, *range(psi + 2, th))
    d = MDecomposition((1 << nhat) - 1, m, th, tuple(sorted(S)))
    if not d.admissible_for_theorem:
        raise InvariantViolation(f"S_{m} for nhat={nhat} violates m < theta - |S|")
    return d


def canonical_range(nhat: int) -> range:
    return range(theta2(1 << nhat).psi + 1)


def _subsets_with_sum(top: int, total: int, max_parts: int) -> list[tuple[int, ...]]:
    """Strictly increasing tuples from 1..top summing to ``total`` with at most ``max_parts`` parts."""
    out: list[tuple[int, ...]] = []
    full = top * (top + 1) // 2
    if total < 0 or total > full:
        return out

    def rec(start: int, remaining: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if len(acc) >= max_parts:
            return
        for v in range(start, top + 1):
            if v > remaining:
                break
            # the largest values still available must be able to reach `remaining`
            hi = top * (top + 1) // 2 - (v - 1) * v // 2
            if hi < remaining:
                break
            acc.append(v)
            rec(v + 1, remaining - v, acc)
            acc.pop()

    rec(1, total, [])
    return out


def enumerate_decompositions(l: int, m: int) -> list[MDecomposition]:
    """Every decomposition S of ``l`` with tail ``m`` and m < θ - |S|, in lexicographic order."""
    if l < 2:
        raise OutOfRange("need l >= 2")
    th = theta(l + 1).theta
    total = l + 1 - th - m
    max_parts = th - m - 1
    if total < 0 or max_parts < 0:
        return []
    return [MDecomposition(l, m, th, S) for S in _subsets_with_sum(th - 1, total, max_parts)]


@dataclass
class AdmissibleSelection:
    decomp: MDecomposition
    codes_by_s: dict[int, VertexSet]
    E: VertexSet
    layout: SplitLayout = field(init=False)
    # s -> {y index: (projected codeword c, y == c)}
    _near: dict[int, dict[int, tuple[int, bool]]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.layout = self.decomp.layout()
        self._near = {}
        for s in self.decomp.S:
            proj = np.unique(_project(self.E.indices, self.layout, s, self.decomp.l))
            table: dict[int, tuple[int, bool]] = {}
            for c in proj.tolist():
                for y, exact in [(c, True)] + [(c ^ (1 << b), False) for b in range(s)]:
                    if y in table and table[y][0] != c:
                        raise AdmissibilityError(
                            f"projections onto the {s}-block are not 3-separated: "
                            f"{table[y][0]:0{s}b} and {c:0{s}b}"
                        )
                    table[y] = (c, exact)
            self._near[s] = table

    def projections(self, s: int) -> VertexSet:
        return VertexSet(s, _project(self.E.indices, self.layout, s, self.decomp.l))

    def nearest(self, s: int, y: int) -> tuple[int, bool] | None:
        return self._near[s].get(y)


def _project(values: np.ndarray | int, layout: SplitLayout, block, length: int):
    start, size = layout.span(block, length)
    return (values >> (length - start - size)) & ((1 << size) - 1)


def predicted_E_size(nhat: int, decomp: MDecomposition, sizes: dict[int, int]) -> int:
    size = 1 << (decomp.theta - 1 + decomp.m - nhat)
    for s in decomp.S:
        size *= sizes[s]
    return size


def build_admissible(
    code: GraphCode,
    decomp: MDecomposition,
    codes_by_s: dict[int, VertexSet] | None = None,
) -> AdmissibleSelection:
    """E = codewords whose every s-block projection lies in the chosen 3-separated code C_s."""
    if code.code is None:
        raise ResourceRefusal("build_admissible needs a materialised code")
    if decomp.l != code.length:
        raise LengthMismatch(f"decomposition is for l={decomp.l}, code has length {code.length}")
    if decomp.sigma > code.free_len:
        raise AdmissibilityError(
            f"s-blocks occupy letters 1..{decomp.sigma} but letters "
            f"{code.free_len + 1}..{code.length} are check letters"
        )
    codes_by_s = dict(codes_by_s or {})
    for s in decomp.S:
        if s not in codes_by_s:
            codes_by_s[s] = separated_code(s)
        cs = codes_by_s[s]
        if cs.dim != s:
            raise LengthMismatch(f"C_{s} lives in Q_{cs.dim}")
        ok, pair = is_k_separated(cs, 3)
        if not ok:
            raise AdmissibilityError(f"C_{s} is not 3-separated: {pair[0]} vs {pair[1]}")
    layout = decomp.layout()
    keep = np.ones(len(code.code), dtype=bool)
    for s in decomp.S:
        proj = _project(code.code.indices, layout, s, decomp.l)
        keep &= np.isin(proj, codes_by_s[s].indices)
    E = VertexSet(decomp.l, code.code.indices[keep])
    expected = predicted_E_size(code.nhat, decomp, {s: len(codes_by_s[s]) for s in decomp.S})
    if len(E) != expected:
        raise InvariantViolation(f"|E| = {len(E)} but the free-coordinate count predicts {expected}")
    return AdmissibleSelection(decomp, codes_by_s, E)


# --- the maps, one word at a time ---------------------------------------------------


def _e(layout: SplitLayout, s: int, y: Word) -> Word:
    """e_s: place ``y`` in the s-block of an otherwise zero word of length l - m."""
    start, size = layout.span(s, layout.short)
    if y.length != size:
        raise LengthMismatch(f"e_{s} takes a word of length {size}")
    return Word(layout.short, y.value << (layout.short - start - size))


def rho(layout: SplitLayout, x: Word, z: Word) -> Word:
    """Swap the letters of ``x`` left of its last 1 with the s-block of ``z`` when that piece is in S."""
    th = layout.theta
    if x.length != th or z.length != layout.short:
        raise LengthMismatch("rho takes x in Q_theta and z in Q_{l-m}")
    k, y = iota_decompose(x)
    if k not in layout.S:
        return concat(x, z)
    zs = project_block(layout, z, k)
    return concat(iota_embed(th, k, zs), z ^ _e(layout, k, zs) ^ _e(layout, k, y))


def t_map(layout: SplitLayout, selection: AdmissibleSelection, x: Word) -> Word:
    th, short, sig = layout.theta, layout.short, layout.sigma
    if x.length != th:
        raise LengthMismatch("t takes x in Q_theta")
    k, y = iota_decompose(x)
    if k not in layout.S:
        # Σ zeros, then x without its first letter
        return Word(short, x.value & ((1 << (th - 1)) - 1))
    hit = selection.nearest(k, y.value)
    if hit is None:
        return Word.zeros(short)
    c, exact = hit
    out = _e(layout, k, Word(k, c))
    if exact:
        out = Word(short, out.value | (1 << (short - (sig + k))))
    return out


def f_map(layout: SplitLayout, selection: AdmissibleSelection, x: Word, z: Word) -> Word:
    return rho(layout, x, z ^ t_map(layout, selection, x))


def a_map(decomp: MDecomposition, alpha: Word) -> Word:
    """Linear map Q_m -> Q_θ sending δ^m_i to δ^θ_{a(i)+1}, a(i) the i-th smallest element of S^c."""
    if alpha.length != decomp.m:
        raise LengthMismatch(f"a takes words of length m={decomp.m}")
    comp = decomp.complement
    if len(comp) < decomp.m:
        raise OutOfRange(f"S^c={comp} has fewer than m={decomp.m} elements")
    th = decomp.theta
    v = 0
    for i in range(1, decomp.m + 1):
        if alpha.bit(i):
            v |= 1 << (th - comp[i - 1] - 1)
    return Word(th, v)


def g_map(layout: SplitLayout, selection: AdmissibleSelection, alpha: Word, x: Word, z: Word) -> Word:
    decomp = selection.decomp
    m = layout.m
    if z.length != layout.l or x.length != layout.theta or alpha.length != m:
        raise LengthMismatch("g takes alpha in Q_m, x in Q_theta, z in Q_l")
    ax = a_map(decomp, alpha)
    zhat = project_block(layout, z, "hat")
    ztail = project_block(layout, z, "final") if m else EMPTY
    middle = concat(ax, t_map(layout, selection, ax)) ^ f_map(layout, selection, x ^ ax, zhat)
    return concat(alpha, middle, ztail ^ alpha)


# --- vectorised construction --------------------------------------------------------


@dataclass
class ConstructionResult:
    decomp: MDecomposition
    D: VertexSet
    V: VertexSet
    result: VertexSet
    predicted_D: int
    predicted_V: int
    E_size: int
    nhat: int | None = None

    @property
    def target_n(self) -> int:
        return self.decomp.target_n

    def metadata(self) -> dict[str, str]:
        d = self.decomp
        return {
            "nhat": "" if self.nhat is None else str(self.nhat),
            "l": str(d.l),
            "m": str(d.m),
            "theta": str(d.theta),
            "S": ",".join(map(str, d.S)),
            "sigma": str(d.sigma),
            "target_n": str(d.target_n),
            "E_size": str(self.E_size),
            "predicted_D": str(self.predicted_D),
            "predicted_V": str(self.predicted_V),
            "predicted_result": str(self.predicted_D - self.predicted_V),
        }


class _VectorMaps:
    """The maps t, f and g evaluated on arrays of z for one fixed (α, x)."""

    def __init__(self, selection: AdmissibleSelection):
        d = selection.decomp
        self.sel = selection
        self.layout = selection.layout
        self.l, self.m, self.th = d.l, d.m, d.theta
        self.short = d.l - d.m
        self.S = set(d.S)
        self.comp = d.complement
        self.block = {s: self.layout.span(s, self.short) for s in d.S}

    def a(self, alpha: int) -> int:
        v = 0
        for i in range(1, self.m + 1):
            if (alpha >> (self.m - i)) & 1:
                v |= 1 << (self.th - self.comp[i - 1] - 1)
        return v

    def t(self, x: int) -> int:
        k, y = _decompose(x, self.th)
        if k not in self.S:
            return x & ((1 << (self.th - 1)) - 1)
        hit = self.sel.nearest(k, y)
        if hit is None:
            return 0
        c, exact = hit
        start, size = self.block[k]
        out = c << (self.short - start - size)
        if exact:
            out |= 1 << (self.short - (self.layout.sigma + k))
        return out

    def f(self, x: int, z: np.ndarray) -> np.ndarray:
        th, short = self.th, self.short
        w = z ^ np.int64(self.t(x))
        k, y = _decompose(x, th)
        if k not in self.S:
            return (np.int64(x) << short) | w
        start, size = self.block[k]
        shift = short - start - size
        ws = (w >> shift) & ((1 << size) - 1)
        head = (ws << (th - k)) | np.int64(1 << (th - k - 1))
        body = w ^ (ws << shift) ^ np.int64(y << shift)
        return (head << short) | body

    def g(self, alpha: int, x: int, z: np.ndarray) -> np.ndarray:
        m, th, short = self.m, self.th, self.short
        ax = self.a(alpha)
        pre = (ax << short) | self.t(ax)
        mid = np.int64(pre) ^ self.f(x ^ ax, z >> m)
        tail = (z & ((1 << m) - 1)) ^ np.int64(alpha)
        return (np.int64(alpha) << (th + self.l)) | (mid << m) | tail


def _decompose(x: int, th: int) -> tuple[int, int]:
    if x == 0:
        return -1, 0
    trailing = (x & -x).bit_length() - 1
    return th - trailing - 1, x >> (trailing + 1)


def build_construction(
    delta: VertexSet,
    decomp: MDecomposition,
    selection: AdmissibleSelection,
    *,
    nhat: int | None = None,
) -> ConstructionResult:
    """Build D, V and D∖V; sizes are checked against 2^{m+θ}|Δ| and 2^m|E|."""
    if delta.dim != decomp.l:
        raise LengthMismatch(f"delta lives in Q_{delta.dim}, decomposition expects l={decomp.l}")
    if selection.decomp != decomp:
        raise ValueError("selection was built for a different decomposition")
    if not decomp.admissible_for_theorem:
        raise OutOfRange(f"m={decomp.m} violates m < theta - |S| = {decomp.theta - len(decomp.S)}")
    if not selection.E.issubset(delta):
        raise AdmissibilityError("E must be a subset of delta")
    n = decomp.target_n
    if n > MAX_INDEX_DIM:
        raise ResourceRefusal(f"target dimension {n} exceeds {MAX_INDEX_DIM}")
    predicted_D = (1 << (decomp.m + decomp.theta)) * len(delta)
    predicted_V = (1 << decomp.m) * len(selection.E)
    if predicted_D > MAX_CONSTRUCTION_SIZE:
        raise ResourceRefusal(
            f"D would have {predicted_D} members (limit {MAX_CONSTRUCTION_SIZE})",
            required_bytes=predicted_D * 8,
        )
    maps = _VectorMaps(selection)
    parts = [
        maps.g(alpha, x, delta.indices)
        for alpha in range(1 << decomp.m)
        for x in range(1 << decomp.theta)
    ]
    D = VertexSet(n, np.concatenate(parts))
    V = VertexSet(n, np.concatenate([
        maps.g(alpha, maps.a(alpha), selection.E.indices) for alpha in range(1 << decomp.m)
    ]) if len(selection.E) else [])
    if len(D) != predicted_D:
        raise InvariantViolation(f"|D| = {len(D)}, expected {predicted_D}: g is not injective")
    if len(V) != predicted_V or not V.issubset(D):
        raise InvariantViolation(f"|V| = {len(V)}, expected {predicted_V} inside D")
    result = D.difference(V)
    return ConstructionResult(decomp, D, V, result, predicted_D, predicted_V, len(selection.E), nhat)


def construct_canonical(nhat: int, m: int) -> ConstructionResult:
    """Construction on the systematic Hamming code of Q_{2^nhat-1} with S_m and default C_s."""
    from .codes import hamming_graph_code

    code = hamming_graph_code(nhat)
    decomp = canonical_decomposition(nhat, m)
    selection = build_admissible(code, decomp)
    return build_construction(code.code, decomp, selection, nhat=nhat)
