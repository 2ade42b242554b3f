"""Exhaustive radius-1 coverage checks over Q_n and small exact oracles.

A vertex of Q_n is stored as the integer whose most significant of ``n``
bits is position 1.  Coverage uses a dense array with one byte per vertex.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import LengthMismatch, OutOfRange, ResourceRefusal
from .words import Word

__all__ = [
    "VertexSet",
    "CoverageReport",
    "ball1",
    "check_domination",
    "is_k_separated",
    "brute_force_gamma",
    "brute_force_lambda",
    "default_max_dim",
    "MAX_INDEX_DIM",
]

# int64 indices; wider vertex sets are never materialised
MAX_INDEX_DIM = 62
DEFAULT_MAX_DIM = 28
HARD_MAX_DIM = 31
UNDOMINATED_LIMIT = 64


def default_max_dim() -> int:
    """Dimension cap for bitmap checks; ``CUBEDOM_MAX_DIM`` overrides (up to 31)."""
    raw = os.environ.get("CUBEDOM_MAX_DIM")
    if not raw:
        return DEFAULT_MAX_DIM
    return min(int(raw), HARD_MAX_DIM)


class VertexSet:
    """A set of distinct words of a common length ``dim``.

    Members are kept as a sorted ``int64`` array of vertex indices.
    """

    __slots__ = ("dim", "indices")

    def __init__(self, dim: int, indices: Iterable[int] | np.ndarray = ()):
        if not 0 <= dim <= MAX_INDEX_DIM:
            raise OutOfRange(f"VertexSet supports dimensions 0..{MAX_INDEX_DIM}, got {dim}")
        arr = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                                   dtype=np.int64))
        if arr.size and (arr[0] < 0 or (dim < 63 and int(arr[-1]) >> dim)):
            raise OutOfRange(f"vertex index out of range for Q_{dim}")
        arr.setflags(write=False)
        self.dim = dim
        self.indices = arr

    @classmethod
    def from_words(cls, words: Iterable[Word], dim: int | None = None) -> "VertexSet":
        words = list(words)
        if dim is None:
            if not words:
                raise ValueError("dimension required for an empty VertexSet")
            dim = words[0].length
        for w in words:
            if w.length != dim:
                raise LengthMismatch(f"word {w} has length {w.length}, expected {dim}")
        return cls(dim, [w.value for w in words])

    @classmethod
    def from_strings(cls, rows: Iterable[str], dim: int | None = None) -> "VertexSet":
        return cls.from_words((Word.from_str(r) for r in rows), dim)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[Word]:
        for v in self.indices.tolist():
            yield Word(self.dim, v)

    def __contains__(self, w: object) -> bool:
        if not isinstance(w, Word) or w.length != self.dim:
            return False
        i = np.searchsorted(self.indices, w.value)
        return bool(i < self.indices.size and self.indices[i] == w.value)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, VertexSet) and self.dim == other.dim
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.dim, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"VertexSet(dim={self.dim}, size={len(self)})"

    def words(self) -> list[Word]:
        return list(self)

    def strings(self) -> list[str]:
        return [format(v, f"0{self.dim}b") for v in self.indices.tolist()]

    def difference(self, other: "VertexSet") -> "VertexSet":
        if other.dim != self.dim:
            raise LengthMismatch("dimension mismatch")
        return VertexSet(self.dim, np.setdiff1d(self.indices, other.indices, assume_unique=True))

    def union(self, other: "VertexSet") -> "VertexSet":
        if other.dim != self.dim:
            raise LengthMismatch("dimension mismatch")
        return VertexSet(self.dim, np.union1d(self.indices, other.indices))

    def issubset(self, other: "VertexSet") -> bool:
        return self.dim == other.dim and bool(np.isin(self.indices, other.indices).all())


@dataclass
class CoverageReport:
    dim: int
    covered_count: int
    undominated: list[Word]
    undominated_total: int
    multiplicity_histogram: dict[int, int] | None = None

    @property
    def dominated(self) -> bool:
        return self.undominated_total == 0

    def summary(self) -> str:
        lines = [
            f"dim={self.dim} vertices={1 << self.dim} covered={self.covered_count} "
            f"undominated={self.undominated_total}",
            "status=" + ("dominated" if self.dominated else "NOT dominated"),
        ]
        if self.multiplicity_histogram is not None:
            hist = " ".join(f"{k}:{v}" for k, v in sorted(self.multiplicity_histogram.items()))
            lines.append(f"multiplicity {hist}")
        for w in self.undominated:
            lines.append(f"undominated {w}")
        if self.undominated_total > len(self.undominated):
            lines.append(f"... {self.undominated_total - len(self.undominated)} more")
        return "\n".join(lines)


def ball1(w: Word) -> VertexSet:
    n = w.length
    return VertexSet(n, [w.value] + [w.value ^ (1 << b) for b in range(n)])


def _bitmap_bytes(dim: int) -> int:
    return 1 << dim


def _require_dim(dim: int, max_dim: int | None) -> None:
    cap = default_max_dim() if max_dim is None else max_dim
    if dim > cap:
        need = _bitmap_bytes(dim)
        raise ResourceRefusal(
            f"Q_{dim} needs a {need / 2**30:.1f} GiB coverage map; cap is dimension {cap}",
            required_bytes=need,
        )


def _mark(covered: np.ndarray, members: np.ndarray, dim: int) -> None:
    covered[members] = True
    for b in range(dim):
        covered[members ^ np.int64(1 << b)] = True


def check_domination(
    dim: int,
    vset: VertexSet,
    *,
    histogram: bool = False,
    max_undominated: int = UNDOMINATED_LIMIT,
    max_dim: int | None = None,
    threads: int = 1,
) -> CoverageReport:
    """Mark the radius-1 balls of every member and report what is left uncovered.

    With ``histogram`` the exact cover multiplicity of every vertex is tallied.
    ``threads`` splits the member list between workers; the result does not
    depend on the split.
    """
    if vset.dim != dim:
        raise LengthMismatch(f"set lives in Q_{vset.dim}, asked about Q_{dim}")
    _require_dim(dim, max_dim)
    members = vset.indices
    size = 1 << dim
    hist = None
    if histogram:
        # each vertex has at most dim+1 dominators, so uint8 suffices for dim <= 31
        counts = np.zeros(size, dtype=np.uint8)
        counts[members] += 1
        for b in range(dim):
            counts[members ^ np.int64(1 << b)] += 1
        covered = counts > 0
        tally = np.bincount(counts, minlength=1)
        hist = {int(k): int(v) for k, v in enumerate(tally) if v}
    else:
        covered = np.zeros(size, dtype=bool)
        if threads > 1 and members.size > 1:
            chunks = np.array_split(members, threads)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda c: _mark(covered, c, dim), chunks))
        else:
            _mark(covered, members, dim)
    holes = np.flatnonzero(~covered)
    total = int(holes.size)
    listed = [Word(dim, int(v)) for v in holes[:max_undominated]]
    return CoverageReport(dim, size - total, listed, total, hist)


def naive_dominates(dim: int, words: Iterable[Word]) -> bool:
    """Vertex-by-vertex domination check; reference path for small ``dim``."""
    members = [w.value for w in words]
    for y in range(1 << dim):
        if not any((x ^ y).bit_count() <= 1 for x in members):
            return False
    return True


def _ball_volume(n: int, r: int) -> int:
    from math import comb

    return sum(comb(n, i) for i in range(r + 1))


def is_k_separated(vset: VertexSet, k: int) -> tuple[bool, tuple[Word, Word] | None]:
    """True iff all distinct members are at distance >= k; otherwise a witness pair.

    Small sets are compared pairwise; large ones are scanned through the
    radius-(k-1) neighbourhood of each member against a membership map.
    """
    idx = vset.indices
    n = vset.dim
    if idx.size < 2 or k <= 1:
        return True, None
    pairwise_cost = idx.size * idx.size
    scan_cost = idx.size * _ball_volume(n, k - 1)
    if pairwise_cost <= 4 * scan_cost or n > 30:
        for i in range(idx.size - 1):
            d = np.bitwise_count(idx[i + 1:] ^ idx[i])
            bad = np.flatnonzero(d < k)
            if bad.size:
                return False, (Word(n, int(idx[i])), Word(n, int(idx[i + 1 + bad[0]])))
        return True, None
    from itertools import combinations

    member = np.zeros(1 << n, dtype=bool)
    member[idx] = True
    best: tuple[int, int] | None = None
    for r in range(1, k):
        for flips in combinations(range(n), r):
            mask = np.int64(sum(1 << b for b in flips))
            nb = idx ^ mask
            hit = np.flatnonzero(member[nb])
            if hit.size:
                a = int(idx[hit[0]])
                pair = (min(a, a ^ int(mask)), max(a, a ^ int(mask)))
                if best is None or pair < best:
                    best = pair
    if best is None:
        return True, None
    return False, (Word(n, best[0]), Word(n, best[1]))


# --- exact oracles -------------------------------------------------------------------


def _balls(n: int) -> list[int]:
    return [
        (1 << v) | sum(1 << (v ^ (1 << b)) for b in range(n))
        for v in range(1 << n)
    ]


def brute_force_gamma(n: int) -> tuple[int, VertexSet]:
    """Exact domination number of Q_n (n <= 6) by branch and bound.

    Branches on the dominators of the lowest uncovered vertex.  Vertex 0 is
    fixed in the set (translation symmetry).  A branch is cut when even the
    largest possible remaining gains cannot reach the uncovered count.
    """
    if not 1 <= n <= 6:
        raise ResourceRefusal(f"exact domination search supports 1 <= n <= 6, got {n}")
    size = 1 << n
    full = (1 << size) - 1
    balls = _balls(n)
    neighbours = [[v] + [v ^ (1 << b) for b in range(n)] for v in range(size)]
    neighbours = [sorted(x) for x in neighbours]
    lower = -(-size // (n + 1))

    best_set = _greedy_cover(balls, full)
    best = [len(best_set), best_set]

    def bound(uncovered: int) -> int:
        gains = sorted(((balls[v] & uncovered).bit_count() for v in range(size)), reverse=True)
        need, acc = 0, 0
        target = uncovered.bit_count()
        for g in gains:
            if acc >= target:
                break
            acc += g
            need += 1
        return need

    def search(chosen: list[int], uncovered: int) -> None:
        if uncovered == 0:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        if len(chosen) + bound(uncovered) >= best[0]:
            return
        v = (uncovered & -uncovered).bit_length() - 1
        for d in neighbours[v]:
            chosen.append(d)
            search(chosen, uncovered & ~balls[d])
            chosen.pop()
            if best[0] == lower:
                return

    search([0], full & ~balls[0])
    return best[0], VertexSet(n, best[1])


def _greedy_cover(balls: list[int], full: int) -> list[int]:
    chosen: list[int] = []
    uncovered = full
    while uncovered:
        v = max(range(len(balls)), key=lambda u: ((balls[u] & uncovered).bit_count(), -u))
        chosen.append(v)
        uncovered &= ~balls[v]
    return chosen


def _coordinate_group(s: int, w: int) -> list[list[int]]:
    """Vertex actions of the permutations of bits 0..w-1 and w..s-1 among themselves."""
    from itertools import permutations

    v = np.arange(1 << s, dtype=np.int64)
    bits = [(v >> i) & 1 for i in range(s)]
    out = []
    for a in permutations(range(w)):
        for b in permutations(range(w, s)):
            image = np.zeros_like(v)
            for i, src in enumerate(a + b):
                image |= bits[src] << i
            out.append(image.tolist())
    return out


def brute_force_lambda(s: int) -> tuple[int, VertexSet]:
    """Largest 3-separated subset of Q_s (s <= 8) by maximum-clique search.

    Vertices are joined when they are at distance >= 3.  Any code with two
    or more words can be moved so that a closest pair becomes 0 and
    1^w 0^(s-w), after which every other member has weight >= w.  Each w is
    searched separately.  While the coordinate permutations fixing the
    current clique are nontrivial the search branches on one representative
    per orbit of candidates, then falls back to plain colouring
    branch-and-bound on bitsets.  The incumbent starts from
    `cubedom.codes.separated_code`.
    """
    if not 1 <= s <= 8:
        raise ResourceRefusal(f"exact 3-separated search supports 1 <= s <= 8, got {s}")
    from .codes import separated_code

    size = 1 << s
    adj = [sum(1 << v for v in range(size) if (u ^ v).bit_count() >= 3) for u in range(size)]
    seed = separated_code(s)
    best = [len(seed), seed.indices.tolist()]

    def colour_order(cand: int) -> list[tuple[int, int]]:
        # greedy sequential colouring; (vertex, colour bound) in increasing colour
        out: list[tuple[int, int]] = []
        colour = 0
        rest = cand
        while rest:
            colour += 1
            q = rest
            while q:
                v = (q & -q).bit_length() - 1
                q &= ~(1 << v)
                q &= ~adj[v]
                rest &= ~(1 << v)
                out.append((v, colour))
        return out

    def expand(clique: list[int], cand: int) -> None:
        for v, c in reversed(colour_order(cand)):
            if len(clique) + c <= best[0]:
                return
            clique.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(clique, nxt)
            elif len(clique) > best[0]:
                best[0], best[1] = len(clique), list(clique)
            clique.pop()
            cand &= ~(1 << v)

    def by_orbits(clique: list[int], cand: int, group: list[list[int]]) -> None:
        if len(group) == 1:
            expand(clique, cand)
            return
        while cand:
            if len(clique) + colour_order(cand)[-1][1] <= best[0]:
                return
            v = (cand & -cand).bit_length() - 1
            orbit = 0
            for g in group:
                orbit |= 1 << g[v]
            nxt = cand & adj[v]
            if nxt:
                by_orbits(clique + [v], nxt, [g for g in group if g[v] == v])
            elif len(clique) + 1 > best[0]:
                best[0], best[1] = len(clique) + 1, clique + [v]
            # every clique through this orbit is an image of one through v
            cand &= ~orbit

    for w in range(3, s + 1):
        u = (1 << w) - 1
        cand = 0
        for v in range(size):
            if v != u and v.bit_count() >= w and (v ^ u).bit_count() >= 3:
                cand |= 1 << v
        if cand:
            by_orbits([0, u], cand, _coordinate_group(s, w))
        elif 2 > best[0]:
            best[0], best[1] = 2, [0, u]
    return best[0], VertexSet(s, best[1])
