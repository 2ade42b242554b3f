"""Constructive builders: the doubling map, systematic perfect codes and
3-separated codes of the recursive even-prefix form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coverage import MAX_INDEX_DIM, VertexSet
from .errors import OutOfRange, ResourceRefusal
from .words import Word

__all__ = [
    "GraphCode",
    "double_dominating",
    "hamming_graph_code",
    "graph_code_by_doubling",
    "separated_code",
    "split_dim",
]

MAX_MATERIALIZED_NHAT = 5
MAX_MATRIX_NHAT = 7


def split_dim(n: int) -> tuple[int, int]:
    """(n̂, ň) with n = 2^n̂ - 1 + ň and 0 <= ň < 2^n̂."""
    if n < 1:
        raise OutOfRange(f"dimension must be positive, got {n}")
    nhat = (n + 1).bit_length() - 1
    return nhat, n - (1 << nhat) + 1


def _parity(arr: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(arr) & 1).astype(np.int64)


def double_dominating(delta: VertexSet) -> VertexSet:
    """Return {x · (x+σ) · π(x) : x in Q_n, σ in Δ} inside Q_{2n+1}."""
    n = delta.dim
    if len(delta) == 0:
        raise ValueError("delta must be nonempty")
    if 2 * n + 1 > MAX_INDEX_DIM:
        raise ResourceRefusal(f"Q_{2 * n + 1} is beyond the materialisable range")
    x = np.arange(1 << n, dtype=np.int64)
    sig = delta.indices
    xs = np.repeat(x, sig.size)
    ss = np.tile(sig, x.size)
    out = (xs << (n + 1)) | ((xs ^ ss) << 1) | _parity(xs)
    result = VertexSet(2 * n + 1, out)
    if len(result) != out.size:
        raise AssertionError("doubling map is not injective")
    return result


@dataclass(frozen=True)
class GraphCode:
    """A perfect code of Q_{2^k-1} in graph form: free letters first, k check letters last.

    ``h_matrix`` has shape (k, free_len); codeword of ``x`` is ``x · (h_matrix @ x mod 2)``.
    ``code`` is ``None`` when only the matrix form was requested.
    """

    nhat: int
    free_len: int
    h_matrix: np.ndarray
    code: VertexSet | None

    @property
    def length(self) -> int:
        return (1 << self.nhat) - 1

    def h(self, x: Word) -> Word:
        if x.length != self.free_len:
            raise OutOfRange(f"h takes words of length {self.free_len}")
        bits = np.array(x.bits(), dtype=np.int64)
        return Word.from_bits((self.h_matrix @ bits) % 2)

    def codeword(self, x: Word) -> Word:
        return Word(self.length, (x.value << self.nhat) | self.h(x).value)

    def h_rows(self) -> list[str]:
        return ["".join(str(int(b)) for b in row) for row in self.h_matrix]


def _h_columns(k: int) -> list[int]:
    # parity-check columns are the binary expansions of 1..2^k-1; the free
    # coordinates take the non-powers-of-two in increasing order
    return [v for v in range(1, 1 << k) if v & (v - 1)]


def _encode_all(columns: list[int], k: int) -> np.ndarray:
    free = len(columns)
    x = np.arange(1 << free, dtype=np.int64)
    h = np.zeros_like(x)
    for j, col in enumerate(columns):
        h ^= ((x >> (free - 1 - j)) & 1) * col
    return (x << k) | h


def hamming_graph_code(nhat: int, materialize: bool = True) -> GraphCode:
    """Systematic Hamming code of length 2^nhat - 1 with the check letters last.

    With ``H = [A | I]`` the check letters of ``x`` are ``A x``; the code is
    perfect because every nonzero syndrome is a column of ``H``.
    """
    if not 2 <= nhat <= MAX_MATRIX_NHAT:
        raise OutOfRange(f"nhat must be in 2..{MAX_MATRIX_NHAT}, got {nhat}")
    if materialize and nhat > MAX_MATERIALIZED_NHAT:
        raise ResourceRefusal(f"materialised codes are capped at nhat <= {MAX_MATERIALIZED_NHAT}")
    cols = _h_columns(nhat)
    free = len(cols)
    A = np.array([[(c >> (nhat - 1 - i)) & 1 for c in cols] for i in range(nhat)], dtype=np.uint8)
    A.setflags(write=False)
    code = VertexSet((1 << nhat) - 1, _encode_all(cols, nhat)) if materialize else None
    return GraphCode(nhat, free, A, code)


def _permute_bits(values: np.ndarray, length: int, order: list[int]) -> np.ndarray:
    """New word whose position i+1 is old position order[i]+1 (0-based from the left)."""
    out = np.zeros_like(values)
    for new, old in enumerate(order):
        out |= ((values >> (length - 1 - old)) & 1) << (length - 1 - new)
    return out


def graph_code_by_doubling(nhat: int) -> VertexSet:
    """Perfect code of Q_{2^nhat-1} by iterating `double_dominating` from {0} in Q_1.

    After each doubling the letters that are not free (the previous check
    letters and the parity letter) are moved to the end, so the result stays
    in graph form.
    """
    if not 1 <= nhat <= MAX_MATERIALIZED_NHAT:
        raise OutOfRange(f"nhat must be in 1..{MAX_MATERIALIZED_NHAT}")
    code = VertexSet(1, [0])
    k = 1  # number of check letters, all at the end
    for _ in range(nhat - 1):
        n = code.dim
        doubled = double_dominating(code)
        # layout of x·(x+σ)·π(x): [0, n) x, [n, 2n) x+σ, 2n parity; within
        # x+σ the last k letters are the (shifted) check letters of σ
        free_x = list(range(n))
        free_sig = list(range(n, 2 * n - k))
        checks = list(range(2 * n - k, 2 * n)) + [2 * n]
        order = free_x + free_sig + checks
        code = VertexSet(2 * n + 1, _permute_bits(doubled.indices, 2 * n + 1, order))
        k += 1
    return code


def _lambda_lower(s: int) -> int:
    shat, scheck = split_dim(s)
    return 1 << (s - shat - (1 if scheck > 0 else 0))


def separated_code(s: int) -> VertexSet:
    """3-separated subset of Q_s of size 2^{s - ŝ - [š > 0]}.

    Starts from the perfect code of length p = 2^ŝ - 1 and, for q = s - p > 0,
    forms {(x, x+y) : y in D, x in Q_q even}, with x padded to length p by zeros.
    """
    if s < 1:
        raise OutOfRange("s must be positive")
    p = (1 << split_dim(s)[0]) - 1
    q = s - p
    if p == 1:
        base = VertexSet(1, [0])
    else:
        base = hamming_graph_code(split_dim(p)[0]).code
    if q == 0:
        return base
    if s > 30:
        raise ResourceRefusal("separated codes are materialised only for s <= 30")
    x = np.arange(1 << q, dtype=np.int64)
    x = x[_parity(x) == 0]
    xs = np.repeat(x, len(base))
    ys = np.tile(base.indices, x.size)
    out = (xs << p) | ((xs << (p - q)) ^ ys)
    result = VertexSet(s, out)
    assert len(result) == _lambda_lower(s)
    return result
