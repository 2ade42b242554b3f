"""Binary words over F_2 and the block layouts used by the wedge construction.

Positions are 1-based from the left: position 1 is the most significant bit
of ``Word.value``.  The empty word has length 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import LengthMismatch, OutOfRange

__all__ = [
    "Word",
    "EMPTY",
    "SplitLayout",
    "xor",
    "hamming",
    "weight",
    "concat",
    "unit_delta",
    "iota_embed",
    "iota_decompose",
    "parity",
    "project_block",
    "replace_block",
]


@dataclass(frozen=True, slots=True)
class Word:
    """An immutable binary word of fixed length."""

    length: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"negative word length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value {self.value} does not fit in {self.length} letters")

    @classmethod
    def from_str(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "∘"):
            return EMPTY
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def zeros(cls, length: int) -> "Word":
        return cls(length, 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Word":
        bits = list(bits)
        v = 0
        for b in bits:
            v = (v << 1) | (int(b) & 1)
        return cls(len(bits), v)

    def bit(self, pos: int) -> int:
        """Letter at 1-based position ``pos``."""
        if not 1 <= pos <= self.length:
            raise OutOfRange(f"position {pos} outside 1..{self.length}")
        return (self.value >> (self.length - pos)) & 1

    def bits(self) -> list[int]:
        return [(self.value >> (self.length - p)) & 1 for p in range(1, self.length + 1)]

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __repr__(self) -> str:
        return f"Word('{self}')" if self.length else "Word(∘)"

    def __xor__(self, other: "Word") -> "Word":
        return xor(self, other)

    def __add__(self, other: "Word") -> "Word":
        # F_2 addition; concatenation is `concat` or the `|` operator
        return xor(self, other)

    __sub__ = __add__

    def __or__(self, other: "Word") -> "Word":
        return concat(self, other)


EMPTY = Word(0, 0)


def _check_same(a: Word, b: Word) -> None:
    if a.length != b.length:
        raise LengthMismatch(f"word lengths differ: {a.length} vs {b.length}")


def xor(a: Word, b: Word) -> Word:
    _check_same(a, b)
    return Word(a.length, a.value ^ b.value)


def hamming(a: Word, b: Word) -> int:
    _check_same(a, b)
    return (a.value ^ b.value).bit_count()


def weight(w: Word) -> int:
    return w.value.bit_count()


def concat(*words: Word) -> Word:
    length, value = 0, 0
    for w in words:
        value = (value << w.length) | w.value
        length += w.length
    return Word(length, value)


def unit_delta(p: int, q: int) -> Word:
    """Length-``p`` word with a single 1 at position ``q``."""
    if not 1 <= q <= p:
        raise OutOfRange(f"unit_delta position {q} outside 1..{p}")
    return Word(p, 1 << (p - q))


def iota_embed(j: int, i: int, y: Word = EMPTY) -> Word:
    """Embed ``y`` (length ``i``) into Q_j as ``y·1·0…0``.

    ``i = 0`` gives ``10…0`` and ``i = -1`` gives the zero word; both take
    the empty word.
    """
    if not -1 <= i < j:
        raise OutOfRange(f"cannot embed Q_{i} into Q_{j}")
    if y.length != max(i, 0):
        raise LengthMismatch(f"iota_embed({j}, {i}) needs a word of length {max(i, 0)}, got {y.length}")
    if i == -1:
        return Word(j, 0)
    return Word(j, ((y.value << 1) | 1) << (j - i - 1))


def iota_decompose(x: Word) -> tuple[int, Word]:
    """Inverse of `iota_embed`: ``k`` is the position of the last 1, minus one."""
    if x.value == 0:
        return -1, EMPTY
    trailing = (x.value & -x.value).bit_length() - 1
    k = x.length - trailing - 1
    return k, Word(k, x.value >> (trailing + 1))


def parity(w: Word) -> int:
    return w.value.bit_count() & 1


BlockId = Union[int, str]


@dataclass(frozen=True)
class SplitLayout:
    """Block layout ``s_1 … s_q | θ−1 | m`` of a length-``l`` word.

    Block ids: an ``int`` s in ``S`` for the s-blocks, ``"penultimate"`` for
    the (θ−1)-block, ``"final"`` for the m-block and ``"hat"`` for everything
    but the m-block.  Words of length ``l`` and ``l - m`` are both accepted.
    """

    l: int
    m: int
    S: tuple[int, ...]
    theta: int
    offsets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        S = tuple(self.S)
        object.__setattr__(self, "S", S)
        if any(b <= a for a, b in zip(S, S[1:])) or (S and S[0] < 1):
            raise ValueError(f"block sizes must be strictly increasing positive integers: {S}")
        if self.m < 0 or self.theta < 1:
            raise ValueError("need m >= 0 and theta >= 1")
        if sum(S) + self.theta - 1 + self.m != self.l:
            raise ValueError(
                f"blocks {S} + (theta-1={self.theta - 1}) + m={self.m} do not sum to l={self.l}"
            )
        offsets: dict = {}
        pos = 0
        for s in S:
            offsets[s] = (pos, s)
            pos += s
        offsets["penultimate"] = (pos, self.theta - 1)
        offsets["hat"] = (0, self.l - self.m)
        offsets["final"] = (self.l - self.m, self.m)
        object.__setattr__(self, "offsets", offsets)

    @property
    def sigma(self) -> int:
        return sum(self.S)

    @property
    def short(self) -> int:
        """Length ``l - m`` of the words the maps t, f, rho act on."""
        return self.l - self.m

    def blocks(self, full: bool = True) -> list[BlockId]:
        ids: list[BlockId] = [*self.S, "penultimate"]
        if full and self.m:
            ids.append("final")
        return ids

    def span(self, block: BlockId, length: int) -> tuple[int, int]:
        """(0-based start, size) of ``block`` inside a word of ``length`` letters."""
        if length not in (self.l, self.l - self.m):
            raise LengthMismatch(f"word length {length} fits neither l={self.l} nor l-m={self.short}")
        try:
            start, size = self.offsets[block]
        except KeyError:
            raise OutOfRange(f"unknown block {block!r} for layout S={self.S}") from None
        if start + size > length:
            raise OutOfRange(f"block {block!r} does not exist in a word of length {length}")
        return start, size


def project_block(layout: SplitLayout, w: Word, block: BlockId) -> Word:
    start, size = layout.span(block, w.length)
    shift = w.length - start - size
    return Word(size, (w.value >> shift) & ((1 << size) - 1))


def replace_block(layout: SplitLayout, w: Word, block: BlockId, y: Word) -> Word:
    start, size = layout.span(block, w.length)
    if y.length != size:
        raise LengthMismatch(f"block {block!r} has {size} letters, replacement has {y.length}")
    shift = w.length - start - size
    mask = ((1 << size) - 1) << shift
    return Word(w.length, (w.value & ~mask) | (y.value << shift))
