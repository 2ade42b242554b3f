"""Exact-rational ledger of bounds on the multiplicative gain χ_n.

χ_n = 1 - γ_n · 2^{n̂ - n}, so a lower bound on χ_n is an upper bound on
γ_n.  Everything here is exact: `fractions.Fraction` for χ and Python
integers for γ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .codes import split_dim
from .errors import OutOfRange
from .wedge import MDecomposition, canonical_decomposition, canonical_range, enumerate_decompositions, theta

__all__ = [
    "DimSplit",
    "dim_split",
    "wedge_contains",
    "chi_upper_classic",
    "chi_upper_mod6",
    "lambda_lower",
    "chimain_bound",
    "Seed",
    "load_seeds",
    "seed_table",
    "rule_gamma_self",
    "Provenance",
    "BoundEntry",
    "best_bounds",
    "render_table",
    "format_chi",
    "format_gamma",
    "published_grid",
    "MAX_LEDGER_N",
]

MAX_LEDGER_N = 1023
EXACT_GAMMA = {1: 1, 2: 2, 3: 2, 4: 4, 5: 7, 6: 12, 7: 16, 8: 32, 9: 62}


@dataclass(frozen=True)
class DimSplit:
    n: int
    nhat: int
    ncheck: int


def dim_split(n: int) -> DimSplit:
    nhat, ncheck = split_dim(n)
    return DimSplit(n, nhat, ncheck)


def wedge_contains(n: int, p: int) -> bool:
    """True iff p lies in the domination wedge with vertex n."""
    if n < 1 or p < 1:
        raise OutOfRange("wedge_contains needs positive dimensions")
    nh, nc = split_dim(n)
    ph, pc = split_dim(p)
    lift = ph - nh
    return lift >= 0 and pc >= (nc << lift)


def chi_upper_classic(n: int) -> Fraction:
    nhat = split_dim(n)[0]
    return 1 - Fraction(1 << nhat, n + (n & 1))


def chi_upper_mod6(n: int) -> Fraction | None:
    nhat = split_dim(n)[0]
    if n % 6 == 0:
        return 1 - Fraction(n - 2) / (n - 2 - Fraction(2, n)) * Fraction(1 << nhat, n)
    if n % 6 == 5 and n >= 11:
        pairs = n * (n - 1) // 2
        return 1 - (1 + Fraction(10, 5 * pairs - n + 2)) * Fraction(1 << nhat, n + 1)
    return None


def lambda_lower(s: int) -> int:
    """Size of the recursive 3-separated code in Q_s: 2^{s - ŝ - [š > 0]}."""
    shat, scheck = split_dim(s)
    return 1 << (s - shat - (scheck > 0))


def chimain_bound(
    nhat: int,
    m: int,
    decomp: MDecomposition | None = None,
    lambda_fn: Callable[[int], int] = lambda_lower,
) -> Fraction:
    """2^{m - 2^nhat} · Π_{s in S} λ(s), the gain at n = 2^nhat - 1 + θ + m."""
    if decomp is None:
        decomp = canonical_decomposition(nhat, m)
    if decomp.l != (1 << nhat) - 1 or decomp.m != m:
        raise OutOfRange(f"decomposition is not an m={m} decomposition of 2^{nhat} - 1")
    prod = 1
    for s in decomp.S:
        prod *= lambda_fn(s)
    return Fraction(prod) * Fraction(2) ** (m - (1 << nhat))


# --- seeds ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    n: int
    chi: Fraction
    sharp: bool
    cite: str
    tabulated: bool = True

    def line(self) -> str:
        out = f"n={self.n} chi={self.chi.numerator}/{self.chi.denominator} sharp={int(self.sharp)} cite={self.cite}"
        return out if self.tabulated else out + " fig=0"


def _parse_seed_line(line: str) -> Seed:
    fields = dict(tok.split("=", 1) for tok in line.split())
    try:
        return Seed(
            n=int(fields["n"]),
            chi=Fraction(fields["chi"]),
            sharp=fields.get("sharp", "0") == "1",
            cite=fields.get("cite", "-"),
            tabulated=fields.get("fig", "1") != "0",
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad seed line: {line!r}") from exc


def load_seeds(path: str | Path | None = None) -> list[Seed]:
    if path is None:
        text = resources.files("cubedom.data").joinpath("seeds.txt").read_text()
    else:
        text = Path(path).read_text()
    seeds = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            seeds.append(_parse_seed_line(line))
    return seeds


def seed_table() -> list[Seed]:
    return load_seeds()


def rule_gamma_self(n: int, gamma_n: int | None = None) -> tuple[int, int, Fraction]:
    """(γ_n - 1, γ_n · 2^{γ_n - n - 1}, implied χ) from an exactly known γ_n.

    The implied χ can be negative, meaning the rule is weaker than 2^{n - n̂}.
    """
    if n not in (5, 6, 9):
        raise OutOfRange(f"gamma_{n} is not known exactly outside the trivial families")
    if gamma_n is None:
        gamma_n = EXACT_GAMMA[n]
    if gamma_n != EXACT_GAMMA[n]:
        raise ValueError(f"gamma_{n} = {EXACT_GAMMA[n]}, not {gamma_n}")
    target = gamma_n - 1
    bound = gamma_n << (gamma_n - n - 1)
    nhat = split_dim(target)[0]
    return target, bound, 1 - Fraction(bound, 1 << (target - nhat))


# --- ledger ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    kind: str  # exact-family | seed | wedge | chimain | zero
    label: str | None = None
    source: int | None = None
    nhat: int | None = None
    m: int | None = None
    S: tuple[int, ...] | None = None

    def __str__(self) -> str:
        if self.kind == "seed":
            return f"seed({self.label})"
        if self.kind == "wedge":
            return f"wedge({self.source})"
        if self.kind == "chimain":
            return f"chimain(nhat={self.nhat};m={self.m};S={'|'.join(map(str, self.S))})"
        return self.kind


@dataclass(frozen=True)
class BoundEntry:
    n: int
    nhat: int
    ncheck: int
    chi_lower: Fraction
    chi_upper: Fraction
    provenance: Provenance
    sharp: bool = False
    origin: Provenance | None = field(default=None, compare=False)

    @property
    def gamma_upper(self) -> int:
        g = (1 - self.chi_lower) * (1 << (self.n - self.nhat))
        if g.denominator != 1:
            raise ValueError(f"gamma bound for n={self.n} is not an integer: {g}")
        return g.numerator


@dataclass(frozen=True)
class _Source:
    n: int
    chi: Fraction
    prov: Provenance
    rank: int  # tie-break between kinds at the same source dimension
    sharp: bool = False


def _chimain_sources(N: int, sweep: bool, lambda_fn: Callable[[int], int]) -> list[_Source]:
    out: dict[int, _Source] = {}
    nhat = 3
    while True:
        l = (1 << nhat) - 1
        th = theta(l + 1).theta
        if l + th > N:
            break
        if sweep:
            candidates = [d for m in range(th) for d in enumerate_decompositions(l, m)]
        else:
            candidates = [canonical_decomposition(nhat, m) for m in canonical_range(nhat)]
        for d in candidates:
            n = d.target_n
            if n > N or n - l >= (1 << nhat):
                continue
            chi = chimain_bound(nhat, d.m, d, lambda_fn)
            if n not in out or chi > out[n].chi:
                prov = Provenance("chimain", nhat=nhat, m=d.m, S=d.S)
                out[n] = _Source(n, chi, prov, rank=1)
        nhat += 1
    return list(out.values())


def best_bounds(
    N: int,
    seeds: Sequence[Seed] | None = None,
    *,
    sweep: bool = False,
    lambda_fn: Callable[[int], int] = lambda_lower,
    tabulated_only: bool = False,
) -> list[BoundEntry]:
    """Best lower bound on χ_n for 1 <= n <= N, with its source.

    Sources are the seeds, the gains from canonical decompositions (every
    decomposition with ``sweep``), and their images under wedge propagation.
    Ties go to the smallest source dimension.  ``tabulated_only`` drops seeds
    marked ``fig=0``.
    """
    if not 1 <= N <= MAX_LEDGER_N:
        raise OutOfRange(f"ledger covers 1 <= N <= {MAX_LEDGER_N}, got {N}")
    if seeds is None:
        seeds = seed_table()
    if tabulated_only:
        seeds = [s for s in seeds if s.tabulated]
    sources = [
        _Source(s.n, s.chi, Provenance("seed", label=s.cite, source=s.n), rank=0, sharp=s.sharp)
        for s in seeds if s.n <= N
    ]
    sources += _chimain_sources(N, sweep, lambda_fn)
    sources.sort(key=lambda s: (s.n, s.rank))

    entries = []
    for n in range(1, N + 1):
        nhat, ncheck = split_dim(n)
        upper = chi_upper_classic(n)
        alt = chi_upper_mod6(n)
        if alt is not None and alt < upper:
            upper = alt
        if ncheck <= 1:
            prov = Provenance("exact-family")
            entries.append(BoundEntry(n, nhat, ncheck, Fraction(0), upper, prov, sharp=True))
            continue
        best: _Source | None = None
        for src in sources:
            if src.n > n:
                break
            if wedge_contains(src.n, n) and (best is None or src.chi > best.chi):
                best = src
        if best is None or best.chi == 0:
            entries.append(BoundEntry(n, nhat, ncheck, Fraction(0), upper, Provenance("zero")))
            continue
        if best.n == n:
            prov, sharp = best.prov, best.sharp
        else:
            prov, sharp = Provenance("wedge", source=best.n), False
        entries.append(BoundEntry(n, nhat, ncheck, best.chi, upper, prov, sharp, origin=best.prov))
    return entries


# --- rendering -------------------------------------------------------------------------


def _pow2_exponent(q: int) -> int | None:
    return q.bit_length() - 1 if q > 0 and q & (q - 1) == 0 else None


def format_chi(chi: Fraction, power_from: int = 6) -> str:
    """``p/q``; ``2^-a`` when χ = 2^-a with a >= ``power_from``."""
    if chi == 0:
        return "0"
    a = _pow2_exponent(chi.denominator)
    if chi.numerator == 1 and a is not None and a >= power_from:
        return f"2^-{a}"
    return f"{chi.numerator}/{chi.denominator}"


def parse_chi(text: str) -> Fraction:
    text = text.strip()
    if text.startswith("2^"):
        return Fraction(2) ** int(text[2:])
    return Fraction(text)


def format_gamma(g: int) -> str:
    """``2^a``, ``2^a - 2^b`` or plain decimal."""
    if g > 0 and g & (g - 1) == 0:
        return f"2^{g.bit_length() - 1}"
    a = g.bit_length()
    rest = (1 << a) - g
    if g > 0 and rest & (rest - 1) == 0 and rest < g:
        return f"2^{a} - 2^{rest.bit_length() - 1}"
    return str(g)


def _figure1_note(e: BoundEntry) -> str:
    p = e.provenance
    if p.kind == "seed":
        return "" if p.label == "-" else p.label
    if p.kind == "wedge":
        return str(p.source)
    if p.kind == "zero":
        return "?"
    if p.kind == "chimain":
        return f"nhat={p.nhat},m={p.m}"
    return ""


def _render_figure1(entries: Iterable[BoundEntry]) -> str:
    lines = ["n    chi        note"]
    for e in entries:
        if not 2 <= e.n <= 33:
            continue
        label = f"{e.n}{'*' if e.sharp else ''}"
        lines.append(f"{label:<4} {format_chi(e.chi_lower):<10} {_figure1_note(e)}".rstrip())
    return "\n".join(lines) + "\n"


def published_grid() -> dict[tuple[int, int], Fraction]:
    """The published grid as {(n̂, ň): χ}; empty cells are omitted."""
    text = resources.files("cubedom.data").joinpath("figure2.txt").read_text()
    cells: dict[tuple[int, int], Fraction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        lo, _, hi = line[0].partition("-")
        rows = range(int(lo), int(hi or lo) + 1)
        for nhat, tok in enumerate(line[1:], start=1):
            if tok == "x":
                continue
            for nc in rows:
                cells[(nhat, nc)] = parse_chi(tok)
    return cells


def _render_grid(entries: Sequence[BoundEntry], annotate: bool = True) -> str:
    by_cell = {(e.nhat, e.ncheck): e for e in entries}
    max_hat = max(e.nhat for e in entries)
    cols = list(range(1, max_hat + 1))
    max_check = (1 << max_hat) - 1

    def row(nc: int) -> tuple[str, ...]:
        return tuple(
            format_chi(by_cell[(h, nc)].chi_lower) if (h, nc) in by_cell else ("x" if nc >= (1 << h) else ".")
            for h in cols
        )

    width = 10
    out = ["ncheck    " + "".join(f"nhat={h:<{width - 5}}" for h in cols)]
    nc = 0
    while nc <= max_check:
        r = row(nc)
        end = nc
        while end + 1 <= max_check and row(end + 1) == r:
            end += 1
        label = str(nc) if end == nc else f"{nc}-{end}"
        out.append(f"{label:<10}" + "".join(f"{v:<{width}}" for v in r))
        nc = end + 1
    if annotate:
        published = published_grid()
        notes = []
        for (h, c), val in sorted(published.items()):
            e = by_cell.get((h, c))
            if e is not None and e.chi_lower != val:
                notes.append(
                    f"# discrepancy n={e.n} (nhat={h}, ncheck={c}): ledger {format_chi(e.chi_lower)} "
                    f"[{e.provenance}], published grid {format_chi(val)}"
                )
        out.extend(notes)
    return "\n".join(out) + "\n"


def _render_csv(entries: Iterable[BoundEntry]) -> str:
    lines = ["n,nhat,ncheck,chi_lower,chi_upper,gamma_upper,provenance,sharp"]
    for e in entries:
        lines.append(",".join([
            str(e.n), str(e.nhat), str(e.ncheck),
            format_chi(e.chi_lower, power_from=1),
            format_chi(e.chi_upper, power_from=1),
            str(e.gamma_upper), str(e.provenance), str(int(e.sharp)),
        ]))
    return "\n".join(lines) + "\n"


def render_table(entries: Sequence[BoundEntry], format: str = "csv") -> str:
    if format == "figure1":
        return _render_figure1(entries)
    if format == "grid":
        return _render_grid(entries)
    if format == "csv":
        return _render_csv(entries)
    raise ValueError(f"unknown table format {format!r}")
