"""Text file formats: ``.dom`` vertex sets and ``key=value`` metadata sidecars.

A ``.dom`` file is a header line ``dim=<n> count=<k>`` followed by ``k``
lines of ``n`` characters '0'/'1', leftmost letter first, in increasing
vertex order.  Reads are gzip-transparent.
"""

from __future__ import annotations

import gzip
from pathlib import Path

import numpy as np

from .coverage import VertexSet

__all__ = ["format_dom", "parse_dom", "read_dom", "write_dom", "write_metadata", "read_metadata"]


def format_dom(vset: VertexSet) -> str:
    body = "\n".join(vset.strings())
    head = f"dim={vset.dim} count={len(vset)}\n"
    return head + (body + "\n" if body else "")


def parse_dom(text: str) -> VertexSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty .dom file")
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    try:
        dim, count = int(header["dim"]), int(header["count"])
    except (KeyError, ValueError):
        raise ValueError(f"bad .dom header: {lines[0]!r}") from None
    rows = lines[1:]
    if len(rows) != count:
        raise ValueError(f"header says {count} words, file has {len(rows)}")
    for r in rows:
        if len(r) != dim or set(r) - {"0", "1"}:
            raise ValueError(f"bad word {r!r} for dim={dim}")
    values = np.array([int(r, 2) for r in rows], dtype=np.int64) if dim else np.zeros(len(rows), np.int64)
    vset = VertexSet(dim, values)
    if len(vset) != count:
        raise ValueError("duplicate words in .dom file")
    return vset


def read_dom(path: str | Path) -> VertexSet:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return parse_dom(raw.decode("ascii"))


def write_dom(path: str | Path, vset: VertexSet) -> None:
    path = Path(path)
    data = format_dom(vset).encode("ascii")
    if path.suffix == ".gz":
        data = gzip.compress(data, mtime=0)
    path.write_bytes(data)


def write_metadata(path: str | Path, meta: dict[str, str]) -> None:
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in meta.items()))


def read_metadata(path: str | Path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            k, _, v = line.partition("=")
            out[k.strip()] = v.strip()
    return out
