"""Command-line front end.

Exit codes: 0 success / dominated, 1 verified not dominated, 2 usage error,
3 resource refusal.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, codes, coverage, io, wedge
from .errors import CubedomError, OutOfRange, ResourceRefusal

EXIT_OK, EXIT_NOT_DOMINATED, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


def _fmt_set(S) -> str:
    return "{" + ",".join(map(str, S)) + "}"


def cmd_theta(args) -> int:
    t = wedge.theta2(args.q)
    print(f"theta={t.theta} xi={t.xi} psi={t.psi} xi'={t.xi_prime}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    ms = [args.m] if args.m is not None else list(wedge.canonical_range(args.nhat))
    for m in ms:
        d = wedge.canonical_decomposition(args.nhat, m)
        print(f"m={m} S={_fmt_set(d.S)} sigma={d.sigma} theta={d.theta} n={d.target_n}")
    return EXIT_OK


def cmd_gamma(args) -> int:
    value, witness = coverage.brute_force_gamma(args.n)
    print(f"gamma={value}")
    if args.out:
        io.write_dom(args.out, witness)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "hamming":
        if args.k is None or not args.out:
            raise _Usage("construct hamming needs K and --out")
        gc = codes.hamming_graph_code(args.k)
        io.write_dom(args.out, gc.code)
        Path(str(args.out) + ".h").write_text("\n".join(gc.h_rows()) + "\n")
        print(f"dim={gc.length} predicted={1 << gc.free_len} actual={len(gc.code)}")
    elif args.kind == "double":
        if not args.inp or not args.out:
            raise _Usage("construct double needs --in and --out")
        delta = io.read_dom(args.inp)
        out = codes.double_dominating(delta)
        io.write_dom(args.out, out)
        print(f"dim={out.dim} predicted={len(delta) << delta.dim} actual={len(out)}")
    else:
        if args.nhat is None or args.m is None or not args.out:
            raise _Usage("construct wedge needs --nhat, --m and --out")
        res = wedge.construct_canonical(args.nhat, args.m)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        io.write_dom(outdir / "D.dom", res.D)
        io.write_dom(outdir / "V.dom", res.V)
        io.write_dom(outdir / "result.dom", res.result)
        io.write_metadata(outdir / "meta.txt", res.metadata())
        print(
            f"dim={res.target_n} S={_fmt_set(res.decomp.S)} E={res.E_size} "
            f"D={len(res.D)}/{res.predicted_D} V={len(res.V)}/{res.predicted_V} "
            f"result={len(res.result)}/{res.predicted_D - res.predicted_V}"
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    vset = io.read_dom(args.inp)
    report = coverage.check_domination(
        args.dim, vset,
        histogram=args.histogram,
        max_undominated=args.max_undominated,
        max_dim=args.max_dim,
        threads=args.threads,
    )
    print(report.summary())
    return EXIT_OK if report.dominated else EXIT_NOT_DOMINATED


def cmd_bounds(args) -> int:
    if args.max_n > bounds.MAX_LEDGER_N:
        raise ResourceRefusal(f"ledger is limited to n <= {bounds.MAX_LEDGER_N}")
    seeds = bounds.load_seeds(args.seeds) if args.seeds else None
    entries = bounds.best_bounds(
        args.max_n, seeds, sweep=args.sweep, tabulated_only=args.published_seeds
    )
    sys.stdout.write(bounds.render_table(entries, args.format))
    return EXIT_OK


def cmd_lambda(args) -> int:
    line = f"lower={bounds.lambda_lower(args.s)}"
    if args.exact:
        value, witness = coverage.brute_force_lambda(args.s)
        line += f" exact={value}"
        if args.witness:
            line += "\n" + "\n".join(witness.strings())
    print(line)
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubedom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("theta", help="print Θ²(q)")
    s.add_argument("q", type=int)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("decompose", help="canonical decompositions of 2^nhat - 1")
    s.add_argument("nhat", type=int)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("gamma", help="exact domination number for n <= 6")
    s.add_argument("n", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("construct", help="build a dominating set")
    s.add_argument("kind", choices=["hamming", "double", "wedge"])
    s.add_argument("k", type=int, nargs="?")
    s.add_argument("--in", dest="inp")
    s.add_argument("--out")
    s.add_argument("--nhat", type=int)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="exhaustive domination check")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--histogram", action="store_true")
    s.add_argument("--max-undominated", type=int, default=coverage.UNDOMINATED_LIMIT)
    s.add_argument("--max-dim", type=int, default=None)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bounds", help="bounds ledger tables")
    s.add_argument("--max-n", type=int, default=33)
    s.add_argument("--format", choices=["figure1", "grid", "csv"], default="csv")
    s.add_argument("--seeds")
    s.add_argument("--sweep", action="store_true", help="search all decompositions, not only canonical")
    s.add_argument("--published-seeds", action="store_true", help="drop seeds marked fig=0")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("lambda", help="bounds on the largest 3-separated set in Q_s")
    s.add_argument("s", type=int)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_lambda)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except OutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_Usage, CubedomError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
