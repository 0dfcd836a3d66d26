"""circiso command line.

Exit codes: 0 isomorphic / success, 1 non-isomorphic, 2 usage or input
error, 3 budget or limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import bench, oracle
from .cyclic import context, factor
from .encode import encode
from .errors import CircIsoError, InputError, LimitExceeded
from .objects import RelStruct, apply, detect_kind, parse, random_cayley, serialize
from .solver import SolveOptions, aut, iso, palfy_iso
from .wreath import generators, order, sample_uniform

EXIT_OK, EXIT_NONISO, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_pair(a: str, b: str):
    ta, tb = _read(a), _read(b)
    ka, kb = detect_kind(ta), detect_kind(tb)
    if ka != kb:
        raise InputError(f"mixed object kinds: {a} is {ka}, {b} is {kb}")
    return parse(ta), parse(tb)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    if args.require_seed:
        raise InputError("--seed is required (--require-seed is set)")
    s = int(np.random.SeedSequence().entropy % (2**32))
    print(f"# seed {s}", file=sys.stderr)
    return s


def _options(args) -> SolveOptions:
    return SolveOptions(time_limit=args.time_limit, branch_limit=args.branch_limit,
                        parallel=args.parallel)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------


def cmd_factor(args) -> int:
    ctx = context(args.n)
    print("primes", *ctx.primes)
    print("tower", *ctx.tower)
    if args.n > 1:
        print(f"{args.n} = " + " * ".join(map(str, factor(args.n))))
    return EXIT_OK


def cmd_group_info(args) -> int:
    ctx = context(args.n)
    print("n", ctx.n)
    print("primes", *ctx.primes)
    print("tower", *ctx.tower)
    print("order", order(ctx))
    gens = generators(ctx)
    print("generators", len(gens))
    for g in gens:
        print(" ".join(map(str, g.to_perm().images)))
    return EXIT_OK


def cmd_group_sample(args) -> int:
    ctx = context(args.n)
    g = sample_uniform(ctx, _seed(args))
    sys.stdout.write(g.to_perm().to_text())
    if args.tree:
        for line in g.tree_lines():
            print(line)
    return EXIT_OK


def cmd_iso(args) -> int:
    X, Y = _load_pair(args.X, args.Y)
    res = iso(X, Y, allow_non_cayley=args.allow_non_cayley, options=_options(args))
    print(res.verdict)
    if not res.isomorphic:
        if res.reason:
            print(f"# {res.reason}")
        if args.coset_out:
            _emit("empty\n", args.coset_out)
        return EXIT_NONISO
    # re-verify before printing a certificate
    if apply(X, res.representative) != Y:
        raise AssertionError("representative failed verification")
    sys.stdout.write(res.representative.to_text())
    print(f"# coset order {res.coset.order}")
    if args.coset_out:
        _emit(res.coset.to_text(), args.coset_out)
    return EXIT_OK


def cmd_aut(args) -> int:
    X = parse(_read(args.X))
    c = aut(X, allow_non_cayley=args.allow_non_cayley, options=_options(args))
    print("order", c.order)
    print("generators", len(c.stabilizer_generators))
    for g in c.stabilizer_generators:
        print(" ".join(map(str, g.to_perm().images)))
    if args.coset_out:
        _emit(c.to_text(), args.coset_out)
    return EXIT_OK


def cmd_encode(args) -> int:
    X = parse(_read(args.X))
    if not isinstance(X, RelStruct):
        raise InputError("encode expects a relstruct file")
    _emit(serialize(encode(X).hypergraph), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = _seed(args)
    if args.kind == "relstruct":
        X = random_cayley(args.n, "relstruct", arities=args.arity, density=args.density,
                          orbits=args.orbits, seed=seed)
    else:
        X = random_cayley(args.n, "hypergraph", edge_sizes=args.edge_size, density=args.density,
                          orbits=args.orbits, seed=seed)
    if args.image:
        X = apply(X, sample_uniform(context(args.n), seed + 1).to_perm())
    _emit(serialize(X), args.out)
    return EXIT_OK


def cmd_oracle_iso(args) -> int:
    X, Y = _load_pair(args.X, args.Y)
    budget = oracle.OracleBudget(max_sym_degree=args.max_degree)
    count, first = oracle.first_iso(X, Y, budget)
    print("count", count)
    if first is None:
        print("non-isomorphic")
        return EXIT_NONISO
    print("isomorphic")
    sys.stdout.write(first.to_text())
    return EXIT_OK


def cmd_palfy(args) -> int:
    X, Y = _load_pair(args.X, args.Y)
    f = palfy_iso(X, Y)
    if f is None:
        print("non-isomorphic")
        return EXIT_NONISO
    print("isomorphic")
    sys.stdout.write(f.to_text())
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = _seed(args)
    backends = ("numba", "numpy") if args.backend == "both" else (args.backend,)
    rows = bench.run(bench.sizes_up_to(args.n_max), backends=backends, trials=args.trials, seed=seed)
    _emit(bench.to_csv(rows), args.out)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def _solve_flags(p) -> None:
    p.add_argument("--allow-non-cayley", action="store_true",
                   help="run on non-circulant input (finds only Wr(C)-isomorphisms)")
    p.add_argument("--coset-out", metavar="PATH", help="write the coset file here")
    p.add_argument("--parallel", action="store_true", help="split the top branches over threads")
    p.add_argument("--time-limit", type=float, metavar="SEC")
    p.add_argument("--branch-limit", type=int, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="circiso", description="Isomorphism of circulant objects inside Wr(C).")
    ap.add_argument("--require-seed", action="store_true",
                    help="refuse to draw a random seed when --seed is missing")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", help="prime tower of n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_factor)

    g = sub.add_parser("group", help="the solving group Wr(C)")
    gsub = g.add_subparsers(dest="group_command", required=True, parser_class=_Parser)
    p = gsub.add_parser("info")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_group_info)
    p = gsub.add_parser("sample")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tree", action="store_true", help="also print the node labels")
    p.set_defaults(func=cmd_group_sample)

    p = sub.add_parser("iso", help="decide X ~ Y and print the coset")
    p.add_argument("X")
    p.add_argument("Y")
    _solve_flags(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("aut", help="automorphism group of X inside Wr(C)")
    p.add_argument("X")
    _solve_flags(p)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("encode", help="relstruct -> hypergraph on m copies")
    p.add_argument("X")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("gen", help="random circulant object")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("relstruct", "hypergraph"), default="relstruct")
    p.add_argument("--seed", type=int)
    p.add_argument("--arity", type=int, nargs="+", default=[2])
    p.add_argument("--edge-size", type=int, nargs="+", default=[2])
    p.add_argument("--density", type=float, default=0.25)
    p.add_argument("--orbits", type=int)
    p.add_argument("--image", action="store_true",
                   help="output the image under a random element of Wr(C) instead")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    o = sub.add_parser("oracle", help="brute-force references")
    osub = o.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    p = osub.add_parser("iso")
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--max-degree", type=int, default=8)
    p.set_defaults(func=cmd_oracle_iso)

    p = sub.add_parser("palfy", help="affine-only search (gcd(n, phi(n)) = 1)")
    p.add_argument("X")
    p.add_argument("Y")
    p.set_defaults(func=cmd_palfy)

    p = sub.add_parser("bench", help="CSV timings of both kernel backends")
    p.add_argument("--n-max", type=int, default=128)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--backend", choices=("both", "numba", "numpy"), default="both")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bench)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return args.func(args)
    except LimitExceeded as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        progress = getattr(exc, "progress", None)
        if progress:
            print(f"progress: {progress}", file=sys.stderr)
        return EXIT_LIMIT
    except CircIsoError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
