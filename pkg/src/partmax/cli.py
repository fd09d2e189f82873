"""Command-line interface.

Subcommands: solve (wcnf/pwcnf -> solution), partition (wcnf -> pwcnf via an
automatic strategy), encode (problem parameters -> pwcnf), gen (random
corpus + manifest), bench (matrix run -> CSV/summary/cactus/scatter).

The seed defaults to the UPMAX_SEED environment variable, then 0.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench as bench_mod
from .encoders import (
    MscGenConfig,
    MscProblem,
    SeatingGenConfig,
    SeatingProblem,
    SchemeChoice,
    encode_msc,
    encode_seating,
    generate_corpus,
)
from .formats import ParseError, detect_and_parse, write_pwcnf, write_solution
from .maxsat import AlgorithmKind

ALGS = [a.value for a in AlgorithmKind]
AUTO_STRATEGIES = ["vig", "cvig", "res", "random"]


def _default_seed() -> int:
    try:
        return int(os.environ.get("UPMAX_SEED", "0"))
    except ValueError:
        return 0


def _add_seed(parser) -> None:
    parser.add_argument(
        "--seed", type=int, default=None, help="random seed (default: $UPMAX_SEED or 0)"
    )


def _seed_of(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _read(path: str):
    with open(path, "rb") as fh:
        return detect_and_parse(fh.read())


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    try:
        kind, parsed = _read(args.file)
        pinst = bench_mod.apply_strategy(kind, parsed, args.strategy, seed=_seed_of(args))
    except ParseError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    from .maxsat import solve_instance

    res = solve_instance(pinst, args.alg, budget=args.timeout)
    print(f"c partitions: {pinst.n_part}")
    print(f"c sat_calls: {res.stats.sat_calls}")
    print(f"c cores: {res.stats.cores}")
    print(f"c time_s: {res.stats.time_s:.3f}")
    sys.stdout.write(write_solution(res))
    return 0


def cmd_partition(args) -> int:
    try:
        kind, parsed = _read(args.file)
        pinst = bench_mod.apply_strategy(kind, parsed, args.strategy, seed=_seed_of(args))
    except ParseError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_out(write_pwcnf(pinst), args.output)
    return 0


def _parse_edges(spec: str):
    edges = set()
    if spec.strip():
        for part in spec.replace(";", ",").split(","):
            a, _, b = part.strip().partition("-")
            u, v = int(a), int(b)
            edges.add((min(u, v), max(u, v)))
    return frozenset(edges)


def _parse_persons(spec: str):
    persons = []
    for chunk in spec.split("|"):
        tags = frozenset(t for t in chunk.replace(",", " ").split() if t)
        persons.append(tags)
    return tuple(persons)


def cmd_encode(args) -> int:
    try:
        if args.problem == "msc":
            prob = MscProblem(
                n_vertices=args.vertices,
                edges=_parse_edges(args.edges),
                n_colors=args.colors,
            )
            pinst = encode_msc(prob, SchemeChoice(args.scheme))
        else:
            persons = _parse_persons(args.persons)
            universe = tuple(sorted(set().union(*persons))) if persons else ()
            prob = SeatingProblem(
                person_tags=persons,
                n_tables=args.tables,
                min_per_table=args.min_per_table,
                max_per_table=args.max_per_table,
                tags=universe,
            )
            pinst = encode_seating(prob, SchemeChoice(args.scheme))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_out(write_pwcnf(pinst), args.output)
    return 0


def cmd_gen(args) -> int:
    seed = _seed_of(args)
    try:
        scheme = SchemeChoice(args.scheme)
        if args.problem == "msc":
            cfg = MscGenConfig(
                min_vertices=args.min_vertices,
                max_vertices=args.max_vertices,
                min_density=args.min_density,
                max_density=args.max_density,
                min_colors=args.min_colors,
                max_colors=args.max_colors,
            )
        else:
            cfg = SeatingGenConfig(
                min_persons=args.min_persons,
                max_persons=args.max_persons,
                min_tables=args.min_tables,
                max_tables=args.max_tables,
                min_tag_universe=args.min_tags,
                max_tag_universe=args.max_tags,
            )
        paths = generate_corpus(args.problem, cfg, args.count, scheme, seed, args.out_dir)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(paths)} instances to {args.out_dir}")
    return 0


def cmd_bench(args) -> int:
    algs = [a.strip() for a in args.algs.split(",") if a.strip()]
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for a in algs:
        if a not in ALGS:
            print(f"error: unknown algorithm {a!r}", file=sys.stderr)
            return 2
    corpus = sorted(
        os.path.join(args.corpus, f)
        for f in os.listdir(args.corpus)
        if f.endswith((".wcnf", ".pwcnf"))
    )
    if not corpus:
        print(f"error: no .wcnf/.pwcnf files in {args.corpus}", file=sys.stderr)
        return 2
    records = bench_mod.run_benchmark(
        corpus,
        algs,
        strategies,
        timeout=args.timeout,
        jobs=args.jobs,
        seed=_seed_of(args),
        mem_limit_mb=args.mem_limit_mb,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "results.csv"), "w", newline="") as fh:
        bench_mod.write_csv(records, fh)
    summary = bench_mod.summary_table(records, algs, strategies)
    with open(os.path.join(args.out_dir, "summary.txt"), "w") as fh:
        fh.write(summary)
    with open(os.path.join(args.out_dir, "cactus.csv"), "w", newline="") as fh:
        bench_mod.write_rows_csv(
            bench_mod.cactus_rows(records), ["alg", "strategy", "rank", "time_s"], fh
        )
    for spec in args.scatter or []:
        try:
            a, b = spec.split("/")
            cfg_a = tuple(a.split(":"))
            cfg_b = tuple(b.split(":"))
            if len(cfg_a) != 2 or len(cfg_b) != 2:
                raise ValueError
        except ValueError:
            print(f"error: bad scatter spec {spec!r}; use alg:strategy/alg:strategy", file=sys.stderr)
            return 2
        name = f"scatter_{cfg_a[0]}-{cfg_a[1]}_vs_{cfg_b[0]}-{cfg_b[1]}.csv".replace(":", "-")
        with open(os.path.join(args.out_dir, name), "w", newline="") as fh:
            bench_mod.write_rows_csv(
                bench_mod.scatter_rows(records, cfg_a, cfg_b),
                ["instance", "time_a", "status_a", "time_b", "status_b"],
                fh,
            )
    sys.stdout.write(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partmax", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve a wcnf/pwcnf file")
    ps.add_argument("file")
    ps.add_argument("--alg", choices=ALGS, default="oll")
    ps.add_argument(
        "--strategy",
        default="none",
        help="none | user | vig | cvig | res | random:<k> (default none)",
    )
    ps.add_argument("--timeout", type=float, default=None, help="wall-clock budget in seconds")
    _add_seed(ps)
    ps.set_defaults(func=cmd_solve)

    pp = sub.add_parser("partition", help="emit a pwcnf with automatically derived partitions")
    pp.add_argument("file")
    pp.add_argument(
        "--strategy", required=True, help="vig | cvig | res | random:<k>"
    )
    pp.add_argument("-o", "--output", default=None)
    _add_seed(pp)
    pp.set_defaults(func=cmd_partition)

    pe = sub.add_parser("encode", help="encode a problem description as pwcnf")
    pe_sub = pe.add_subparsers(dest="problem", required=True)
    pem = pe_sub.add_parser("msc", help="minimum-sum graph coloring")
    pem.add_argument("--vertices", type=int, required=True)
    pem.add_argument("--edges", default="", help='e.g. "1-2,1-3,2-3,3-4"')
    pem.add_argument("--colors", type=int, required=True)
    pem.add_argument("--scheme", choices=["none", "vertex", "color"], default="none")
    pem.add_argument("-o", "--output", default=None)
    pem.set_defaults(func=cmd_encode)
    pes = pe_sub.add_parser("seating", help="table seating with tags")
    pes.add_argument("--persons", required=True, help='e.g. "A,B|C|B|C,A|A"')
    pes.add_argument("--tables", type=int, required=True)
    pes.add_argument("--min-per-table", type=int, required=True)
    pes.add_argument("--max-per-table", type=int, required=True)
    pes.add_argument("--scheme", choices=["none", "tags", "tables"], default="none")
    pes.add_argument("-o", "--output", default=None)
    pes.set_defaults(func=cmd_encode)

    pg = sub.add_parser("gen", help="generate a random pwcnf corpus with a manifest")
    pg_sub = pg.add_subparsers(dest="problem", required=True)
    pgm = pg_sub.add_parser("msc")
    pgm.add_argument("--count", type=int, default=10)
    pgm.add_argument("--out-dir", required=True)
    pgm.add_argument("--scheme", choices=["none", "vertex", "color"], default="vertex")
    pgm.add_argument("--min-vertices", type=int, default=MscGenConfig.min_vertices)
    pgm.add_argument("--max-vertices", type=int, default=MscGenConfig.max_vertices)
    pgm.add_argument("--min-density", type=float, default=MscGenConfig.min_density)
    pgm.add_argument("--max-density", type=float, default=MscGenConfig.max_density)
    pgm.add_argument("--min-colors", type=int, default=MscGenConfig.min_colors)
    pgm.add_argument("--max-colors", type=int, default=MscGenConfig.max_colors)
    _add_seed(pgm)
    pgm.set_defaults(func=cmd_gen)
    pgs = pg_sub.add_parser("seating")
    pgs.add_argument("--count", type=int, default=10)
    pgs.add_argument("--out-dir", required=True)
    pgs.add_argument("--scheme", choices=["none", "tags", "tables"], default="tables")
    pgs.add_argument("--min-persons", type=int, default=SeatingGenConfig.min_persons)
    pgs.add_argument("--max-persons", type=int, default=SeatingGenConfig.max_persons)
    pgs.add_argument("--min-tables", type=int, default=SeatingGenConfig.min_tables)
    pgs.add_argument("--max-tables", type=int, default=SeatingGenConfig.max_tables)
    pgs.add_argument("--min-tags", type=int, default=SeatingGenConfig.min_tag_universe)
    pgs.add_argument("--max-tags", type=int, default=SeatingGenConfig.max_tag_universe)
    _add_seed(pgs)
    pgs.set_defaults(func=cmd_gen)

    pb = sub.add_parser("bench", help="run an algorithm x strategy matrix over a corpus")
    pb.add_argument("--corpus", required=True)
    pb.add_argument("--algs", default=",".join(ALGS))
    pb.add_argument("--strategies", default="none,user,vig,cvig,res,random:16")
    pb.add_argument("--timeout", type=float, default=60.0)
    pb.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    pb.add_argument("--out-dir", required=True)
    pb.add_argument("--mem-limit-mb", type=int, default=None)
    pb.add_argument(
        "--scatter",
        action="append",
        help="emit per-instance time pairs, e.g. wbo:none/wbo:user (repeatable)",
    )
    _add_seed(pb)
    pb.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
