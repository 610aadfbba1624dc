"""Command line front end and benchmark harness.

    sparseconv gen --mode shift -N 1048576 -n 256 -m 16 --planted 2 --seed 7 -t t.sv -p p.sv
    sparseconv match --mode shift --algo lasvegas -t t.sv -p p.sv --seed 1 -o out.txt --check
    sparseconv preprocess -t t.sv -o t.lrat
    sparseconv findprime -t big.sv --pool-count 4096 --pool-bits 20
    sparseconv bench --family shift --grid n=1024,4096 --seeds 5 --csv out.csv

Exit status is 0 on success, 2 on bad input and 3 when an internal
assertion (including a failed --check) fires.
"""

import argparse
import csv
import os
import sys
import threading
import time
from dataclasses import astuple, dataclass, fields

from .core import Family
from .errors import SparseConvError
from .instances import gen_instance, read_sparse, write_positions, write_sparse
from .oracles import oracle_match_shift, oracle_match_xor
from .primesearch import exp_prime_search
from .shift_match import (load_table, preprocess_select_assignments, save_table,
                          sparse_match_shift_deterministic, sparse_match_shift_lasvegas)
from .xor_match import mask_match_xor, sparse_match_xor

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3

CSV_VERSION = 1
CSV_COMMENT = f"# sparseconv bench schema v{CSV_VERSION}"

RANDOMIZED = {"lasvegas", "mask"}


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    family: str
    N: int
    n: int
    m: int
    planted: int
    seed: int
    rounds_used: int
    candidates_verified: int
    wall_time_nanos: int
    output_size: int

    def __post_init__(self):
        if self.wall_time_nanos <= 0:
            raise ValueError("wall_time_nanos must be positive")


BENCH_FIELDS = [f.name for f in fields(BenchRecord)]


class CsvSink:
    """Appends rows to a CSV file; writes are serialised by a lock."""

    def __init__(self, path):
        self.path = path
        self._lock = threading.Lock()

    def append(self, record):
        with self._lock:
            fresh = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
            with open(self.path, "a", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                if fresh:
                    fh.write(CSV_COMMENT + "\n")
                    w.writerow(BENCH_FIELDS)
                w.writerow(astuple(record))


def read_bench_csv(path):
    """Rows of a bench CSV as BenchRecords; rejects unknown schema versions."""
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != CSV_COMMENT:
            raise ValueError(f"unexpected bench CSV header {first!r}")
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        vals = {k: (row[k] if k in ("algorithm", "family") else int(row[k])) for k in BENCH_FIELDS}
        out.append(BenchRecord(**vals))
    return out


# -- matching dispatch ----------------------------------------------------

def _shift_det(text, pattern, args):
    if getattr(args, "table", None):
        table = load_table(args.table)
    else:
        table = preprocess_select_assignments(text)
    return sparse_match_shift_deterministic(text, pattern, table)


def _xor_mask(text, pattern, args):
    res = mask_match_xor(text, pattern, seed=args.seed)
    if res is None:
        # every mask collided; use the polynomial reducer instead
        res = sparse_match_xor(text, pattern, args.oversize, args.rounds, args.seed)
    return res


MATCHERS = {
    ("shift", "oracle"): lambda t, p, a: oracle_match_shift(t, p),
    ("shift", "lasvegas"): lambda t, p, a: sparse_match_shift_lasvegas(
        t, p, seed=a.seed, max_rounds=a.rounds),
    ("shift", "det"): _shift_det,
    ("xor", "oracle"): lambda t, p, a: oracle_match_xor(t, p),
    ("xor", "lasvegas"): lambda t, p, a: sparse_match_xor(
        t, p, oversize_factor=a.oversize, max_rounds=a.rounds, seed=a.seed),
    ("xor", "mask"): _xor_mask,
}

ORACLES = {"shift": oracle_match_shift, "xor": oracle_match_xor}


def run_match(mode, algo, text, pattern, args):
    try:
        fn = MATCHERS[mode, algo]
    except KeyError:
        raise ValueError(f"--algo {algo} is not available for --mode {mode}") from None
    if algo in RANDOMIZED and args.seed is None:
        raise ValueError(f"--algo {algo} is randomized and needs --seed")
    return fn(text, pattern, args)


# -- subcommands ----------------------------------------------------------

def cmd_gen(args):
    if args.seed is None:
        raise ValueError("gen needs --seed")
    text, pattern, planted = gen_instance(Family(args.mode), args.N, args.n, args.m,
                                          planted=args.planted, seed=args.seed)
    write_sparse(text, args.t)
    write_sparse(pattern, args.p)
    if args.o:
        write_positions(planted, args.o)
    return EXIT_OK


def cmd_match(args):
    text = read_sparse(args.t)
    pattern = read_sparse(args.p)
    res = run_match(args.mode, args.algo, text, pattern, args)
    if args.check:
        expect = ORACLES[args.mode](text, pattern).as_set()
        if res.as_set() != expect:
            raise AssertionError(
                f"--check failed: {args.algo} found {len(res)} matches, oracle {len(expect)}")
    write_positions(res.positions, args.o if args.o else sys.stdout)
    print(f"matches={len(res)} rounds={res.rounds_used} checked={res.counts_checked} "
          f"fallback={int(res.fallback)}", file=sys.stderr)
    return EXIT_OK


def cmd_preprocess(args):
    text = read_sparse(args.t)
    table = preprocess_select_assignments(text)
    save_table(table, args.o)
    print(f"q={table.q} c={table.c} assignments={len(table.selected)}", file=sys.stderr)
    return EXIT_OK


def cmd_findprime(args):
    text = read_sparse(args.t)
    print(exp_prime_search(text.support, args.pool_count, args.pool_bits))
    return EXIT_OK


def parse_grid(items):
    """['n=1024,4096', 'm=16'] -> {'n': [1024, 4096], 'm': [16]}"""
    grid = {}
    for item in items or []:
        key, sep, vals = item.partition("=")
        if not sep or key not in ("N", "n", "m", "planted"):
            raise ValueError(f"bad --grid entry {item!r}; expected N|n|m|planted=v1,v2,...")
        try:
            grid[key] = [int(v) for v in vals.split(",")]
        except ValueError:
            raise ValueError(f"non-decimal value in --grid {item!r}") from None
    return grid


def bench_cells(args):
    grid = parse_grid(args.grid)
    for N in grid.get("N", [args.N]):
        for n in grid.get("n", [args.n]):
            for m in grid.get("m", [args.m if args.m is not None else n]):
                for planted in grid.get("planted", [args.planted]):
                    for seed in range(args.seed or 0, (args.seed or 0) + args.seeds):
                        yield N, n, m, planted, seed


def bench_one(family, algo, N, n, m, planted, seed, args):
    text, pattern, _ = gen_instance(Family(family), N, n, m, planted=planted, seed=seed)
    ns = argparse.Namespace(seed=seed, rounds=args.rounds, oversize=args.oversize, table=None)
    extra = None
    if (family, algo) == ("shift", "det"):
        # preprocessing is a one-off cost and is not timed
        extra = preprocess_select_assignments(text)
    start = time.perf_counter_ns()
    if extra is not None:
        res = sparse_match_shift_deterministic(text, pattern, extra)
    else:
        res = run_match(family, algo, text, pattern, ns)
    elapsed = max(1, time.perf_counter_ns() - start)
    return BenchRecord(algo, family, N, n, m, planted, seed, res.rounds_used,
                       res.counts_checked, elapsed, len(res))


def cmd_bench(args):
    sink = CsvSink(args.csv)
    algos = args.algo.split(",") if args.algo else ["lasvegas"]
    records = []
    for cell in bench_cells(args):
        for algo in algos:
            rec = bench_one(args.family, algo, *cell, args)
            sink.append(rec)
            records.append(rec)
    print(f"{len(records)} rows appended to {args.csv}", file=sys.stderr)
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def _u64(value):
    if not value.isdigit():
        raise argparse.ArgumentTypeError(f"not a decimal integer: {value!r}")
    v = int(value)
    if v >= 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive(value):
    if not value.isdigit() or int(value) < 1:
        raise argparse.ArgumentTypeError(f"expected a positive decimal integer, got {value!r}")
    return int(value)


def _count(value):
    if not value.isdigit():
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {value!r}")
    return int(value)


def build_parser():
    parser = argparse.ArgumentParser(prog="sparseconv",
                                     description="Sparse XOR and shift pattern matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=_u64, default=None)
    shared.add_argument("--mode", choices=["xor", "shift"], default="shift")
    shared.add_argument("--algo", default=None)
    shared.add_argument("--rounds", type=_positive, default=4)
    shared.add_argument("--oversize", type=_positive, default=8)
    shared.add_argument("--check", action="store_true")

    g = sub.add_parser("gen", parents=[shared], help="write a seeded random instance")
    g.add_argument("-N", type=_positive, required=True)
    g.add_argument("-n", type=_positive, required=True)
    g.add_argument("-m", type=_positive, required=True)
    g.add_argument("--planted", type=_count, default=0)
    g.add_argument("-t", required=True, help="text output path")
    g.add_argument("-p", required=True, help="pattern output path")
    g.add_argument("-o", default=None, help="planted positions output path")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("match", parents=[shared], help="find all matches")
    m.add_argument("-t", required=True)
    m.add_argument("-p", required=True)
    m.add_argument("-o", default=None, help="match output path (default stdout)")
    m.add_argument("--table", default=None, help="assignment table for --algo det")
    m.set_defaults(func=cmd_match)

    pp = sub.add_parser("preprocess", parents=[shared], help="build an assignment table")
    pp.add_argument("-t", required=True)
    pp.add_argument("-o", required=True)
    pp.set_defaults(func=cmd_preprocess)

    fp = sub.add_parser("findprime", parents=[shared],
                        help="prime modulus keeping text indices distinct")
    fp.add_argument("-t", required=True)
    fp.add_argument("--pool-count", type=_positive, default=4096)
    fp.add_argument("--pool-bits", type=_positive, default=20)
    fp.set_defaults(func=cmd_findprime)

    b = sub.add_parser("bench", parents=[shared], help="seeded benchmark grid to CSV")
    b.add_argument("--family", choices=["xor", "shift"], default="shift")
    b.add_argument("--grid", action="append", default=[],
                   help="N|n|m|planted=v1,v2,... (repeatable)")
    b.add_argument("--seeds", type=_positive, default=1)
    b.add_argument("--csv", required=True)
    b.add_argument("-N", type=_positive, default=1 << 20)
    b.add_argument("-n", type=_positive, default=1024)
    b.add_argument("-m", type=_positive, default=None, help="pattern size (default: n)")
    b.add_argument("--planted", type=_count, default=1)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "match" and args.algo is None:
        args.algo = "lasvegas"
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"sparseconv: internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SparseConvError as exc:
        print(f"sparseconv: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"sparseconv: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
