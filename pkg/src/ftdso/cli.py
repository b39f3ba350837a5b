"""Command-line interface: ``ftdso {build,query,verify,gen}``.

Exit codes: 0 ok, 1 usage, 2 I/O or format error, 3 budget refusal,
4 verification failures present.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import container
from .exact import exact_replacement
from .generate import MODELS, generate
from .graph import INF, FailureSet, GraphFormatError, read_graph, serialize_graph, write_graph
from .large import build_large
from .rpc import BudgetExceeded
from .small import build_small
from .verify import query, report_failed, verify_oracle

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    if x == INF:
        return "inf"
    if x == int(x):
        return str(int(x))
    return repr(x)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ftdso", description="Fault-tolerant approximate distance oracles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("human", "records"), default="human")
        sp.add_argument("--threads", type=int, default=1)

    b = sub.add_parser("build", help="build an oracle container from a graph file")
    b.add_argument("--graph", required=True)
    b.add_argument("--oracle", required=True, help="output container path")
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--f", type=int, default=1)
    b.add_argument("--alpha", type=float, help="build the arbitrary-hop-diameter oracle with this alpha")
    b.add_argument("--diameter-bound", type=int, help="trusted hop diameter bound (default: measure)")
    b.add_argument("--variant", choices=("rand", "det"), default="det")
    b.add_argument("--oversample-c", type=float, default=3.0)
    b.add_argument("--budget-bytes", type=int, default=None)
    common(b)

    q = sub.add_parser("query", help="answer (s, t, F) queries")
    q.add_argument("--oracle", required=True)
    q.add_argument("--graph", help="graph file; required with --verify")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--queries", help="file of lines 's t e_1 ... e_j'")
    src.add_argument("--random-queries", type=int, metavar="N")
    q.add_argument("--verify", action="store_true", help="also report exact distance and ratio")
    common(q)

    v = sub.add_parser("verify", help="run property sweeps against the exact oracle")
    v.add_argument("--graph", required=True)
    v.add_argument("--oracle", required=True)
    v.add_argument("--random-queries", type=int, default=500, metavar="N")
    common(v)

    g = sub.add_parser("gen", help="generate a random connected graph")
    g.add_argument("--model", choices=MODELS, default="gnm")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--weights", default="1:10", help="integer weight range MIN:MAX")
    g.add_argument("--out", "--graph", dest="out", help="output path (default stdout)")
    g.add_argument("--seed", type=int, default=0)
    return p


def _load_graph(path):
    try:
        return read_graph(path)
    except OSError as exc:
        raise OSError(f"cannot read graph {path}: {exc}") from exc


def cmd_build(args, out) -> int:
    g = _load_graph(args.graph)
    start = time.perf_counter()
    if args.alpha is not None:
        dso = build_large(g, args.k, args.f, args.alpha, args.seed,
                          budget_bytes=args.budget_bytes, workers=args.threads)
    else:
        dso = build_small(g, args.k, args.f, args.diameter_bound, args.variant, args.seed,
                          c=args.oversample_c, budget_bytes=args.budget_bytes, workers=args.threads)
    elapsed = time.perf_counter() - start
    size = container.save(dso, args.oracle)
    census = dso.census()
    census.update({"kind": "large" if args.alpha is not None else "small", "L": dso.L,
                   "q": dso.family.params.q, "container_bytes": size, "build_seconds": round(elapsed, 3)})
    if args.format == "records":
        print(json.dumps(census, sort_keys=True), file=out)
    else:
        for key, val in census.items():
            print(f"{key}: {val}", file=out)
    return EXIT_OK


def _parse_query_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(x) for x in line.split()]
            if len(nums) < 2:
                raise ValueError
        except ValueError:
            yield lineno, None, f"malformed query line {line!r}"
            continue
        yield lineno, (nums[0], nums[1], tuple(nums[2:])), None


def _random_queries(dso, count: int, seed: int):
    rng = random.Random(f"{seed}:queries")
    n, m = dso.family.n, dso.family.params.m
    for i in range(count):
        s, t = rng.randrange(n), rng.randrange(n)
        F = tuple(rng.sample(range(m), rng.randint(0, min(dso.f, m))))
        yield i + 1, (s, t, F), None


def cmd_query(args, out) -> int:
    g = _load_graph(args.graph) if args.graph else None
    if args.verify and g is None:
        raise UsageError("--verify needs --graph")
    dso = container.load(args.oracle, g)
    if args.queries:
        with open(args.queries, encoding="utf-8") as fh:
            items = list(_parse_query_lines(fh.read()))
    else:
        items = list(_random_queries(dso, args.random_queries, args.seed))

    def answer(item):
        lineno, q, err = item
        if err:
            return lineno, q, None, None, err
        s, t, F = q
        if len(set(F)) > dso.f:
            return lineno, q, None, None, f"{len(set(F))} failures exceed sensitivity f={dso.f}"
        try:
            a = query(dso, s, t, F)
            exact = exact_replacement(g, s, t, F).distance if args.verify else None
        except ValueError as exc:
            return lineno, q, None, None, str(exc)
        return lineno, q, a, exact, None

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(answer, items))
    else:
        results = [answer(it) for it in items]

    errors = violations = 0
    for lineno, q, a, exact, err in results:
        if err:
            errors += 1
            if args.format == "records":
                print(f"error {lineno} {err}", file=out)
            else:
                print(f"line {lineno}: error: {err}", file=out)
            continue
        s, t, F = q
        F = FailureSet(F)
        fields = [str(s), str(t), str(len(F)), fmt(a)]
        if exact is not None:
            ratio = 1.0 if a == exact else (INF if exact == 0 else a / exact)
            fields += [fmt(exact), "inf" if ratio == INF else f"{ratio:.6f}"]
            if a < exact or ratio > 2 * dso.k - 1 + 1e-9:
                violations += 1
        if args.format == "records":
            print(" ".join(fields), file=out)
        else:
            msg = f"d({s},{t} | F={list(F)}) ~ {fields[3]}"
            if exact is not None:
                msg += f"  exact={fields[4]} ratio={fields[5]}"
            print(msg, file=out)
    if errors:
        return EXIT_IO
    if violations:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args, out) -> int:
    g = _load_graph(args.graph)
    dso = container.load(args.oracle, g)
    results = verify_oracle(g, dso, args.random_queries, args.seed)
    for name, r in results.items():
        if name == "stretch" and "randomized" in r.note:
            passed = r.rate <= 0.01
        else:
            passed = r.violations == 0
        line = f"{'PASS' if passed else 'FAIL'} {name}: {r.violations}/{r.checked} violations ({r.note})"
        if args.format == "records":
            line = json.dumps({"check": name, "pass": passed, "checked": r.checked,
                               "violations": r.violations, "note": r.note})
        print(line, file=out)
        for ex in r.examples if not passed else ():
            print(f"  counterexample: {ex}", file=out)
    return EXIT_VERIFY if report_failed(results) else EXIT_OK


def cmd_gen(args, out) -> int:
    try:
        wmin, wmax = (int(x) for x in args.weights.split(":"))
    except ValueError:
        raise UsageError(f"--weights must look like MIN:MAX, got {args.weights!r}") from None
    g = generate(args.model, args.n, args.m, args.seed, wmin, wmax)
    if args.out:
        write_graph(g, args.out)
    else:
        out.write(serialize_graph(g))
    return EXIT_OK


COMMANDS = {"build": cmd_build, "query": cmd_query, "verify": cmd_verify, "gen": cmd_gen}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        for key, val in exc.report.items():
            print(f"  {key}: {val}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphFormatError, container.ContainerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
