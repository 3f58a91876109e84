"""Command-line front end.

Exit codes: 0 on success, 2 when input fails validation, 3 when a request
is beyond an enumeration guard.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import os
import sys
from fractions import Fraction

from . import bounds, generators, io, multiagent, oracle, randomized
from .asynchronous import RowOrderedAlgorithm, async_cost, async_worst_edge
from .core import (GuardExceeded, OrderedAlgorithm, TIE_BREAKS, Tournament, ValidationError,
                   greedy_refine, oblivious_cost, simulate_sync, sync_cost, worst_edge)
from .generators import RowLayout

EXIT_OK, EXIT_INVALID, EXIT_GUARD = 0, 2, 3

GENERATORS = ("allinturn", "halfinturn", "sathalfinturn", "sr", "asr", "rhc")
MODEL_ALIASES = {"sync": "sync-det", "async": "async-det"}


def seed_arg(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}")
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def n_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        io.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _read(path: str, want: str | None = None):
    try:
        with open(path) as f:
            objs = io.load_all(f.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if want is None:
        return objs[0]
    kinds = {"tournament": Tournament, "ordered": OrderedAlgorithm,
             "rows": (RowLayout, RowOrderedAlgorithm)}
    for o in objs:
        if isinstance(o, kinds[want]):
            return o
    raise ValidationError(f"{path} holds no {want} document")


def _rows_of(obj) -> RowOrderedAlgorithm:
    return obj.to_row_ordered() if isinstance(obj, RowLayout) else obj


def cmd_gen(args) -> int:
    name, n = args.name, args.n
    if name == "rhc" and args.seed is None:
        raise ValidationError("rhc needs --seed")
    if name == "allinturn":
        docs = [generators.all_in_turn(n)]
    elif name == "halfinturn":
        docs = [generators.half_in_turn(n)]
    elif name == "sathalfinturn":
        docs = [generators.saturated_half_in_turn(n)]
    elif name == "sr":
        docs = list(generators.sr(n))
    elif name == "asr":
        docs = [generators.asr_layout(n)]
    else:
        docs = [generators.random_half_in_concert(n, args.seed)]
    _emit(args, "".join(io.dumps(d) + "\n" for d in docs))
    return EXIT_OK


def cmd_cost(args) -> int:
    obj = _read(args.file, args.kind)
    fields = {"model": args.model}
    if args.model == "sync":
        if isinstance(obj, Tournament):
            obj = greedy_refine(obj)
        elif not isinstance(obj, OrderedAlgorithm):
            raise ValidationError("sync cost needs an ordered or tournament document")
        fields["cost"] = sync_cost(obj)
        if args.per_edge:
            e, _ = worst_edge(obj)
            fields["worst_edge"] = f"{e.src}->{e.dst}"
    elif args.model == "async":
        if not isinstance(obj, (RowLayout, RowOrderedAlgorithm)):
            raise ValidationError("async cost needs a rows document")
        rows = _rows_of(obj)
        fields["cost"] = async_cost(rows, querier_offset=1)
        fields["cost_offset0"] = async_cost(rows, querier_offset=0)
        if args.per_edge:
            e, _ = async_worst_edge(rows)
            fields["worst_edge"] = f"{e.src}->{e.dst}"
    else:
        t = obj.tournament if isinstance(obj, OrderedAlgorithm) else (
            obj if isinstance(obj, Tournament) else obj.tournament())
        fields["cost"] = oblivious_cost(t)
    print(" ".join(f"{k}={v}" for k, v in fields.items()))
    return EXIT_OK


def cmd_refine(args) -> int:
    obj = _read(args.file, "tournament")
    _emit(args, io.dumps(greedy_refine(obj, args.tie_break)) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    obj = _read(args.file, args.kind)
    if isinstance(obj, Tournament):
        obj = greedy_refine(obj)
    if not isinstance(obj, OrderedAlgorithm):
        raise ValidationError("simulate needs an ordered or tournament document")
    i, j = args.at
    try:
        tr = simulate_sync(obj, i, j)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    out = {"sites": [i, j], "cost": tr.cost,
           "queries": [{"time": q.time, "from": q.edge.src, "to": q.edge.dst,
                        "answer": bool(q.answer)} for q in tr.queries]}
    _emit(args, json.dumps(out) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    obj = _read(args.file, args.kind)
    _emit(args, io.render(obj, args.format))
    return EXIT_OK


def _fmt(v) -> str:
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


def cmd_bounds(args) -> int:
    model = MODEL_ALIASES.get(args.model, args.model)
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "model", "lower", "upper", "witnesses"])
    for n in args.n:
        try:
            r = bounds.bound_report(n, model)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        w.writerow([n, args.model, _fmt(r.lower), _fmt(r.upper), ";".join(r.witnesses)])
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.model == "sync":
        res = oracle.optimal_sync_cost(args.n, jobs=args.jobs)
    else:
        res = oracle.optimal_async_cost(args.n)
    out = {"n": res.n, "model": res.model, "optimum": res.optimum,
           "enumerated": res.enumerated, "witness": io.to_document(res.witness)}
    _emit(args, json.dumps(out) + "\n")
    return EXIT_OK


def cmd_rs(args) -> int:
    cfg = multiagent.RsConfig(args.k, args.m)
    sweep = multiagent.rs_sweep(cfg, args.mode, args.count, args.seed)
    tr = multiagent.rs_simulate(cfg, sweep.placement)
    print(f"k={cfg.k} m={cfg.m} n={cfg.n} worst={sweep.worst} bound={cfg.bound} "
          f"placement={','.join(map(str, sweep.placement))} runs={sweep.runs}")
    if args.transcript:
        doc = {"k": cfg.k, "m": cfg.m, "n": cfg.n, "placement": list(tr.placement),
               "total_queries": tr.total_queries,
               "events": [e._asdict() for e in tr.events]}
        io.write_atomic(args.transcript, json.dumps(doc) + "\n")
    return EXIT_OK


def cmd_random(args) -> int:
    n = args.n
    if args.at:
        place = tuple(args.at)
    else:
        place = (0, n - 1)
    if args.trials:
        est = randomized.monte_carlo_expected_cost(n, place, args.trials, args.seed)
        print(f"n={n} placement={place[0]},{place[1]} mean={est.mean:.6f} "
              f"stderr={est.stderr:.6f} trials={est.trials}")
    elif args.at:
        v = randomized.expected_cost_exact(n, place)
        print(f"n={n} placement={place[0]},{place[1]} expected={_fmt(v)}")
    else:
        v, worst = randomized.worst_expected_cost(n)
        print(f"n={n} worst_expected={_fmt(v)} placement={worst[0]},{worst[1]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mutual-search", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a named protocol")
    g.add_argument("name", choices=GENERATORS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=seed_arg)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    def file_args(sp):
        sp.add_argument("file")
        sp.add_argument("--kind", choices=sorted(io.PAYLOAD),
                        help="pick this document when the file holds several")

    c = sub.add_parser("cost", help="evaluate a protocol file")
    file_args(c)
    c.add_argument("--model", choices=("sync", "async", "oblivious"), default="sync")
    c.add_argument("--per-edge", action="store_true", help="also print the costliest edge")
    c.set_defaults(func=cmd_cost)

    r = sub.add_parser("refine", help="greedy-order a tournament file")
    r.add_argument("file")
    r.add_argument("--tie-break", choices=TIE_BREAKS, default="lex")
    r.add_argument("--out")
    r.set_defaults(func=cmd_refine)

    s = sub.add_parser("simulate", help="two-agent run of an ordered protocol")
    file_args(s)
    s.add_argument("--at", type=int, nargs=2, required=True, metavar=("I", "J"))
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("render", help="text matrix or PBM bitmap")
    file_args(v)
    v.add_argument("--format", choices=sorted(io.RENDERERS), default="matrix")
    v.add_argument("--out")
    v.set_defaults(func=cmd_render)

    b = sub.add_parser("bounds", help="CSV table of lower and upper bounds")
    b.add_argument("--n", type=n_list, required=True, help="comma-separated site counts")
    b.add_argument("--model", default="sync",
                   choices=("sync", "async", "sync-det", "async-det", "oblivious", "randomized"))
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="exhaustive optimum for small n")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--model", choices=("sync", "async"), default="sync")
    o.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    m = sub.add_parser("rs", help="worst case of the ring-segments protocol")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--m", type=int, required=True)
    m.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    m.add_argument("--count", type=int)
    m.add_argument("--seed", type=seed_arg)
    m.add_argument("--transcript", help="write the worst run's events here")
    m.set_defaults(func=cmd_rs)

    x = sub.add_parser("random", help="expected cost of the randomized concert")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--at", type=int, nargs=2, metavar=("I", "J"))
    x.add_argument("--trials", type=int, help="Monte Carlo instead of exact enumeration")
    x.add_argument("--seed", type=seed_arg)
    x.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:  # ValidationError included
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
