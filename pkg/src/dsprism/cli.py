"""Command-line entry points: solve, baseline, bench, verify."""

import argparse
import json
import sys

from .baselines import greedy, ssp
from .experiments import (FAMILIES, bench_to_csv, aggregate_bench, load_instance,
                          run_bench, verify_corpus)
from .setfn import set_of
from .solver import SolverConfig, solve


def _cmd_solve(args):
    inst = load_instance(args.instance)
    cfg = SolverConfig(eps=args.eps, max_iters=args.max_iters,
                       trace_level=2 if args.trace else 1)
    report = solve(inst.f, inst.g, cfg)
    payload = report.to_dict()
    trace = payload.pop("trace")
    if args.trace:
        with open(args.trace, "w") as fh:
            for row in trace:
                fh.write(json.dumps(row) + "\n")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2)
    print("optimal set %s  value %.10g  (%s, %d iterations, %d cuts)" %
          (payload["optimal_set"], payload["optimal_value"],
           payload["termination_reason"], payload["iterations"],
           payload["cuts_added"]))
    return 0 if payload["termination_reason"] == "optimal" else 2


def _cmd_baseline(args):
    inst = load_instance(args.instance)
    if args.method == "ssp":
        out = ssp(inst.f, inst.g, init=args.init, seed=args.seed)
        payload = {"method": "ssp", "set": set_of(out.mask), "value": out.value,
                   "iterations": out.iterations, "seed": args.seed, "init": args.init}
    else:
        mask, value = greedy(inst.f, inst.g)
        payload = {"method": "greedy", "set": set_of(mask), "value": value}
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2)
    print("%s: set %s  value %.10g" % (args.method, payload["set"], payload["value"]))
    return 0


def _cmd_bench(args):
    lambdas = [float(s) for s in args.lambdas.split(",")]
    rows, aggregates = run_bench(p=args.p, n_samples=args.n, k=args.k,
                                 lambdas=lambdas, reps=args.reps, seed=args.seed)
    with open(args.out, "w") as fh:
        fh.write(bench_to_csv(rows))
    agg_path = args.out + ".agg.json"
    with open(agg_path, "w") as fh:
        json.dump(aggregates, fh, indent=2)
    print("wrote %d rows to %s (aggregates in %s)" % (len(rows), args.out, agg_path))
    return 0


def _cmd_verify(args):
    families = list(FAMILIES) if args.families == "all" else args.families.split(",")
    n_values = [int(s) for s in args.n.split(",")]
    mismatches = verify_corpus(n_values, families, args.reps, args.seed)
    if mismatches:
        for m in mismatches:
            print("MISMATCH %s" % json.dumps(m))
        return 1
    print("verify: all instances exact (%d solves)" %
          (len(n_values) * len(families) * args.reps))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dsprism")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="exact solve of an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--max-iters", type=int, default=200_000)
    p.add_argument("--trace", default=None, help="JSONL trace output path")
    p.add_argument("--report", default=None, help="JSON report output path")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("baseline", help="run an approximate baseline")
    p.add_argument("--method", choices=["ssp", "greedy"], required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", type=int, default=0, help="initial subset mask for ssp")
    p.add_argument("--report", default=None)
    p.set_defaults(fn=_cmd_baseline)

    p = sub.add_parser("bench", help="feature-selection benchmark suite")
    p.add_argument("--suite", choices=["fs"], default="fs")
    p.add_argument("--p", type=int, default=10)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--lambdas", default="0.25,0.5,1.0,2.0")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default="bench.csv")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("verify", help="corpus exactness gate vs brute force")
    p.add_argument("--n", default="8", help="comma-separated ground-set sizes")
    p.add_argument("--families", default="all")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
