"""Command-line interface.

Subcommands: ``run`` (one experiment from a JSON config), ``sweep``
(cartesian grids over n / k / beta values), ``stats`` (compare two result
CSVs), ``verify`` (property suites), ``gen-instance`` (random MST /
partition instance files).

Exit codes: 0 success, 1 usage error, 2 input/config error, 3 verification
failure.
"""

import argparse
import json
import sys
from dataclasses import replace

from . import harness, problems, stats, verify
from .accel import backend


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse defaults to 2, which is reserved for
    # input/config errors here)
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="htollga",
                     description="Heavy-tailed (1+(lambda,lambda)) GA benchmark "
                                 "harness")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one experiment from a JSON config")
    p_run.add_argument("--config", required=True, help="JSON config path")
    p_run.add_argument("--output", help="CSV output path (overrides config)")
    p_run.add_argument("--seed", type=int, help="base seed (overrides config)")
    p_run.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: logical cores); the "
                            "output is identical for any value")
    p_run.add_argument("--summary", help="also write the grouped summary "
                                         "(plot data) to this CSV")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a config whose n/k/beta fields "
                                           "hold lists (cartesian product)")
    p_sweep.add_argument("--config", required=True, help="JSON config path")
    p_sweep.add_argument("--output", help="CSV output path (overrides config)")
    p_sweep.add_argument("--seed", type=int, help="base seed (overrides config)")
    p_sweep.add_argument("--threads", type=int, default=None)
    p_sweep.add_argument("--summary", help="also write the grouped summary "
                                           "(plot data) to this CSV")
    p_sweep.set_defaults(func=cmd_sweep)

    p_stats = sub.add_parser("stats", help="hypothesis tests between two "
                                           "result CSVs")
    p_stats.add_argument("--a", required=True, help="first CSV")
    p_stats.add_argument("--b", required=True, help="second CSV")
    p_stats.add_argument("--metric", choices=("evaluations", "iterations"),
                         default="evaluations")
    p_stats.add_argument("--test", choices=("wilcoxon", "ttest", "both"),
                         default="both",
                         help="the machine-readable last line carries the "
                              "last executed test's p-value")
    p_stats.set_defaults(func=cmd_stats)

    p_verify = sub.add_parser("verify", help="run the verification suites")
    p_verify.add_argument("--suite",
                          choices=tuple(verify.SUITES) + ("all",),
                          default="all")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen-instance", help="generate a random instance file")
    p_gen.add_argument("--type", required=True, choices=("mst", "partition"))
    p_gen.add_argument("--n", required=True, type=int,
                       help="vertex count (mst) / object count (partition)")
    p_gen.add_argument("--m", type=int, help="edge count (mst only)")
    p_gen.add_argument("--max-weight", required=True, type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen_instance)
    return parser


_SUMMARY_KEYS = ("problem", "n", "k", "algorithm", "beta_lambda", "beta_p",
                 "beta_c")
_SUMMARY_HEADER = ("problem,n,k,algorithm,beta_lambda,beta_p,beta_c,runs,"
                   "failures,mean,std,min,max,norm_mean")


def _summary_rows(records):
    rows = []
    for group, summary, failures in harness.group_summary(records, _SUMMARY_KEYS):
        problem, n, k, algorithm, bl, bp, bc = group
        if summary is None:
            rows.append((group, 0, failures, None, None, None, None, None))
            continue
        norm = stats.normalize_runtime(summary.mean, n) if n >= 2 else None
        rows.append((group, summary.count, failures, summary.mean,
                     summary.std, summary.min, summary.max, norm))
    return rows


def _print_summary(records):
    for group, runs, failures, mean, std, lo, hi, norm in _summary_rows(records):
        problem, n, k, algorithm, bl, bp, bc = group
        head = f"problem={problem} n={n}" + (f" k={k}" if k is not None else "")
        head += f" algorithm={algorithm}"
        if bl is not None:
            head += f" beta_lambda={bl:g} beta_p={bp:g} beta_c={bc:g}"
        if runs == 0:
            print(f"{head} runs=0 failures={failures}")
            continue
        print(f"{head} runs={runs} failures={failures} "
              f"mean={mean:.6g} std={std:.6g} min={lo:.0f} max={hi:.0f} "
              f"mean/(n ln n)={norm:.6g}")


def _write_summary_csv(records, path):
    def render(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        return str(v)

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_SUMMARY_HEADER + "\n")
        for group, runs, failures, mean, std, lo, hi, norm in _summary_rows(records):
            fields = list(group) + [runs, failures, mean, std, lo, hi, norm]
            fh.write(",".join(render(v) for v in fields) + "\n")


def _resolve_output(config, args):
    output = args.output or config.output
    if not output:
        raise ValueError("config field output: missing (or pass --output)")
    return output


def cmd_run(args):
    config = harness.load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed & harness.MASK64)
    output = _resolve_output(config, args)
    records = harness.run_experiment(config, threads=args.threads)
    harness.write_csv(records, output)
    print(f"# backend={backend()} runs={len(records)} -> {output}")
    _print_summary(records)
    if args.summary:
        _write_summary_csv(records, args.summary)
    return 0


def cmd_sweep(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{args.config}: invalid JSON: {exc}") from None
    if args.seed is not None:
        doc["seed"] = args.seed
    first = harness.sweep_cells(doc)[0]
    output = _resolve_output(first, args)
    records = harness.run_sweep(doc, threads=args.threads)
    harness.write_csv(records, output)
    print(f"# backend={backend()} runs={len(records)} -> {output}")
    _print_summary(records)
    if args.summary:
        _write_summary_csv(records, args.summary)
    return 0


def _metric_values(path, metric):
    records = harness.read_csv(path)
    if not records:
        raise ValueError(f"{path}: no records")
    values = [getattr(r, metric) for r in records if r.success]
    dropped = len(records) - len(values)
    if dropped:
        print(f"# {path}: excluded {dropped} budget-exhausted runs")
    if not values:
        raise ValueError(f"{path}: no successful runs to compare")
    return values


def cmd_stats(args):
    a = _metric_values(args.a, args.metric)
    b = _metric_values(args.b, args.metric)
    sa, sb = stats.summarize(a), stats.summarize(b)
    print(f"a: count={sa.count} mean={sa.mean:.6g} std={sa.std:.6g}")
    print(f"b: count={sb.count} mean={sb.mean:.6g} std={sb.std:.6g}")
    results = []
    if args.test in ("ttest", "both"):
        results.append(stats.t_test_two_sample(a, b))
    if args.test in ("wilcoxon", "both"):
        results.append(stats.wilcoxon_rank_sum(a, b))
    for r in results:
        print(f"method={r.method} statistic={r.statistic!r} "
              f"p_value={r.render_p()}" + (" degenerate" if r.degenerate else ""))
    print(f"p={results[-1].render_p()}")
    return 0


def cmd_verify(args):
    names = tuple(verify.SUITES) if args.suite == "all" else (args.suite,)
    ok, results = verify.run_suites(names)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f" ({r.detail})" if r.detail else ""
        print(f"{status} {r.suite}.{r.name}{detail}")
    print(f"# {sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 3


def cmd_gen_instance(args):
    rng = harness.make_run_rng(args.seed)
    if args.type == "mst":
        if args.m is None:
            raise ValueError("--m is required for mst instances")
        inst = problems.gen_random_mst_instance(args.n, args.m,
                                                args.max_weight, rng)
    else:
        if args.m is not None:
            raise ValueError("--m applies to mst instances only")
        inst = problems.gen_random_partition_instance(args.n, args.max_weight,
                                                      rng)
    problems.save_instance(inst, args.out)
    reloaded = problems.load_instance(args.out)
    assert reloaded.dimension == (inst.m if args.type == "mst" else inst.n)
    print(f"wrote {args.type} instance -> {args.out}")
    return 0


def main(argv=None):
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(line_buffering=True)
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
