#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-numpy fallback.

Runs the same fixed-seed workload twice in subprocesses, once per backend
(selected by the HTOLLGA_NO_NUMBA environment flag), verifies the outputs
are byte-identical, and reports wall time and speedup.

Usage: python benchmarks/bench_kernels.py [--runs N] [--n N] [--budget B]
"""

import argparse
import json
import os
import subprocess
import sys
import tempfile
import time

WORKLOADS = (
    ("onemax", {"problem": {"name": "onemax", "n": 256}}),
    ("jump",   {"problem": {"name": "jump", "n": 32, "k": 3}}),
)


def run_backend(cfg_path, out_path, disable_numba):
    """Wall time of the workload on one backend, measured warm (an untimed
    first pass absorbs imports and the jit-cache load)."""
    env = dict(os.environ)
    env["HTOLLGA_NO_NUMBA"] = "1" if disable_numba else "0"
    code = (
        "import sys, time\n"
        "from htollga import cli\n"
        "from htollga.accel import backend\n"
        f"argv = ['run', '--config', {cfg_path!r}, "
        f"'--output', {out_path!r}, '--threads', '1']\n"
        "assert cli.main(argv) == 0  # warmup\n"
        "t0 = time.perf_counter()\n"
        "rc = cli.main(argv)\n"
        "t1 = time.perf_counter()\n"
        "print(f'BACKEND={backend()} SECONDS={t1 - t0:.6f} RC={rc}')\n"
    )
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr)
    line = [l for l in proc.stdout.splitlines() if l.startswith("BACKEND=")][-1]
    fields = dict(kv.split("=") for kv in line.split())
    return fields["BACKEND"], float(fields["SECONDS"])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=3, help="repetitions per workload")
    ap.add_argument("--budget", type=int, default=30000,
                    help="evaluation budget per run")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as td:
        print(f"{'workload':<10} {'numba [s]':>10} {'numpy [s]':>10} "
              f"{'speedup':>8}  identical")
        for name, extra in WORKLOADS:
            doc = {
                "algorithm": {"name": "heavy", "hyper": {
                    "beta_lambda": 2.5, "u_lambda": "inf", "beta_pc": 1.1}},
                "repetitions": args.runs,
                "budget": args.budget,
                "init": {"mode": "uniform"},
                "seed": 99,
            }
            doc.update(extra)
            cfg = os.path.join(td, f"{name}.json")
            with open(cfg, "w") as fh:
                json.dump(doc, fh)
            out_nb = os.path.join(td, f"{name}_nb.csv")
            out_np = os.path.join(td, f"{name}_np.csv")
            backend_nb, t_nb = run_backend(cfg, out_nb, disable_numba=False)
            backend_np, t_np = run_backend(cfg, out_np, disable_numba=True)
            assert backend_np == "numpy", backend_np
            same = open(out_nb, "rb").read() == open(out_np, "rb").read()
            label = backend_nb if backend_nb == "numba" else "numba?"
            print(f"{name:<10} {t_nb:>10.3f} {t_np:>10.3f} "
                  f"{t_np / t_nb:>7.1f}x  {same}")
            if not same:
                raise SystemExit("backends disagree; investigate before "
                                 "trusting benchmark numbers")


if __name__ == "__main__":
    main()
