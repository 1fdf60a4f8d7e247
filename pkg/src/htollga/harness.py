"""Experiment harness: JSON configs, repeated runs with deterministic
per-run streams, thread-pool scheduling, CSV persistence and grouped
summaries.

Seeding: repetition ``i`` of an experiment uses seed ``base_seed + i``
(wrapping at 64 bits); the run's random stream is a PCG64 generator keyed
by the splitmix64 avalanche of that seed, so parallel runs never share
state and the records are a pure function of the config regardless of the
thread count.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from . import engine, problems, stats
from .engine import HyperParams, SQRT_N
from .powerlaw import INFINITE

MASK64 = (1 << 64) - 1

DEFAULT_BUDGET = 10**8
SWEEP_CELL_SEED_STRIDE = 10**6
SWEEP_MAX_CELLS = 10**4

CSV_HEADER = ("run_id,problem,n,k,algorithm,beta_lambda,u_lambda,beta_p,u_p,"
              "beta_c,u_c,init_mode,seed,success,iterations,evaluations,"
              "best_fitness")

HEAVY = "heavy"
STATIC = "static"
EA = "ea"


def mix64(x):
    """One splitmix64 step: a 64-bit avalanche of the run seed."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def make_run_rng(seed):
    """The exclusive random stream of the run with the given seed."""
    return np.random.default_rng(mix64(seed))


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    n: int = None
    k: int = None
    instance: str = None


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    hyper: HyperParams = None
    static_lambda: int = None
    static_p: float = None
    static_c: float = None
    ea_rate: float = None

    def label(self, n):
        if self.name == HEAVY:
            return HEAVY
        if self.name == STATIC:
            return f"static(lambda={self.static_lambda})"
        rate = self.ea_rate if self.ea_rate is not None else 1.0 / n
        return f"ea(rate={rate!r})"


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSpec
    algorithm: AlgorithmSpec
    repetitions: int
    budget: int
    init: problems.InitMode
    seed: int
    output: str = None


@dataclass(frozen=True)
class RunRecord:
    """One CSV row; hyperparameter fields are None for non-heavy
    algorithms, k is None off the jump problem."""

    run_id: int
    problem: str
    n: int
    k: int
    algorithm: str
    beta_lambda: float
    u_lambda: object
    beta_p: float
    u_p: int
    beta_c: float
    u_c: int
    init_mode: str
    seed: int
    success: bool
    iterations: int
    evaluations: int
    best_fitness: int


# --- config parsing ---------------------------------------------------------


def _fail(field, msg):
    raise ValueError(f"config field {field}: {msg}")


def _get_int(obj, field, minimum=None):
    v = obj
    if not isinstance(v, int) or isinstance(v, bool):
        _fail(field, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        _fail(field, f"must be >= {minimum}, got {v}")
    return v


def _parse_u(value, field):
    if value == "inf":
        return INFINITE
    if value == "sqrt_n":
        return SQRT_N
    if isinstance(value, int) and not isinstance(value, bool) and value >= 1:
        return value
    _fail(field, f"expected a positive integer, \"inf\" or \"sqrt_n\", got {value!r}")


def _parse_hyper(obj):
    if not isinstance(obj, dict):
        _fail("algorithm.hyper", "expected an object")
    keys = set(obj)
    allowed = {"beta_lambda", "u_lambda", "beta_p", "u_p", "beta_c", "u_c",
               "beta_pc"}
    unknown = keys - allowed
    if unknown:
        _fail("algorithm.hyper", f"unknown keys {sorted(unknown)}")
    if "beta_pc" in keys and ("beta_p" in keys or "beta_c" in keys):
        _fail("algorithm.hyper", "beta_pc excludes beta_p/beta_c")
    if "beta_pc" in keys:
        bp = bc = float(obj["beta_pc"])
    else:
        if "beta_p" not in keys or "beta_c" not in keys:
            _fail("algorithm.hyper", "beta_p and beta_c (or beta_pc) required")
        bp, bc = float(obj["beta_p"]), float(obj["beta_c"])
    if "beta_lambda" not in keys:
        _fail("algorithm.hyper", "beta_lambda required")
    return HyperParams(
        beta_lambda=float(obj["beta_lambda"]),
        u_lambda=_parse_u(obj.get("u_lambda", "inf"), "algorithm.hyper.u_lambda"),
        beta_p=bp,
        u_p=_parse_u(obj.get("u_p", "sqrt_n"), "algorithm.hyper.u_p"),
        beta_c=bc,
        u_c=_parse_u(obj.get("u_c", "sqrt_n"), "algorithm.hyper.u_c"),
    )


def parse_config(doc):
    """Validate a JSON config document into an ExperimentConfig.

    Raises ValueError naming the offending field.
    """
    if not isinstance(doc, dict):
        raise ValueError("config: expected a JSON object")
    unknown = set(doc) - {"problem", "algorithm", "repetitions", "budget",
                          "init", "seed", "output"}
    if unknown:
        raise ValueError(f"config: unknown keys {sorted(unknown)}")

    pobj = doc.get("problem")
    if not isinstance(pobj, dict):
        _fail("problem", "required object")
    unknown = set(pobj) - {"name", "n", "k", "instance"}
    if unknown:
        _fail("problem", f"unknown keys {sorted(unknown)}")
    name = pobj.get("name")
    if name not in (problems.ONEMAX, problems.LEADINGONES, problems.JUMP,
                    problems.MST, problems.PARTITION):
        _fail("problem.name", f"unknown problem {name!r}")
    n = k = instance = None
    if name in (problems.MST, problems.PARTITION):
        instance = pobj.get("instance")
        if not instance:
            _fail("problem.instance", f"{name} runs need an instance file")
        if not os.path.exists(instance):
            _fail("problem.instance", f"file not found: {instance}")
    else:
        n = _get_int(pobj.get("n"), "problem.n", minimum=1)
        if name == problems.JUMP:
            k = _get_int(pobj.get("k"), "problem.k", minimum=2)
        elif "k" in pobj:
            _fail("problem.k", f"{name} takes no k")

    aobj = doc.get("algorithm")
    if not isinstance(aobj, dict):
        _fail("algorithm", "required object")
    aname = aobj.get("name")
    if aname not in (HEAVY, STATIC, EA):
        _fail("algorithm.name", f"expected one of heavy/static/ea, got {aname!r}")
    unknown = set(aobj) - {"name", "hyper", "static", "ea"}
    if unknown:
        _fail("algorithm", f"unknown keys {sorted(unknown)}")
    hyper = None
    static_lambda = static_p = static_c = ea_rate = None
    if aname == HEAVY:
        if "hyper" not in aobj:
            _fail("algorithm.hyper", "required for the heavy-tailed GA")
        hyper = _parse_hyper(aobj["hyper"])
    elif aname == STATIC:
        sobj = aobj.get("static")
        if not isinstance(sobj, dict) or "lambda" not in sobj:
            _fail("algorithm.static", "needs an object with key lambda")
        unknown = set(sobj) - {"lambda", "p", "c"}
        if unknown:
            _fail("algorithm.static", f"unknown keys {sorted(unknown)}")
        static_lambda = _get_int(sobj["lambda"], "algorithm.static.lambda", minimum=1)
        static_p = float(sobj["p"]) if "p" in sobj else None
        static_c = float(sobj["c"]) if "c" in sobj else None
    else:
        eobj = aobj.get("ea", {})
        if not isinstance(eobj, dict):
            _fail("algorithm.ea", "expected an object")
        unknown = set(eobj) - {"rate"}
        if unknown:
            _fail("algorithm.ea", f"unknown keys {sorted(unknown)}")
        ea_rate = float(eobj["rate"]) if "rate" in eobj else None

    repetitions = _get_int(doc.get("repetitions"), "repetitions", minimum=1)
    budget = doc.get("budget", DEFAULT_BUDGET)
    budget = _get_int(budget, "budget", minimum=0)

    iobj = doc.get("init", {"mode": problems.UNIFORM})
    if not isinstance(iobj, dict):
        _fail("init", "expected an object")
    unknown = set(iobj) - {"mode", "param"}
    if unknown:
        _fail("init", f"unknown keys {sorted(unknown)}")
    mode = iobj.get("mode")
    if mode not in (problems.UNIFORM, problems.JUMP_LOCAL_OPTIMUM,
                    problems.FIXED_DISTANCE):
        _fail("init.mode", f"unknown init mode {mode!r}")
    dist = None
    if mode == problems.FIXED_DISTANCE:
        dist = _get_int(iobj.get("param"), "init.param", minimum=0)
    init = problems.InitMode(mode, dist)

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        _fail("seed", f"expected an integer, got {seed!r}")

    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        _fail("output", f"expected a path string, got {output!r}")

    return ExperimentConfig(
        problem=ProblemSpec(name=name, n=n, k=k, instance=instance),
        algorithm=AlgorithmSpec(name=aname, hyper=hyper,
                                static_lambda=static_lambda,
                                static_p=static_p, static_c=static_c,
                                ea_rate=ea_rate),
        repetitions=repetitions, budget=budget, init=init,
        seed=seed & MASK64, output=output)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from None
    return parse_config(doc)


def build_problem(spec):
    if spec.name == problems.ONEMAX:
        return problems.make_onemax(spec.n)
    if spec.name == problems.LEADINGONES:
        return problems.make_leadingones(spec.n)
    if spec.name == problems.JUMP:
        return problems.make_jump(spec.n, spec.k)
    inst = problems.load_instance(spec.instance)
    if inst.kind != spec.name:
        raise ValueError(f"config field problem.instance: {spec.instance} holds a "
                         f"{inst.kind} instance, not {spec.name}")
    return inst


# --- execution --------------------------------------------------------------


def _run_once(config, problem, run_id):
    seed = (config.seed + run_id) & MASK64
    rng = make_run_rng(seed)
    alg = config.algorithm
    if alg.name == HEAVY:
        res = engine.ht_ollga_run(problem, alg.hyper, config.init,
                                  config.budget, rng, seed=seed)
    elif alg.name == STATIC:
        res = engine.static_ollga_run(problem, alg.static_lambda, config.init,
                                      config.budget, rng, p=alg.static_p,
                                      c=alg.static_c, seed=seed)
    else:
        res = engine.one_plus_one_ea_run(problem, config.init, config.budget,
                                         rng, mutation_rate=alg.ea_rate,
                                         seed=seed)
    n = problem.dimension
    if alg.name == HEAVY:
        h = alg.hyper
        lam_d = h.lambda_dist(n)
        hyper_fields = dict(
            beta_lambda=h.beta_lambda, u_lambda=lam_d.upper,
            beta_p=h.beta_p, u_p=h.p_dist(n).upper,
            beta_c=h.beta_c, u_c=h.c_dist(n).upper)
    else:
        hyper_fields = dict(beta_lambda=None, u_lambda=None, beta_p=None,
                            u_p=None, beta_c=None, u_c=None)
    return RunRecord(
        run_id=run_id, problem=problem.kind, n=n,
        k=problem.jump.k if problem.kind == problems.JUMP else None,
        algorithm=alg.label(n), init_mode=config.init.label(), seed=seed,
        success=res.success, iterations=res.iterations,
        evaluations=res.evaluations, best_fitness=res.best_fitness,
        **hyper_fields)


def run_experiment(config, threads=None):
    """Execute the configured repetitions; records come back in run_id
    order, identical bytes for identical configs whatever the thread
    count."""
    problem = build_problem(config.problem)
    # fail fast on bad algorithm/problem combinations before spawning work
    _validate_combination(config, problem)
    reps = config.repetitions
    if threads is None:
        threads = os.cpu_count() or 1
    threads = max(1, min(int(threads), reps))
    if threads == 1:
        return [_run_once(config, problem, i) for i in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda i: _run_once(config, problem, i),
                             range(reps)))


def _validate_combination(config, problem):
    n = problem.dimension
    alg = config.algorithm
    if alg.name == HEAVY:
        alg.hyper.lambda_dist(n)
        alg.hyper.p_dist(n)
        alg.hyper.c_dist(n)
    elif alg.name == STATIC:
        if not 1 <= alg.static_lambda <= n // 2:
            raise ValueError(f"config field algorithm.static.lambda: must be in "
                             f"[1..n/2] = [1..{n // 2}], got {alg.static_lambda}")
    if config.init.mode == problems.JUMP_LOCAL_OPTIMUM and problem.kind != problems.JUMP:
        raise ValueError("config field init.mode: jump_local_optimum needs the "
                         "jump problem")
    if (config.init.mode == problems.FIXED_DISTANCE
            and problem.kind not in (problems.ONEMAX, problems.LEADINGONES,
                                     problems.JUMP)):
        raise ValueError("config field init.mode: fixed_distance needs an "
                         "all-ones-optimum problem")


# --- sweeps -----------------------------------------------------------------

_SWEEP_AXES = (
    ("problem.n", ("problem", "n")),
    ("problem.k", ("problem", "k")),
    ("algorithm.hyper.beta_lambda", ("algorithm", "hyper", "beta_lambda")),
    ("algorithm.hyper.beta_pc", ("algorithm", "hyper", "beta_pc")),
    ("algorithm.hyper.beta_p", ("algorithm", "hyper", "beta_p")),
    ("algorithm.hyper.beta_c", ("algorithm", "hyper", "beta_c")),
)


def _dig(doc, path):
    cur = doc
    for key in path[:-1]:
        if not isinstance(cur, dict) or key not in cur:
            return None, None
        cur = cur[key]
    if isinstance(cur, dict) and path[-1] in cur:
        return cur, path[-1]
    return None, None


def sweep_cells(doc):
    """Expand list-valued sweep axes of a raw config document into the
    cartesian product of per-cell configs, in axis order (n, k,
    beta_lambda, beta_pc, beta_p, beta_c)."""
    axes = []
    for label, path in _SWEEP_AXES:
        holder, key = _dig(doc, path)
        if holder is None:
            continue
        if isinstance(holder[key], list):
            if not holder[key]:
                raise ValueError(f"config field {label}: empty sweep list")
            axes.append((path, holder[key]))
    counts = 1
    for _, values in axes:
        counts *= len(values)
    if counts > SWEEP_MAX_CELLS:
        raise ValueError(f"sweep of {counts} cells exceeds the cap of "
                         f"{SWEEP_MAX_CELLS}")
    cells = []
    choices = product(*(values for _, values in axes)) if axes else [()]
    for combo in choices:
        cell_doc = json.loads(json.dumps(doc))  # deep copy
        for (path, _values), value in zip(axes, combo):
            holder, key = _dig(cell_doc, path)
            holder[key] = value
        cells.append(parse_config(cell_doc))
    return cells


def run_sweep(doc, threads=None):
    """Run every cell of the sweep; cell ``j`` uses base seed
    ``seed + 10**6 * j`` so no two runs anywhere share a seed.  Records are
    renumbered globally in cell order."""
    cells = sweep_cells(doc)
    records = []
    for j, config in enumerate(cells):
        cell_cfg = replace(config,
                           seed=(config.seed + SWEEP_CELL_SEED_STRIDE * j) & MASK64)
        recs = run_experiment(cell_cfg, threads=threads)
        for r in recs:
            records.append(replace(r, run_id=len(records)))
    return records


# --- CSV --------------------------------------------------------------------


def _render(value):
    if value is None:
        return ""
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value == INFINITE:
        return "inf"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def record_to_row(rec):
    return ",".join(_render(v) for v in (
        rec.run_id, rec.problem, rec.n, rec.k, rec.algorithm,
        rec.beta_lambda, rec.u_lambda, rec.beta_p, rec.u_p,
        rec.beta_c, rec.u_c, rec.init_mode, rec.seed, rec.success,
        rec.iterations, rec.evaluations, rec.best_fitness))


def write_csv(records, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(record_to_row(rec) + "\n")


def _parse_opt_int(tok, line_no, path, column):
    if tok == "":
        return None
    try:
        return int(tok)
    except ValueError:
        raise ValueError(f"{path}: line {line_no}: column {column} must be an "
                         f"integer, got {tok!r}") from None


def _parse_opt_float(tok):
    if tok == "":
        return None
    return float(tok)


def _parse_u_field(tok):
    if tok == "":
        return None
    if tok == "inf":
        return INFINITE
    return int(tok)


def read_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: line 1: missing or wrong header (expected "
                         f"{CSV_HEADER!r})")
    records = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        toks = line.split(",")
        if len(toks) != 17:
            raise ValueError(f"{path}: line {no}: expected 17 fields, got "
                             f"{len(toks)}")
        try:
            rec = RunRecord(
                run_id=int(toks[0]), problem=toks[1], n=int(toks[2]),
                k=_parse_opt_int(toks[3], no, path, "k"), algorithm=toks[4],
                beta_lambda=_parse_opt_float(toks[5]),
                u_lambda=_parse_u_field(toks[6]),
                beta_p=_parse_opt_float(toks[7]),
                u_p=_parse_opt_int(toks[8], no, path, "u_p"),
                beta_c=_parse_opt_float(toks[9]),
                u_c=_parse_opt_int(toks[10], no, path, "u_c"),
                init_mode=toks[11], seed=int(toks[12]),
                success={"true": True, "false": False}[toks[13]],
                iterations=int(toks[14]), evaluations=int(toks[15]),
                best_fitness=int(toks[16]))
        except (ValueError, KeyError) as exc:
            if isinstance(exc, ValueError) and str(exc).startswith(str(path)):
                raise
            raise ValueError(f"{path}: line {no}: malformed row ({exc})") from None
        records.append(rec)
    return records


# --- summaries --------------------------------------------------------------


def group_summary(records, group_keys, normalize=False, metric="evaluations"):
    """Per-group summary of the metric over successful runs.

    Budget-exhausted runs are excluded from the summary and reported as a
    failure count.  With ``normalize`` the metric is divided by n*ln(n).
    Returns a list of (key_tuple, SampleSummary or None, failures) in first-
    appearance order.
    """
    groups = {}
    order = []
    for rec in records:
        key = tuple(getattr(rec, k) for k in group_keys)
        if key not in groups:
            groups[key] = ([], [0])
            order.append(key)
        values, failures = groups[key]
        if rec.success:
            v = float(getattr(rec, metric))
            if normalize:
                v = stats.normalize_runtime(v, rec.n)
            values.append(v)
        else:
            failures[0] += 1
    out = []
    for key in order:
        values, failures = groups[key]
        summary = stats.summarize(values) if values else None
        out.append((key, summary, failures[0]))
    return out
