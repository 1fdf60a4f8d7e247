"""Heavy-tailed (1+(lambda,lambda)) GA benchmark harness.

The GA redraws all three of its parameters (population size, mutation rate,
crossover bias) from scaled power-law distributions in every iteration; the
package bundles the algorithm with (1+1) EA and static-parameter baselines,
five pseudo-Boolean benchmark problems, brute-force oracles, runtime
statistics and a reproducible experiment pipeline.
"""

from .accel import NUMBA_ENABLED, backend
from .engine import (SQRT_N, HyperParams, IterationParams, RunResult,
                     crossover_phase, ht_ollga_run, mutation_phase,
                     one_plus_one_ea_run, recommended_hyperparams,
                     sample_iteration_params, static_ollga_run)
from .powerlaw import INFINITE, PowerLawParams
from .problems import (BitString, InitMode, JumpParams, MstInstance,
                       PartitionInstance, ProblemInstance,
                       evaluate_jump, evaluate_leadingones, evaluate_mst,
                       evaluate_onemax, evaluate_partition,
                       gen_random_mst_instance, gen_random_partition_instance,
                       init_point, load_instance, make_jump,
                       make_leadingones, make_mst_problem, make_onemax,
                       make_partition_problem, save_instance)
from .stats import (SampleSummary, TestResult, normalize_runtime, summarize,
                    t_test_two_sample, wilcoxon_rank_sum)

__version__ = "0.1.0"

__all__ = [
    "BitString", "HyperParams", "INFINITE", "InitMode", "IterationParams",
    "JumpParams", "MstInstance", "NUMBA_ENABLED", "PartitionInstance",
    "PowerLawParams", "ProblemInstance", "RunResult", "SQRT_N",
    "SampleSummary", "TestResult", "backend", "crossover_phase",
    "evaluate_jump", "evaluate_leadingones", "evaluate_mst",
    "evaluate_onemax", "evaluate_partition", "gen_random_mst_instance",
    "gen_random_partition_instance", "ht_ollga_run", "init_point",
    "load_instance", "make_jump", "make_leadingones", "make_mst_problem",
    "make_onemax", "make_partition_problem", "mutation_phase",
    "normalize_runtime", "one_plus_one_ea_run", "recommended_hyperparams",
    "sample_iteration_params", "save_instance", "static_ollga_run",
    "summarize", "t_test_two_sample", "wilcoxon_rank_sum",
]
