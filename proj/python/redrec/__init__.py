"""Atom-reconfiguration toolkit: red-rec heuristic, exact chain solver,
assignment baseline, and the lossy Monte Carlo protocol simulator."""

from ._core import (
    GridSpec,
    LossParams,
    ChainPlan,
    baseline_success,
    solve_chain,
    solve_mwpm_cost,
    redrec_cycle_counts,
    run_monte_carlo,
    __version__,
)

__all__ = [
    "GridSpec",
    "LossParams",
    "ChainPlan",
    "baseline_success",
    "solve_chain",
    "solve_mwpm_cost",
    "redrec_cycle_counts",
    "run_monte_carlo",
    "__version__",
]
