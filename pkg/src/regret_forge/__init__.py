"""Solvers and benchmarks for two-player zero-sum imperfect-information games.

The package implements the discounted counterfactual-regret-minimization
family (CFR, CFR+, LCFR, LCFR+, parameterized discounting, NormalHedge and
optimistic strategy rules, and discounted external-sampling MCCFR) over
materialized extensive-form game trees, together with an exact best-response
evaluator and a benchmark CLI that writes convergence CSVs.
"""

from .games import (
    Game,
    GameFileError,
    GameSpecError,
    GameStructureError,
    InfosetIndex,
    Node,
    P1,
    P2,
    StrategyProfile,
    ValidationReport,
    build_bandit,
    build_goofspiel5,
    build_kuhn,
    build_leduc,
    build_matrix_game,
    enumerate_infosets,
    expected_value,
    game_from_name,
    load_game_file,
    validate_game,
)
from .minimizers import (
    DiscountSchedule,
    NO_DISCOUNT,
    NumericError,
    discount_multipliers,
    nh_scale,
    nh_strategy,
    optimistic_regret,
    rm_plus_update,
    rm_strategy,
)
from .flat import FlatGame, build_flat
from .cfr import (
    CfrRun,
    PRESETS,
    SolveConfig,
    checkpoint_iterations,
    preset_config,
    solve,
)
from .mccfr import MccfrConfig, MccfrRun, checkpoint_nodes, solve_mccfr
from .evaluate import (
    ConvergenceRecord,
    IterateSummary,
    best_response,
    best_response_value,
    exploitability,
    exploitability_parts,
    overall_regret,
    to_mbb,
)

__version__ = "0.1.0"
