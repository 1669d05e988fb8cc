"""Exact classification and simulation of finite partial-monitoring games."""

from .game import (
    ActionPair,
    Game,
    GameError,
    build_dueling_game,
    build_mab_game,
    build_pricing_game,
    dueling_action,
    dueling_arms,
)
from .gamefile import GameFormatError, load_game, read_game, save_game, write_game
from .geometry import CellStatus, cell_decomposition, neighbor_pairs, polytope_dimension
from .lp import LinearProgram, LpStatus, solve_lp
from .observability import (
    Verdict,
    classify,
    feedexp_precondition,
    global_observability,
    local_observability,
    point_local_witness,
    signal_matrix,
)
from .simulate import (
    DuelingBernoulli,
    DuelingExp3,
    PolicySpec,
    Scripted,
    Stochastic,
    UniformPolicy,
    batch,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "ActionPair",
    "CellStatus",
    "DuelingBernoulli",
    "DuelingExp3",
    "Game",
    "GameError",
    "GameFormatError",
    "LinearProgram",
    "LpStatus",
    "PolicySpec",
    "Scripted",
    "Stochastic",
    "UniformPolicy",
    "Verdict",
    "batch",
    "build_dueling_game",
    "build_mab_game",
    "build_pricing_game",
    "cell_decomposition",
    "classify",
    "dueling_action",
    "dueling_arms",
    "feedexp_precondition",
    "global_observability",
    "load_game",
    "local_observability",
    "neighbor_pairs",
    "point_local_witness",
    "polytope_dimension",
    "read_game",
    "run",
    "save_game",
    "signal_matrix",
    "solve_lp",
    "write_game",
]
