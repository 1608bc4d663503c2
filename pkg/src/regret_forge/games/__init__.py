from .model import (
    CHANCE,
    P1,
    P2,
    PLAYERS,
    TERMINAL,
    Game,
    GameStructureError,
    Infoset,
    InfosetIndex,
    Node,
    StrategyProfile,
    ValidationReport,
    Violation,
    chance,
    decision,
    enumerate_infosets,
    expected_value,
    terminal,
    validate_game,
)
from .builtin import (
    BUILTIN_NAMES,
    GameSpecError,
    build_bandit,
    build_goofspiel5,
    build_kuhn,
    build_leduc,
    build_matrix_game,
    game_from_name,
)
from .loader import GameFileError, game_from_json, load_game_file, load_matrix_file

__all__ = [
    "CHANCE", "P1", "P2", "PLAYERS", "TERMINAL",
    "Game", "GameStructureError", "Infoset", "InfosetIndex", "Node",
    "StrategyProfile", "ValidationReport", "Violation",
    "chance", "decision", "enumerate_infosets", "expected_value",
    "terminal", "validate_game",
    "BUILTIN_NAMES", "GameSpecError", "build_bandit", "build_goofspiel5",
    "build_kuhn", "build_leduc", "build_matrix_game", "game_from_name",
    "GameFileError", "game_from_json", "load_game_file", "load_matrix_file",
]
