"""Python bindings for the fourhammer rules engine."""

from ._fourhammer import (
    ACTION_COUNT,
    SCENARIOS,
    TENSOR_LENGTH,
    DecodeError,
    Error,
    Game,
    GameAlreadyOver,
    IllegalAction,
    describe_action,
    validate_stats,
)

__all__ = [
    "ACTION_COUNT",
    "SCENARIOS",
    "TENSOR_LENGTH",
    "DecodeError",
    "Error",
    "Game",
    "GameAlreadyOver",
    "IllegalAction",
    "describe_action",
    "validate_stats",
]
