"""Python bindings for the noisyq C++ core."""

from ._core import (
    AgentConfig,
    ConfigError,
    Environment,
    IoError,
    NotReadyError,
    NumericError,
    ShapeError,
    StateError,
    compare,
    factorise,
    format_score,
    k_frame,
    k_reward,
    make_env,
    run_experiment,
    smooth_trailing,
    train,
)

__all__ = [
    "AgentConfig",
    "ConfigError",
    "Environment",
    "IoError",
    "NotReadyError",
    "NumericError",
    "ShapeError",
    "StateError",
    "compare",
    "factorise",
    "format_score",
    "k_frame",
    "k_reward",
    "make_env",
    "run_experiment",
    "smooth_trailing",
    "train",
]
