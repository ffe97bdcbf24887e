"""Python bindings for the snsmq simulator."""

from ._snsmq import (  # noqa: F401
    ConfigError,
    DomainError,
    FormatError,
    Graph,
    StructureError,
    config_keys,
    decode,
    encode,
    generate_conn,
    play_game,
    post_probability,
    run_episode,
    run_plan,
    selection_probabilities,
    stage_costs,
    utility,
    view_probability,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FormatError",
    "Graph",
    "StructureError",
    "config_keys",
    "decode",
    "encode",
    "generate_conn",
    "play_game",
    "post_probability",
    "run_episode",
    "run_plan",
    "selection_probabilities",
    "stage_costs",
    "utility",
    "view_probability",
]
