"""Classical capacity of queue-channels with waiting-time dependent noise."""

import json
from importlib import resources

from .capacity import CapacityEstimate, binary_entropy
from .decoherence import DecoherenceModel, ExpDecay, Table, apply_channel
from .distributions import Deterministic, Erlang, Exponential, HyperExponential, Uniform, make_rng
from .queue_sim import EventTrace, QueueConfig, simulate

__version__ = "0.1.0"

SCHEMAS = ("capacity", "optimize", "code_test", "sweep_summary")


def load_schema(name: str) -> dict:
    """JSON schema shipped for a subcommand's JSON output."""
    if name not in SCHEMAS:
        raise KeyError(f"no schema named {name!r}; choose from {SCHEMAS}")
    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text())
