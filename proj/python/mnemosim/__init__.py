"""Python bindings for the mnemosim memory-dynamics engine."""

import json

from ._core import (
    MnemosimError,
    always,
    chain_entropy,
    check_next_box_commute,
    eventually,
    next,
    optimal_distribution,
    recall_efficiency,
    relation_latency,
    strength,
    transition_probability,
)
from . import _core


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def simulate(scenario, json_lines=False):
    """Run a scenario (dict or JSON text). Returns (log text, metrics dict)."""
    log, metrics = _core.simulate(_text(scenario), json_lines)
    return log, json.loads(metrics)


def validate(scenario):
    """List of (field, message) violations; empty when the scenario is valid."""
    return _core.validate(_text(scenario))


def normalize(scenario):
    """The scenario as a dict with every field spelled out."""
    return json.loads(_core.normalize(_text(scenario)))


def latency(scenario, target, anchor=None, modifiers=None):
    """Resolve a recall latency. Returns (T_R, [(stage, value), ...])."""
    return _core.latency(_text(scenario), target, anchor, modifiers)


def influence(scenario, src, dst):
    """Recursive and total influence from src to dst."""
    return _core.influence(_text(scenario), src, dst)


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


__all__ = [
    "MnemosimError",
    "always",
    "chain_entropy",
    "check_next_box_commute",
    "eventually",
    "influence",
    "latency",
    "load",
    "next",
    "normalize",
    "optimal_distribution",
    "recall_efficiency",
    "relation_latency",
    "simulate",
    "strength",
    "transition_probability",
    "validate",
]
