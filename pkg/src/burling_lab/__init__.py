"""Recognition and certificates for Burling graphs."""

from .certificates import Budgets, NonBurlingReason, Verdict
from .graph import Graph, GraphParseError, OrientedGraph, parse_graph, serialize_graph
from .recognizer import decide_batch, decide_burling, replay_reason, verify_verdict
from .tree import BurlingTree, DerivationWitness, verify_witness

__all__ = [
    "Budgets",
    "BurlingTree",
    "DerivationWitness",
    "Graph",
    "GraphParseError",
    "NonBurlingReason",
    "OrientedGraph",
    "Verdict",
    "decide_batch",
    "decide_burling",
    "parse_graph",
    "replay_reason",
    "serialize_graph",
    "verify_verdict",
    "verify_witness",
]

__version__ = "0.1.0"
