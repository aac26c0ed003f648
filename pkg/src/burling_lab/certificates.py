"""Verdicts and the evidence attached to them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .tree import DerivationWitness

TRIANGLE = "triangle"
WHEEL = "wheel"
TRICHOTOMY = "trichotomy"
ORIENTATION_UNSAT = "orientation-unsat"
FAMILY_THEOREM = "family-theorem"
REASON_KINDS = (TRIANGLE, WHEEL, TRICHOTOMY, ORIENTATION_UNSAT, FAMILY_THEOREM)

MEMBER = "member"
NON_MEMBER = "non-member"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Budgets:
    max_tree_nodes: int = 9
    max_orient_edges: int = 28

    def __post_init__(self):
        if self.max_tree_nodes < 1 or self.max_orient_edges < 0:
            raise ValueError("budgets must be positive")

    def to_json(self) -> dict:
        return {"maxTreeNodes": self.max_tree_nodes, "maxOrientEdges": self.max_orient_edges}


@dataclass(frozen=True)
class NonBurlingReason:
    """``evidence`` is kind-specific JSON.  Vertex ids in it refer to the
    graph being judged, except when a ``within`` list is present: the rest
    of the evidence is then phrased on the subgraph induced by ``within``,
    relabelled ``0..k-1`` in increasing order."""

    kind: str
    evidence: dict[str, Any] = field(hash=False)

    def __post_init__(self):
        if self.kind not in REASON_KINDS:
            raise ValueError(f"unknown reason kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.evidence}

    @classmethod
    def from_json(cls, data: dict) -> "NonBurlingReason":
        data = dict(data)
        kind = data.pop("kind")
        return cls(kind, data)


@dataclass(frozen=True)
class Verdict:
    verdict: str
    budgets: Budgets
    witness: DerivationWitness | None = None
    reason: NonBurlingReason | None = None
    note: str = ""

    @property
    def is_member(self) -> bool:
        return self.verdict == MEMBER

    @property
    def is_non_member(self) -> bool:
        return self.verdict == NON_MEMBER

    def to_json(self) -> dict:
        if self.verdict == MEMBER:
            assert self.witness is not None
            cert: dict = self.witness.to_json()
            if self.note:
                cert = {"route": self.note, **cert}
        elif self.verdict == NON_MEMBER:
            assert self.reason is not None
            cert = self.reason.to_json()
        else:
            cert = {"exhausted": self.note} if self.note else {}
        return {"verdict": self.verdict, "certificate": cert, "budgets": self.budgets.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        b = data.get("budgets", {})
        budgets = Budgets(int(b.get("maxTreeNodes", 9)), int(b.get("maxOrientEdges", 28)))
        cert = dict(data.get("certificate", {}))
        kind = data["verdict"]
        if kind == MEMBER:
            note = cert.pop("route", "")
            return cls(MEMBER, budgets, witness=DerivationWitness.from_json(cert), note=note)
        if kind == NON_MEMBER:
            return cls(NON_MEMBER, budgets, reason=NonBurlingReason.from_json(cert))
        if kind == UNKNOWN:
            return cls(UNKNOWN, budgets, note=cert.get("exhausted", ""))
        raise ValueError(f"unknown verdict {kind!r}")
