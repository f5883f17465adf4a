"""Human validation loop over an alignment.

A review session wraps an alignment with an append-only decision log.
The queue holds the cells worth a human look (ambiguous ones and/or
low-confidence ones, per policy) that have no effective decision yet.
Decisions are durable before they are acknowledged: each one is a JSON
line appended and fsynced, and replaying the log over the original
alignment reproduces the finalized output byte for byte.  A later
decision on the same cell supersedes earlier ones; the history stays.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .alignment import (
    Alignment,
    Correspondence,
    RelationType,
    alter_cell,
    serialize_alignment_xml,
)
from .ontology import Iri, LiteralValue, Ontology, Triple

__all__ = [
    "Decision",
    "DecisionAction",
    "QueuePolicy",
    "ReviewError",
    "ReviewSession",
    "UnreviewedPolicy",
    "open_session",
]


class ReviewError(ValueError):
    pass


class DecisionAction(Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    ALTER_RELATION = "AlterRelation"
    ALTER_CONFIDENCE = "AlterConfidence"
    ADD_CELL = "AddCell"


class UnreviewedPolicy(Enum):
    KEEP = "Keep"
    DROP = "Drop"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class Decision:
    cell_id: str
    action: DecisionAction
    new_relation: RelationType | None = None
    new_confidence: float | None = None
    payload: Correspondence | None = None
    timestamp: str = field(default_factory=_utc_now)
    actor: str = "anonymous"

    def __post_init__(self) -> None:
        if self.action is DecisionAction.ALTER_RELATION and self.new_relation is None:
            raise ReviewError("AlterRelation requires new_relation")
        if self.action is DecisionAction.ALTER_CONFIDENCE:
            if self.new_confidence is None:
                raise ReviewError("AlterConfidence requires new_confidence")
            if not 0.0 <= self.new_confidence <= 1.0:
                raise ReviewError(f"new_confidence {self.new_confidence} outside [0, 1]")
        if self.action is DecisionAction.ADD_CELL and self.payload is None:
            raise ReviewError("AddCell requires a payload correspondence")
        if self.action in (DecisionAction.ACCEPT, DecisionAction.REJECT):
            if self.new_relation is not None or self.new_confidence is not None:
                raise ReviewError(f"{self.action.value} carries no extras")

    def to_dict(self) -> dict:
        record: dict = {
            "cell_id": self.cell_id,
            "action": self.action.value,
            "timestamp": self.timestamp,
            "actor": self.actor,
        }
        if self.new_relation is not None:
            record["new_relation"] = self.new_relation.value
        if self.new_confidence is not None:
            record["new_confidence"] = self.new_confidence
        if self.payload is not None:
            record["payload"] = {
                "entity1": self.payload.entity1,
                "entity2": self.payload.entity2,
                "relation": self.payload.relation.value,
                "confidence": self.payload.confidence,
            }
        return record

    @classmethod
    def from_dict(cls, raw: dict) -> "Decision":
        payload = None
        if "payload" in raw and raw["payload"] is not None:
            p = raw["payload"]
            payload = Correspondence(
                entity1=p["entity1"],
                entity2=p["entity2"],
                relation=RelationType.from_glyph(p["relation"]),
                confidence=float(p["confidence"]),
            )
        action = DecisionAction(raw["action"])
        cell_id = raw.get("cell_id") or (payload.cell_id if payload else None)
        if not cell_id:
            raise ReviewError("decision missing cell_id")
        return cls(
            cell_id=cell_id,
            action=action,
            new_relation=(
                RelationType.from_glyph(raw["new_relation"])
                if raw.get("new_relation") is not None
                else None
            ),
            new_confidence=raw.get("new_confidence"),
            payload=payload,
            timestamp=raw.get("timestamp", _utc_now()),
            actor=raw.get("actor", "anonymous"),
        )


@dataclass
class QueuePolicy:
    kinds: frozenset[str] = frozenset({"Ambiguous", "LowConfidence"})
    threshold: float = 0.0

    def __post_init__(self) -> None:
        unknown = set(self.kinds) - {"Ambiguous", "LowConfidence"}
        if unknown:
            raise ReviewError(f"unknown queue kinds {sorted(unknown)}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ReviewError(f"threshold {self.threshold} outside [0, 1]")


class ReviewSession:
    """Single-reviewer session; decision writes are serialized by caller."""

    def __init__(
        self,
        alignment: Alignment,
        o1: Ontology,
        o2: Ontology,
        policy: QueuePolicy | None = None,
        log_path: str | Path | None = None,
    ):
        alignment.check_entities(o1.entities, o2.entities)
        self.alignment = alignment
        self.o1 = o1
        self.o2 = o2
        self.policy = policy or QueuePolicy()
        self.log_path = Path(log_path) if log_path else None
        self.decisions: list[Decision] = []
        self._by_id = {c.cell_id: c for c in alignment.cells}
        if self.log_path and self.log_path.exists():
            self._replay_log()

    # -- log handling -----------------------------------------------------

    def _replay_log(self) -> None:
        assert self.log_path is not None
        for line_no, line in enumerate(self.log_path.read_text("utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                decision = Decision.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ReviewError(f"corrupt decision log at line {line_no}: {exc}") from exc
            self._apply(decision)

    def _append_to_log(self, decision: Decision) -> None:
        if self.log_path is None:
            return
        with open(self.log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(decision.to_dict(), sort_keys=True) + "\n")
            handle.flush()
            os.fsync(handle.fileno())

    # -- effective state ---------------------------------------------------

    def effective_decisions(self) -> dict[str, Decision]:
        effective: dict[str, Decision] = {}
        for decision in self.decisions:
            effective[decision.cell_id] = decision
        return effective

    def _current_cells(self) -> list[Correspondence]:
        """Would-be output under Keep policy, in deterministic order."""
        effective = self.effective_decisions()
        out: list[Correspondence] = []
        for cell in self.alignment.cells:
            decision = effective.get(cell.cell_id)
            if decision is None or decision.action is DecisionAction.ACCEPT:
                out.append(cell)
            elif decision.action is DecisionAction.REJECT:
                continue
            elif decision.action is DecisionAction.ALTER_RELATION:
                out.append(alter_cell(cell, relation=decision.new_relation))
            elif decision.action is DecisionAction.ALTER_CONFIDENCE:
                out.append(alter_cell(cell, confidence=decision.new_confidence))
        for decision in self.decisions:
            if decision.action is DecisionAction.ADD_CELL:
                latest = effective[decision.cell_id]
                if latest is decision:
                    out.append(decision.payload)
        return out

    def queue(self) -> list[Correspondence]:
        """Undecided cells selected by the policy, sorted by identity."""
        flagged: set[str] = set()
        if "Ambiguous" in self.policy.kinds:
            flagged |= self.alignment.ambiguous_cells()
        if "LowConfidence" in self.policy.kinds:
            flagged |= {
                c.cell_id
                for c in self.alignment.cells
                if c.confidence < self.policy.threshold
            }
        effective = self.effective_decisions()
        pending = [
            c
            for c in self.alignment.cells
            if c.cell_id in flagged and c.cell_id not in effective
        ]
        pending.sort(key=Correspondence.sort_key)
        return pending

    def competing(self, cell: Correspondence) -> list[Correspondence]:
        """Every other cell sharing the source or the target entity."""
        return [
            c
            for c in self.alignment.cells
            if c.cell_id != cell.cell_id
            and (c.entity1 == cell.entity1 or c.entity2 == cell.entity2)
        ]

    # -- operations ---------------------------------------------------------

    def record_decision(self, decision: Decision) -> Decision:
        self._validate(decision)
        self._append_to_log(decision)
        self._apply(decision)
        return decision

    def _validate(self, decision: Decision) -> None:
        effective = self.effective_decisions()
        added_ids = {
            d.cell_id
            for d in effective.values()
            if d.action is DecisionAction.ADD_CELL
        }
        known = set(self._by_id) | added_ids
        if decision.action is DecisionAction.ADD_CELL:
            payload = decision.payload
            if payload.cell_id != decision.cell_id:
                raise ReviewError("AddCell cell_id must match its payload identity")
            current = {c.identity for c in self._current_cells()}
            if payload.identity in current:
                raise ReviewError(f"cell already present: {payload.identity}")
            return
        if decision.cell_id not in known:
            raise ReviewError(f"unknown cell {decision.cell_id}")
        if decision.action is DecisionAction.ALTER_RELATION:
            original = self._by_id.get(decision.cell_id)
            if original is not None:
                altered = alter_cell(original, relation=decision.new_relation)
                others = {
                    c.identity
                    for c in self._current_cells()
                    if c.cell_id != decision.cell_id
                }
                if altered.identity in others:
                    raise ReviewError(
                        f"alteration collides with existing cell {altered.identity}"
                    )

    def _apply(self, decision: Decision) -> None:
        self.decisions.append(decision)

    def finalize(self, unreviewed: UnreviewedPolicy = UnreviewedPolicy.KEEP) -> Alignment:
        """Validated alignment: accepted + altered + added cells.

        Rejected cells are dropped; unreviewed ones follow the policy.
        """
        effective = self.effective_decisions()
        out: list[Correspondence] = []
        for cell in self.alignment.cells:
            decision = effective.get(cell.cell_id)
            if decision is None:
                if unreviewed is UnreviewedPolicy.KEEP:
                    out.append(cell)
                continue
            if decision.action is DecisionAction.ACCEPT:
                out.append(cell)
            elif decision.action is DecisionAction.ALTER_RELATION:
                out.append(alter_cell(cell, relation=decision.new_relation))
            elif decision.action is DecisionAction.ALTER_CONFIDENCE:
                out.append(alter_cell(cell, confidence=decision.new_confidence))
        for decision in self.decisions:
            if decision.action is DecisionAction.ADD_CELL:
                if effective[decision.cell_id] is decision:
                    out.append(decision.payload)
        out.sort(key=Correspondence.sort_key)
        return self.alignment.with_cells(out)

    def finalize_xml(self, unreviewed: UnreviewedPolicy = UnreviewedPolicy.KEEP) -> str:
        return serialize_alignment_xml(self.finalize(unreviewed))

    def context(self, cell_id: str) -> dict:
        """Everything a reviewer needs for one cell."""
        cell = self._lookup(cell_id)
        return {
            "cell": _cell_view(cell, self),
            "entity1": _entity_view(self.o1, cell.entity1),
            "entity2": _entity_view(self.o2, cell.entity2),
            "competing": [_cell_view(c, self) for c in self.competing(cell)],
        }

    def _lookup(self, cell_id: str) -> Correspondence:
        cell = self._by_id.get(cell_id)
        if cell is not None:
            return cell
        effective = self.effective_decisions()
        decision = effective.get(cell_id)
        if decision is not None and decision.action is DecisionAction.ADD_CELL:
            return decision.payload
        raise ReviewError(f"unknown cell {cell_id}")

    def stats(self) -> dict:
        return {
            "onto1": self.alignment.onto1,
            "onto2": self.alignment.onto2,
            "alignment_size": len(self.alignment.cells),
            "queue_size": len(self.queue()),
            "decided_count": len(self.effective_decisions()),
            "decision_log_length": len(self.decisions),
            "policy": {
                "kinds": sorted(self.policy.kinds),
                "threshold": self.policy.threshold,
            },
        }


def open_session(
    alignment: Alignment,
    o1: Ontology,
    o2: Ontology,
    policy: QueuePolicy | None = None,
    log_path: str | Path | None = None,
) -> ReviewSession:
    """Start (or resume, when the log exists) a review session."""
    return ReviewSession(alignment, o1, o2, policy=policy, log_path=log_path)


def _local_name(iri: str) -> str:
    try:
        return Iri(iri).local_name
    except ValueError:
        return iri


def _cell_view(cell: Correspondence, session: ReviewSession) -> dict:
    competing_ids = [c.cell_id for c in session.competing(cell)]
    return {
        "cell_id": cell.cell_id,
        "entity1": cell.entity1,
        "entity2": cell.entity2,
        "entity1_name": _local_name(cell.entity1),
        "entity2_name": _local_name(cell.entity2),
        "relation": cell.relation.value,
        "relation_symbol": cell.relation.symbol,
        "confidence": cell.confidence,
        "ambiguous": bool(competing_ids),
        "competing": competing_ids,
    }


def _render_assertion(triple: Triple) -> str:
    if isinstance(triple.object, LiteralValue):
        obj = f'"{triple.object.lexical}"'
    else:
        obj = _local_name(str(triple.object))
    return f"{_local_name(str(triple.subject))} {_local_name(str(triple.predicate))} {obj}"


def _entity_view(onto: Ontology, iri_text: str, sample_size: int = 5) -> dict:
    iri = Iri(iri_text)
    kind = onto.entities.get(iri)
    involving = sorted(
        (t for t in onto.triples if t.subject == iri or t.object == iri),
        key=Triple.sort_key,
    )
    neighbor_sets = onto.neighbors(iri) if kind is not None else {}
    return {
        "iri": iri_text,
        "name": iri.local_name,
        "kind": kind.value if kind else None,
        "labels": list(onto.labels.get(iri, [])),
        "neighbors": {k: sorted(str(e) for e in v) for k, v in neighbor_sets.items()},
        "assertions": [_render_assertion(t) for t in involving[:sample_size]],
    }
