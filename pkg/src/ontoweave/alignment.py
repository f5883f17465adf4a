"""Correspondences, alignments, and the Alignment exchange formats.

Cells are identified by the (entity1, entity2, relation) triple; the
confidence is metadata and never participates in set algebra.  The XML
format follows the common alignment exchange schema (``rdf:RDF`` around
an ``Alignment`` element with ``map``/``Cell`` children); a JSON mirror
carries the same fields.  Relation glyphs beyond "=", "<", ">" are a
toolkit convention, documented on ``RelationType``.
"""

from __future__ import annotations

import hashlib
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from enum import Enum

__all__ = [
    "ALIGNMENT_NS",
    "Alignment",
    "AlignmentFormatError",
    "Correspondence",
    "RelationType",
    "alter_cell",
    "parse_alignment_json",
    "parse_alignment_xml",
    "serialize_alignment_json",
    "serialize_alignment_xml",
    "format_confidence",
]

ALIGNMENT_NS = "http://knowledgeweb.semanticweb.org/heterogeneity/alignment"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


class AlignmentFormatError(ValueError):
    pass


class RelationType(Enum):
    """Semantic relation of a correspondence.

    Glyphs "=", "<", ">" are standard; "%", "InstanceOf", "Overlaps"
    extend them for disjointness, instantiation, and overlap.
    """

    EQUIVALENCE = "="
    SUBSUMED_BY = "<"
    SUBSUMES = ">"
    DISJOINT = "%"
    INSTANCE_OF = "InstanceOf"
    OVERLAP = "Overlaps"

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_glyph(cls, glyph: str) -> "RelationType":
        try:
            return cls(glyph)
        except ValueError:
            raise AlignmentFormatError(f"unknown relation glyph {glyph!r}") from None


_SYMBOLS = {
    RelationType.EQUIVALENCE: "≡",
    RelationType.SUBSUMED_BY: "⊑",
    RelationType.SUBSUMES: "⊒",
    RelationType.DISJOINT: "⊥",
    RelationType.INSTANCE_OF: "∈",
    RelationType.OVERLAP: "≬",
}


@dataclass(frozen=True)
class Correspondence:
    entity1: str
    entity2: str
    relation: RelationType = RelationType.EQUIVALENCE
    confidence: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise AlignmentFormatError(
                f"confidence {self.confidence} outside [0, 1]"
            )

    @property
    def identity(self) -> tuple[str, str, str]:
        return (self.entity1, self.entity2, self.relation.value)

    @property
    def cell_id(self) -> str:
        """Stable content hash of the identity triple."""
        payload = "\x1f".join(self.identity).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def sort_key(self) -> tuple[str, str, str]:
        return self.identity


@dataclass
class Alignment:
    onto1: str = ""
    onto2: str = ""
    cardinality: str = "**"
    cells: list[Correspondence] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[tuple[str, str, str]] = set()
        for cell in self.cells:
            if cell.identity in seen:
                raise AlignmentFormatError(f"duplicate cell {cell.identity}")
            seen.add(cell.identity)

    def __len__(self) -> int:
        return len(self.cells)

    def cell_by_id(self, cell_id: str) -> Correspondence:
        for cell in self.cells:
            if cell.cell_id == cell_id:
                return cell
        raise KeyError(cell_id)

    def identities(self) -> set[tuple[str, str, str]]:
        return {c.identity for c in self.cells}

    def ambiguous_cells(self) -> set[str]:
        """Ids of cells sharing entity1 or entity2 with another cell."""
        left: dict[str, int] = {}
        right: dict[str, int] = {}
        for c in self.cells:
            left[c.entity1] = left.get(c.entity1, 0) + 1
            right[c.entity2] = right.get(c.entity2, 0) + 1
        return {
            c.cell_id
            for c in self.cells
            if left[c.entity1] >= 2 or right[c.entity2] >= 2
        }

    def with_cells(self, cells: list[Correspondence]) -> "Alignment":
        return Alignment(self.onto1, self.onto2, self.cardinality, list(cells))

    def check_entities(self, onto1_entities, onto2_entities) -> None:
        """Optional referential check when the ontologies are at hand."""
        for c in self.cells:
            if c.entity1 not in onto1_entities:
                raise AlignmentFormatError(f"entity1 not in first ontology: {c.entity1}")
            if c.entity2 not in onto2_entities:
                raise AlignmentFormatError(f"entity2 not in second ontology: {c.entity2}")


def format_confidence(value: float) -> str:
    """Decimal with up to 6 fraction digits, at least one ("1.0", "0.76")."""
    text = f"{value:.6f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    return text


def _parse_measure(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise AlignmentFormatError(f"unreadable measure {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise AlignmentFormatError(f"measure {text} outside [0, 1]")
    return value


def parse_alignment_xml(text: str) -> Alignment:
    """Read an alignment from the XML exchange format."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise AlignmentFormatError(f"malformed XML: {exc}") from exc
    ns = {"a": ALIGNMENT_NS, "rdf": RDF_NS}
    node = root.find("a:Alignment", ns)
    if node is None:
        raise AlignmentFormatError("missing Alignment element")
    onto1 = _onto_text(node.find("a:onto1", ns))
    onto2 = _onto_text(node.find("a:onto2", ns))
    type_node = node.find("a:type", ns)
    cardinality = type_node.text.strip() if type_node is not None and type_node.text else "**"
    cells = []
    for map_node in node.findall("a:map", ns):
        for cell_node in map_node.findall("a:Cell", ns):
            cells.append(_parse_cell(cell_node, ns))
    return Alignment(onto1=onto1, onto2=onto2, cardinality=cardinality, cells=cells)


def _onto_text(node) -> str:
    if node is None:
        return ""
    resource = node.get(f"{{{RDF_NS}}}resource")
    if resource:
        return resource
    return (node.text or "").strip()


def _parse_cell(cell_node, ns) -> Correspondence:
    e1 = cell_node.find("a:entity1", ns)
    e2 = cell_node.find("a:entity2", ns)
    if e1 is None or e1.get(f"{{{RDF_NS}}}resource") is None:
        raise AlignmentFormatError("Cell missing entity1 resource")
    if e2 is None or e2.get(f"{{{RDF_NS}}}resource") is None:
        raise AlignmentFormatError("Cell missing entity2 resource")
    relation_node = cell_node.find("a:relation", ns)
    if relation_node is None or relation_node.text is None:
        raise AlignmentFormatError("Cell missing relation")
    measure_node = cell_node.find("a:measure", ns)
    if measure_node is None or measure_node.text is None:
        raise AlignmentFormatError("Cell missing measure")
    return Correspondence(
        entity1=e1.get(f"{{{RDF_NS}}}resource"),
        entity2=e2.get(f"{{{RDF_NS}}}resource"),
        relation=RelationType.from_glyph(relation_node.text.strip()),
        confidence=_parse_measure(measure_node.text.strip()),
    )


def serialize_alignment_xml(alignment: Alignment) -> str:
    """Deterministic XML: cells sorted by (entity1, entity2, relation)."""
    lines = [
        '<?xml version="1.0" encoding="utf-8"?>',
        f'<rdf:RDF xmlns="{ALIGNMENT_NS}"',
        f'         xmlns:rdf="{RDF_NS}"',
        '         xmlns:xsd="http://www.w3.org/2001/XMLSchema#">',
        "  <Alignment>",
        "    <xml>yes</xml>",
        "    <level>0</level>",
        f"    <type>{_xml_escape(alignment.cardinality)}</type>",
        f"    <onto1>{_xml_escape(alignment.onto1)}</onto1>",
        f"    <onto2>{_xml_escape(alignment.onto2)}</onto2>",
    ]
    for cell in sorted(alignment.cells, key=Correspondence.sort_key):
        lines.extend(
            [
                "    <map>",
                "      <Cell>",
                f'        <entity1 rdf:resource="{_xml_escape(cell.entity1)}"/>',
                f'        <entity2 rdf:resource="{_xml_escape(cell.entity2)}"/>',
                f"        <relation>{_xml_escape(cell.relation.value)}</relation>",
                '        <measure rdf:datatype="xsd:float">'
                f"{format_confidence(cell.confidence)}</measure>",
                "      </Cell>",
                "    </map>",
            ]
        )
    lines.extend(["  </Alignment>", "</rdf:RDF>", ""])
    return "\n".join(lines)


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def parse_alignment_json(text: str) -> Alignment:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlignmentFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(payload, dict) or "cells" not in payload:
        raise AlignmentFormatError("alignment JSON must be an object with 'cells'")
    cells = []
    for raw in payload["cells"]:
        missing = {"entity1", "entity2", "relation", "confidence"} - set(raw)
        if missing:
            raise AlignmentFormatError(f"cell missing fields {sorted(missing)}")
        cells.append(
            Correspondence(
                entity1=raw["entity1"],
                entity2=raw["entity2"],
                relation=RelationType.from_glyph(raw["relation"]),
                confidence=_check_json_confidence(raw["confidence"]),
            )
        )
    return Alignment(
        onto1=payload.get("onto1", ""),
        onto2=payload.get("onto2", ""),
        cardinality=payload.get("type", "**"),
        cells=cells,
    )


def _check_json_confidence(value) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise AlignmentFormatError(f"confidence must be a number, got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise AlignmentFormatError(f"confidence {value} outside [0, 1]")
    return float(value)


def serialize_alignment_json(alignment: Alignment) -> str:
    payload = {
        "onto1": alignment.onto1,
        "onto2": alignment.onto2,
        "type": alignment.cardinality,
        "cells": [
            {
                "entity1": c.entity1,
                "entity2": c.entity2,
                "relation": c.relation.value,
                "confidence": c.confidence,
            }
            for c in sorted(alignment.cells, key=Correspondence.sort_key)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def alter_cell(
    cell: Correspondence,
    relation: RelationType | None = None,
    confidence: float | None = None,
) -> Correspondence:
    """Copy with a new relation and/or confidence."""
    changes = {}
    if relation is not None:
        changes["relation"] = relation
    if confidence is not None:
        changes["confidence"] = confidence
    return replace(cell, **changes)
