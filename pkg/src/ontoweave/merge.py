"""Merging two ontologies through an alignment.

The merged ontology is the plain union of both inputs plus one bridging
axiom per translatable correspondence: equivalent classes are linked with
``owl:equivalentClass``, equivalent properties with
``owl:equivalentProperty``, identical individuals with ``owl:sameAs``,
and subsumptions with ``rdfs:subClassOf``/``rdfs:subPropertyOf`` oriented
child to parent.  Disjointness, instantiation, and overlap cells have no
single-triple encoding in the supported subset; they are left out of the
graph and reported in a sidecar instead of being guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import Alignment, Correspondence, RelationType
from .ontology import (
    OWL_EQUIVALENT_CLASS,
    OWL_EQUIVALENT_PROPERTY,
    OWL_SAME_AS,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    EntityKind,
    Iri,
    Ontology,
    OntologyError,
    Triple,
)

__all__ = ["BridgeResult", "SkippedCell", "bridge_axioms", "merge"]


@dataclass(frozen=True)
class SkippedCell:
    entity1: str
    entity2: str
    relation: str
    reason: str


@dataclass
class BridgeResult:
    triples: set[Triple]
    skipped: list[SkippedCell]


_EQUIVALENCE_PREDICATE = {
    EntityKind.ONTOLOGY_CLASS: OWL_EQUIVALENT_CLASS,
    EntityKind.OBJECT_PROPERTY: OWL_EQUIVALENT_PROPERTY,
    EntityKind.DATATYPE_PROPERTY: OWL_EQUIVALENT_PROPERTY,
    EntityKind.INDIVIDUAL: OWL_SAME_AS,
}

_SUBSUMPTION_PREDICATE = {
    EntityKind.ONTOLOGY_CLASS: RDFS_SUBCLASSOF,
    EntityKind.OBJECT_PROPERTY: RDFS_SUBPROPERTYOF,
    EntityKind.DATATYPE_PROPERTY: RDFS_SUBPROPERTYOF,
}


def _resolve_kind(cell: Correspondence, o1: Ontology, o2: Ontology) -> EntityKind:
    e1, e2 = Iri(cell.entity1), Iri(cell.entity2)
    kind1 = o1.entities.get(e1)
    kind2 = o2.entities.get(e2)
    if kind1 is None:
        raise OntologyError(f"entity1 not found in first ontology: {cell.entity1}")
    if kind2 is None:
        raise OntologyError(f"entity2 not found in second ontology: {cell.entity2}")
    if kind1 is not kind2:
        raise OntologyError(
            f"kind mismatch in cell {cell.identity}: {kind1.value} vs {kind2.value}"
        )
    return kind1


def bridge_axioms(alignment: Alignment, o1: Ontology, o2: Ontology) -> BridgeResult:
    """Translate alignment cells into bridging triples."""
    triples: set[Triple] = set()
    skipped: list[SkippedCell] = []
    for cell in alignment.cells:
        kind = _resolve_kind(cell, o1, o2)
        e1, e2 = Iri(cell.entity1), Iri(cell.entity2)
        if cell.relation is RelationType.EQUIVALENCE:
            triples.add(Triple(e1, Iri(_EQUIVALENCE_PREDICATE[kind]), e2))
        elif cell.relation in (RelationType.SUBSUMES, RelationType.SUBSUMED_BY):
            predicate = _SUBSUMPTION_PREDICATE.get(kind)
            if predicate is None:
                skipped.append(
                    SkippedCell(
                        cell.entity1,
                        cell.entity2,
                        cell.relation.value,
                        "no subsumption axiom between individuals",
                    )
                )
                continue
            if cell.relation is RelationType.SUBSUMES:
                # entity1 subsumes entity2: the child side is entity2
                triples.add(Triple(e2, Iri(predicate), e1))
            else:
                triples.add(Triple(e1, Iri(predicate), e2))
        else:
            skipped.append(
                SkippedCell(
                    cell.entity1,
                    cell.entity2,
                    cell.relation.value,
                    f"relation {cell.relation.value!r} has no OWL-DL triple encoding",
                )
            )
    return BridgeResult(triples=triples, skipped=skipped)


def merge(o1: Ontology, o2: Ontology, alignment: Alignment) -> Ontology:
    """Union of both ontologies plus the bridge axioms (identity by IRI)."""
    entities: dict[Iri, EntityKind] = dict(o1.entities)
    for iri, kind in o2.entities.items():
        existing = entities.get(iri)
        if existing is not None and existing is not kind:
            raise OntologyError(
                f"{iri} present in both inputs with kinds {existing.value} and {kind.value}"
            )
        entities[iri] = kind

    labels: dict[Iri, list[str]] = {k: list(v) for k, v in o1.labels.items()}
    for iri, names in o2.labels.items():
        bucket = labels.setdefault(iri, [])
        for name in names:
            if name not in bucket:
                bucket.append(name)

    bridges = bridge_axioms(alignment, o1, o2)
    merged = Ontology(
        base_iri=o1.base_iri,
        entities=entities,
        labels={k: sorted(v) for k, v in labels.items()},
        triples=frozenset(o1.triples | o2.triples | bridges.triples),
    )
    merged.validate()
    return merged
