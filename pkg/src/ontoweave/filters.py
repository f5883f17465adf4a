"""Alignment uncertainty filters.

Four transforms over immutable alignments:

* ``trim`` — confidence cut at a threshold alpha.
* ``disambiguate_two_pass`` — per-source then per-target strongest-cell
  selection; exact confidence ties are all kept, never broken at random.
* ``disambiguate_max_weight`` — exact maximum-total-confidence matching
  (assignment solver), ties broken by cell identity order.
* ``rewrite_ambiguous_to_subsumption`` — ambiguous equivalences become
  subsumptions, the shared entity taken as the more general one.

All four are pure and idempotent; outputs are sub-multisets of the input
cells except for the relation rewrite, which preserves confidences.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .alignment import Alignment, Correspondence, RelationType, alter_cell

__all__ = [
    "disambiguate_max_weight",
    "disambiguate_two_pass",
    "rewrite_ambiguous_to_subsumption",
    "trim",
]


def trim(alignment: Alignment, alpha: float) -> Alignment:
    """Keep only cells with confidence >= alpha (the alpha-cut)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"threshold {alpha} outside [0, 1]")
    return alignment.with_cells([c for c in alignment.cells if c.confidence >= alpha])


def _keep_group_maxima(cells: list[Correspondence], key) -> list[Correspondence]:
    best: dict[str, float] = {}
    for c in cells:
        k = key(c)
        if k not in best or c.confidence > best[k]:
            best[k] = c.confidence
    return [c for c in cells if c.confidence == best[key(c)]]


def disambiguate_two_pass(alignment: Alignment) -> Alignment:
    """Strongest cell per source entity, then per target entity.

    Pass 1 groups by entity1 and keeps every cell attaining the group
    maximum (ties kept); pass 2 repeats over the survivors grouped by
    entity2.  Tie-free inputs come out one-to-one.
    """
    survivors = _keep_group_maxima(alignment.cells, lambda c: c.entity1)
    survivors = _keep_group_maxima(survivors, lambda c: c.entity2)
    return alignment.with_cells(survivors)


def disambiguate_max_weight(alignment: Alignment) -> Alignment:
    """Sub-alignment forming a matching of maximum total confidence.

    Solved exactly with the rectangular assignment solver.  A vanishing
    identity-ordered bonus picks a deterministic optimum among ties; it
    is far below the 1e-6 wire resolution of confidence values and never
    overrides a genuinely better total.
    """
    cells = alignment.cells
    if not cells:
        return alignment.with_cells([])

    lefts = sorted({c.entity1 for c in cells})
    rights = sorted({c.entity2 for c in cells})
    li = {e: i for i, e in enumerate(lefts)}
    ri = {e: i for i, e in enumerate(rights)}

    ranked = sorted(cells, key=Correspondence.sort_key)
    eps = 1e-10 / (len(ranked) + 1)
    weights = np.zeros((len(lefts), len(rights)))
    chosen_for_pair: dict[tuple[int, int], Correspondence] = {}
    for rank, cell in enumerate(ranked):
        pos = (li[cell.entity1], ri[cell.entity2])
        bonus = eps * (len(ranked) - rank)
        value = cell.confidence + bonus
        if value > weights[pos]:
            weights[pos] = value
            chosen_for_pair[pos] = cell

    rows, cols = linear_sum_assignment(weights, maximize=True)
    picked = {
        chosen_for_pair[(r, c)].identity
        for r, c in zip(rows, cols)
        if (r, c) in chosen_for_pair
    }
    return alignment.with_cells([c for c in cells if c.identity in picked])


def rewrite_ambiguous_to_subsumption(
    alignment: Alignment, shared_entity_is_super: bool = True
) -> Alignment:
    """Turn every ambiguous equivalence cell into a subsumption cell.

    The entity occurring in several cells is read as the more general
    one, so a shared entity1 yields "entity1 subsumes entity2"; a cell
    ambiguous on both sides follows its entity1 grouping.  Set
    ``shared_entity_is_super=False`` to flip the direction.  Confidences
    and unambiguous cells are untouched.
    """
    ambiguous = alignment.ambiguous_cells()
    left_counts: dict[str, int] = {}
    for c in alignment.cells:
        left_counts[c.entity1] = left_counts.get(c.entity1, 0) + 1

    rewritten: list[Correspondence] = []
    seen: dict[tuple[str, str, str], int] = {}
    for cell in alignment.cells:
        if cell.cell_id in ambiguous and cell.relation is RelationType.EQUIVALENCE:
            shared_left = left_counts[cell.entity1] >= 2
            super_on_left = shared_left if shared_entity_is_super else not shared_left
            relation = RelationType.SUBSUMES if super_on_left else RelationType.SUBSUMED_BY
            cell = alter_cell(cell, relation=relation)
        if cell.identity in seen:
            # rewrite collided with an existing cell: keep the stronger one
            index = seen[cell.identity]
            if cell.confidence > rewritten[index].confidence:
                rewritten[index] = cell
            continue
        seen[cell.identity] = len(rewritten)
        rewritten.append(cell)
    return alignment.with_cells(rewritten)
