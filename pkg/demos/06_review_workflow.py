"""The human validation loop, driven headlessly.

A review session queues the cells worth human attention (ambiguous or
low-confidence ones), records durable decisions, and finalizes the
validated alignment.  The same session normally runs behind the HTTP
service (`ontoweave review ...`) with the browser UI on top; everything
below works against the session object directly.
"""

import tempfile
from pathlib import Path

from ontoweave import (
    Correspondence,
    Decision,
    DecisionAction,
    OntologyBuilder,
    QueuePolicy,
    RelationType,
    UnreviewedPolicy,
    open_session,
)

BASE_A, BASE_B = "http://x.org/a", "http://x.org/b"

builder_a = OntologyBuilder(BASE_A)
country_a = builder_a.add_class(f"{BASE_A}#Country")
for name in ("Repub._of_the_Congo", "Sudan_(former)", "Italy"):
    builder_a.add_individual(f"{BASE_A}#{name}", country_a)
builder_b = OntologyBuilder(BASE_B)
country_b = builder_b.add_class(f"{BASE_B}#Country")
for name in ("Congo", "Democratic_Republic_of_the_Congo", "Sudan", "South_Sudan", "Italy"):
    builder_b.add_individual(f"{BASE_B}#{name}", country_b)

alignment_cells = [
    Correspondence(f"{BASE_A}#Repub._of_the_Congo",
                   f"{BASE_B}#Democratic_Republic_of_the_Congo", confidence=0.76),
    Correspondence(f"{BASE_A}#Repub._of_the_Congo", f"{BASE_B}#Congo", confidence=0.8),
    Correspondence(f"{BASE_A}#Sudan_(former)", f"{BASE_B}#Sudan", confidence=1.0),
    Correspondence(f"{BASE_A}#Italy", f"{BASE_B}#Italy", confidence=1.0),
]
from ontoweave import Alignment

alignment = Alignment(onto1=BASE_A, onto2=BASE_B, cells=alignment_cells)

log = Path(tempfile.mkdtemp()) / "decisions.jsonl"
session = open_session(
    alignment,
    builder_a.build(),
    builder_b.build(),
    policy=QueuePolicy(kinds=frozenset({"Ambiguous"})),
    log_path=log,
)

print(f"queue holds {len(session.queue())} ambiguous cells:")
for cell in session.queue():
    print(f"  {cell.entity1.rsplit('#', 1)[1]:22s} {cell.relation.symbol} "
          f"{cell.entity2.rsplit('#', 1)[1]:36s} [{cell.confidence}]")

congo = next(c for c in session.queue() if c.entity2.endswith("#Congo"))
context = session.context(congo.cell_id)
print(f"\ncontext for the Congo cell shows {len(context['competing'])} competing cell(s)")

# the reviewer keeps the strong cell, rejects its competitor, and turns
# the Sudan equivalence into a subsumption
session.record_decision(Decision(cell_id=congo.cell_id, action=DecisionAction.ACCEPT))
competitor = context["competing"][0]["cell_id"]
session.record_decision(Decision(cell_id=competitor, action=DecisionAction.REJECT))
sudan = next(c for c in alignment.cells if c.entity2.endswith("#Sudan"))
session.record_decision(
    Decision(
        cell_id=sudan.cell_id,
        action=DecisionAction.ALTER_RELATION,
        new_relation=RelationType.SUBSUMES,
    )
)

print(f"\nafter three decisions the queue holds {len(session.queue())} cells")
final = session.finalize(UnreviewedPolicy.KEEP)
print("validated alignment:")
for cell in final.cells:
    print(f"  {cell.entity1.rsplit('#', 1)[1]:22s} {cell.relation.symbol} "
          f"{cell.entity2.rsplit('#', 1)[1]:36s} [{cell.confidence}]")

print(f"\ndecision log ({log}):")
for line in log.read_text("utf-8").splitlines():
    print(f"  {line}")
print("\nreplaying this log over the same alignment reproduces the result exactly.")
