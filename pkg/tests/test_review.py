import json

import pytest
from fastapi.testclient import TestClient

from conftest import mk_alignment
from ontoweave.alignment import (
    Correspondence,
    RelationType,
    parse_alignment_xml,
    serialize_alignment_xml,
)
from ontoweave.ontology import OntologyBuilder, RDFS_SUBCLASSOF, Iri, Triple
from ontoweave.review import (
    Decision,
    DecisionAction,
    QueuePolicy,
    ReviewError,
    UnreviewedPolicy,
    open_session,
)
from ontoweave.service import create_app

BASE_A = "http://x.org/a"
BASE_B = "http://x.org/b"

A_NAMES = ["Repub._of_the_Congo", "Sudan_(former)", "Italy", "France", "Kosovo"]
B_NAMES = [
    "Congo",
    "Democratic_Republic_of_the_Congo",
    "Sudan",
    "South_Sudan",
    "Italy",
    "France",
]


def _ontologies():
    a = OntologyBuilder(BASE_A)
    country_a = a.add_class(f"{BASE_A}#Country")
    region_a = a.add_class(f"{BASE_A}#Region")
    a.add_triple(Triple(Iri(f"{BASE_A}#Region"), Iri(RDFS_SUBCLASSOF), country_a))
    for name in A_NAMES:
        a.add_individual(f"{BASE_A}#{name}", country_a)
        a.add_label(f"{BASE_A}#{name}", name.replace("_", " "))
    b = OntologyBuilder(BASE_B)
    country_b = b.add_class(f"{BASE_B}#Country")
    for name in B_NAMES:
        b.add_individual(f"{BASE_B}#{name}", country_b)
    return a.build(), b.build()


def _alignment():
    return mk_alignment(
        [
            (f"{BASE_A}#Repub._of_the_Congo", f"{BASE_B}#Democratic_Republic_of_the_Congo", 0.76),
            (f"{BASE_A}#Repub._of_the_Congo", f"{BASE_B}#Congo", 0.8),
            (f"{BASE_A}#Sudan_(former)", f"{BASE_B}#Sudan", 1.0),
            (f"{BASE_A}#Italy", f"{BASE_B}#Italy", 1.0),
            (f"{BASE_A}#France", f"{BASE_B}#France", 0.35),
        ],
        onto1=BASE_A,
        onto2=BASE_B,
    )


def _cell_id(alignment, e2_suffix):
    return next(c.cell_id for c in alignment.cells if c.entity2.endswith(e2_suffix))


def test_queue_empty_for_high_confidence_one_to_one():
    o1, o2 = _ontologies()
    alignment = mk_alignment(
        [(f"{BASE_A}#Italy", f"{BASE_B}#Italy", 1.0)], onto1=BASE_A, onto2=BASE_B
    )
    session = open_session(alignment, o1, o2, QueuePolicy(threshold=0.0))
    assert session.queue() == []


def test_queue_ambiguous_only_policy():
    o1, o2 = _ontologies()
    session = open_session(
        _alignment(), o1, o2, QueuePolicy(kinds=frozenset({"Ambiguous"}))
    )
    assert len(session.queue()) == 2  # the two Congo cells


def test_queue_low_confidence_policy():
    o1, o2 = _ontologies()
    session = open_session(
        _alignment(), o1, o2, QueuePolicy(kinds=frozenset({"LowConfidence"}), threshold=0.5)
    )
    assert {c.entity1.split("#")[1] for c in session.queue()} == {"France"}


def test_unresolvable_entity_rejected():
    o1, o2 = _ontologies()
    stray = mk_alignment([(f"{BASE_A}#Nowhere", f"{BASE_B}#Italy", 1.0)])
    with pytest.raises(Exception):
        open_session(stray, o1, o2)


def test_decision_validation():
    with pytest.raises(ReviewError):
        Decision(cell_id="x", action=DecisionAction.ALTER_RELATION)
    with pytest.raises(ReviewError):
        Decision(cell_id="x", action=DecisionAction.ALTER_CONFIDENCE, new_confidence=1.2)
    with pytest.raises(ReviewError):
        Decision(cell_id="x", action=DecisionAction.ADD_CELL)
    with pytest.raises(ReviewError):
        Decision(cell_id="x", action=DecisionAction.ACCEPT, new_confidence=0.5)


def test_accept_removes_from_queue():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2, QueuePolicy(kinds=frozenset({"Ambiguous"})))
    target = session.queue()[0]
    session.record_decision(Decision(cell_id=target.cell_id, action=DecisionAction.ACCEPT))
    assert target.cell_id not in {c.cell_id for c in session.queue()}
    assert len(session.queue()) == 1


def test_unknown_cell_rejected():
    o1, o2 = _ontologies()
    session = open_session(_alignment(), o1, o2)
    with pytest.raises(ReviewError):
        session.record_decision(Decision(cell_id="deadbeef", action=DecisionAction.ACCEPT))


def test_alter_relation_reproduces_sudan_correction():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    sudan_id = _cell_id(alignment, "#Sudan")
    session.record_decision(
        Decision(
            cell_id=sudan_id,
            action=DecisionAction.ALTER_RELATION,
            new_relation=RelationType.SUBSUMES,
        )
    )
    final = session.finalize(UnreviewedPolicy.KEEP)
    sudan_cells = [c for c in final.cells if c.entity2.endswith("#Sudan")]
    assert [c.relation for c in sudan_cells] == [RelationType.SUBSUMES]


def test_supersession_keeps_history():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    italy = _cell_id(alignment, "#Italy")
    session.record_decision(Decision(cell_id=italy, action=DecisionAction.REJECT))
    session.record_decision(Decision(cell_id=italy, action=DecisionAction.ACCEPT))
    assert len(session.decisions) == 2
    assert session.effective_decisions()[italy].action is DecisionAction.ACCEPT
    final = session.finalize(UnreviewedPolicy.KEEP)
    assert any(c.entity1.endswith("#Italy") for c in final.cells)


def test_finalize_keep_with_no_decisions_is_identity():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    final = session.finalize(UnreviewedPolicy.KEEP)
    assert final.identities() == alignment.identities()
    assert serialize_alignment_xml(final) == serialize_alignment_xml(alignment)


def test_finalize_drop_unreviewed_and_reject_all():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    assert session.finalize(UnreviewedPolicy.DROP).cells == []
    for cell in alignment.cells:
        session.record_decision(Decision(cell_id=cell.cell_id, action=DecisionAction.REJECT))
    assert session.finalize(UnreviewedPolicy.KEEP).cells == []


def test_finalize_mixed_matches_set_algebra():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    reject_id = _cell_id(alignment, "#Democratic_Republic_of_the_Congo")
    alter_id = _cell_id(alignment, "#Sudan")
    added = Correspondence(
        f"{BASE_A}#Kosovo", f"{BASE_B}#South_Sudan", RelationType.EQUIVALENCE, 0.5
    )
    session.record_decision(Decision(cell_id=reject_id, action=DecisionAction.REJECT))
    session.record_decision(
        Decision(
            cell_id=alter_id,
            action=DecisionAction.ALTER_RELATION,
            new_relation=RelationType.SUBSUMES,
        )
    )
    session.record_decision(
        Decision(cell_id=added.cell_id, action=DecisionAction.ADD_CELL, payload=added)
    )
    final = session.finalize(UnreviewedPolicy.KEEP)

    # independent set-algebra expectation
    expected = {c.identity for c in alignment.cells}
    expected.remove(next(c.identity for c in alignment.cells if c.cell_id == reject_id))
    sudan = next(c for c in alignment.cells if c.cell_id == alter_id)
    expected.remove(sudan.identity)
    expected.add((sudan.entity1, sudan.entity2, RelationType.SUBSUMES.value))
    expected.add(added.identity)
    assert final.identities() == expected
    assert len(final.cells) == len(alignment.cells) - 1 + 1


def test_added_cell_duplicate_rejected():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    duplicate = alignment.cells[0]
    with pytest.raises(ReviewError):
        session.record_decision(
            Decision(cell_id=duplicate.cell_id, action=DecisionAction.ADD_CELL, payload=duplicate)
        )


def test_context_competing_and_neighbors():
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2)
    italy = _cell_id(alignment, "#Italy")
    assert session.context(italy)["competing"] == []
    congo = _cell_id(alignment, "#Congo")
    ctx = session.context(congo)
    assert {c["confidence"] for c in ctx["competing"]} == {0.76}
    assert ctx["cell"]["confidence"] == 0.8
    assert ctx["entity1"]["labels"] == ["Repub. of the Congo"]
    # neighbors flow through from the ontology hierarchy
    class_ctx = session.context(congo)["entity1"]
    assert "neighbors" in class_ctx


def test_log_replay_reproduces_output(tmp_path):
    o1, o2 = _ontologies()
    alignment = _alignment()
    log = tmp_path / "decisions.jsonl"
    session = open_session(alignment, o1, o2, log_path=log)
    session.record_decision(
        Decision(cell_id=_cell_id(alignment, "#Congo"), action=DecisionAction.ACCEPT)
    )
    session.record_decision(
        Decision(
            cell_id=_cell_id(alignment, "#Democratic_Republic_of_the_Congo"),
            action=DecisionAction.REJECT,
        )
    )
    expected_xml = session.finalize_xml(UnreviewedPolicy.KEEP)
    assert log.exists() and len(log.read_text().splitlines()) == 2

    resumed = open_session(alignment, o1, o2, log_path=log)
    assert resumed.finalize_xml(UnreviewedPolicy.KEEP) == expected_xml
    assert len(resumed.queue()) < len(open_session(alignment, o1, o2).queue())


def test_corrupt_log_rejected(tmp_path):
    o1, o2 = _ontologies()
    log = tmp_path / "bad.jsonl"
    log.write_text('{"cell_id": "x", "action": "Accept"}\nnot json\n')
    with pytest.raises(ReviewError):
        open_session(_alignment(), o1, o2, log_path=log)


# --- HTTP API -----------------------------------------------------------------------


@pytest.fixture()
def client(tmp_path):
    o1, o2 = _ontologies()
    alignment = _alignment()
    session = open_session(alignment, o1, o2, log_path=tmp_path / "log.jsonl")
    app = create_app(session, output_path=tmp_path / "validated.rdf")
    return TestClient(app), alignment, tmp_path


def test_api_session_and_queue(client):
    http, alignment, _ = client
    stats = http.get("/api/session").json()
    assert stats["alignment_size"] == 5
    listing = http.get("/api/queue", params={"offset": 0, "limit": 1}).json()
    assert listing["total"] >= 2
    assert len(listing["items"]) == 1
    item = listing["items"][0]
    assert {"cell_id", "entity1", "relation", "confidence", "competing"} <= set(item)


def test_api_context_404(client):
    http, _, _ = client
    assert http.get("/api/context/ffffffffffffffff").status_code == 404


def test_api_decision_validation_error(client):
    http, _, _ = client
    bad = http.post("/api/decision", json={"cell_id": "zzz", "action": "Accept"})
    assert bad.status_code == 400


def test_api_decision_and_finalize_round_trip(client):
    http, alignment, tmp_path = client
    congo = _cell_id(alignment, "#Congo")
    drc = _cell_id(alignment, "#Democratic_Republic_of_the_Congo")
    ok = http.post("/api/decision", json={"cell_id": congo, "action": "Accept"})
    assert ok.status_code == 200 and ok.json()["ok"]
    http.post("/api/decision", json={"cell_id": drc, "action": "Reject"})
    response = http.post("/api/finalize", json={"unreviewed_policy": "Keep"})
    assert response.status_code == 200

    # independent expectation from plain set algebra over the input cells
    survivors = [c for c in alignment.cells if c.cell_id != drc]
    expected = serialize_alignment_xml(alignment.with_cells(survivors))
    assert response.text == expected
    assert (tmp_path / "validated.rdf").read_text("utf-8") == expected


def test_api_finalize_no_decisions_is_identity(client):
    http, alignment, _ = client
    response = http.post("/api/finalize", json={"unreviewed_policy": "Keep"})
    assert response.text == serialize_alignment_xml(alignment)


def test_api_metrics_against_reference(client, tmp_path):
    http, alignment, _ = client
    reference = serialize_alignment_xml(
        alignment.with_cells([c for c in alignment.cells if c.confidence >= 0.8])
    )
    ref_path = tmp_path / "reference.rdf"
    ref_path.write_text(reference, encoding="utf-8")
    payload = http.get("/api/metrics", params={"reference": str(ref_path)}).json()
    assert payload["reference_size"] == 3
    assert payload["alignment_size"] == 5
    assert payload["recall"] == 1.0


def test_api_metrics_requires_reference(client):
    http, _, _ = client
    assert http.get("/api/metrics").status_code == 400


def test_api_root_serves_fallback_page(client):
    http, _, _ = client
    page = http.get("/")
    assert page.status_code == 200
    assert "review" in page.text.lower()


def test_api_decision_idempotent_duplicate(client):
    http, alignment, _ = client
    italy = _cell_id(alignment, "#Italy")
    body = {"cell_id": italy, "action": "Accept", "timestamp": "2024-01-01T00:00:00+00:00"}
    first = http.post("/api/decision", json=body).json()
    second = http.post("/api/decision", json=body).json()
    assert first["queue_size"] == second["queue_size"]
    final_a = http.post("/api/finalize", json={"unreviewed_policy": "Keep"}).text
    assert "Italy" in final_a
