from pathlib import Path

import pytest

from ontoweave.alignment import Alignment, Correspondence, RelationType

FIXTURES = Path(__file__).parent.parent / "fixtures"

BASE_A = "http://example.org/countries-a"
BASE_B = "http://example.org/countries-b"


def mk_cell(e1: str, e2: str, conf: float = 1.0, rel: RelationType = RelationType.EQUIVALENCE):
    return Correspondence(entity1=e1, entity2=e2, relation=rel, confidence=conf)


def mk_alignment(pairs, onto1="http://x.org/a", onto2="http://x.org/b") -> Alignment:
    """pairs: iterable of (e1, e2, confidence[, relation]) tuples."""
    cells = []
    for pair in pairs:
        e1, e2, conf = pair[0], pair[1], pair[2]
        rel = pair[3] if len(pair) > 3 else RelationType.EQUIVALENCE
        cells.append(Correspondence(entity1=e1, entity2=e2, relation=rel, confidence=conf))
    return Alignment(onto1=onto1, onto2=onto2, cells=cells)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
