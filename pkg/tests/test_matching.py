from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoweave.matching import (
    CombinationStrategy,
    Matcher,
    MatcherConfig,
    combine,
    edit_similarity,
    exact_name,
    match,
    normalize,
    token_jaccard,
)
from ontoweave.ontology import EntityKind, OntologyBuilder

BASE_A = "http://x.org/a"
BASE_B = "http://x.org/b"


# --- normalization ----------------------------------------------------------------


@pytest.mark.parametrize(
    "name,tokens",
    [
        ("South_Sudan", ["south", "sudan"]),
        ("Hong_Kong_SAR,_China", ["hong", "kong", "sar", "china"]),
        ("NorthernAfrica", ["northern", "africa"]),
        ("Northern_Africa", ["northern", "africa"]),
        ("Sudan_(former)", ["sudan", "former"]),
        ("Repub._of_the_Congo", ["repub", "of", "the", "congo"]),
        ("cshapes/1474", ["cshapes", "1474"]),
        ("Latin_Amer._and_Carib", ["latin", "amer", "and", "carib"]),
        ("", []),
    ],
)
def test_normalize(name, tokens):
    assert normalize(name) == tokens


def test_normalize_stopword_removal():
    assert normalize("Repub._of_the_Congo", strip_stopwords=True) == ["repub", "congo"]
    assert normalize("of_the", strip_stopwords=True) == []


# --- edit similarity vs an independent DP oracle ------------------------------------


def oracle_edit_distance(a: str, b: str) -> int:
    """Memoized recursive Levenshtein, structurally unlike the two-row DP."""

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1, go(i - 1, j - 1) + cost)

    return go(len(a), len(b))


def oracle_edit_similarity(a: str, b: str) -> float:
    norm_a = " ".join(normalize(a))
    norm_b = " ".join(normalize(b))
    if not norm_a and not norm_b:
        return 1.0
    return 1.0 - oracle_edit_distance(norm_a, norm_b) / max(len(norm_a), len(norm_b))


def test_edit_similarity_identity_and_empty():
    assert edit_similarity("Sudan", "Sudan") == 1.0
    assert edit_similarity("x", "") == 0.0
    assert edit_similarity("", "") == 1.0


def test_edit_similarity_sudan_pair_matches_oracle():
    expected = oracle_edit_similarity("Sudan", "South_Sudan")
    assert edit_similarity("Sudan", "South_Sudan") == pytest.approx(expected)
    # frozen from the oracle: lev("sudan", "south sudan") = 6 over length 11
    assert expected == pytest.approx(1 - 6 / 11)


_WORDS = st.text(alphabet="abcdeXY_- .", min_size=0, max_size=12)


@settings(max_examples=120, deadline=None)
@given(_WORDS, _WORDS)
def test_edit_similarity_matches_oracle(a, b):
    assert edit_similarity(a, b) == pytest.approx(oracle_edit_similarity(a, b))


@settings(max_examples=80, deadline=None)
@given(_WORDS, _WORDS)
def test_base_similarities_symmetric(a, b):
    assert edit_similarity(a, b) == pytest.approx(edit_similarity(b, a))
    assert token_jaccard(a, b) == pytest.approx(token_jaccard(b, a))
    assert exact_name(a, b) == exact_name(b, a)


@settings(max_examples=60, deadline=None)
@given(_WORDS)
def test_similarity_identity_law(a):
    assert edit_similarity(a, a) == 1.0
    assert token_jaccard(a, a) == 1.0


# --- token jaccard, hand-enumerated -------------------------------------------------


def oracle_jaccard(a, b, strip=False) -> Fraction:
    sa, sb = set(normalize(a, strip)), set(normalize(b, strip))
    if not sa and not sb:
        return Fraction(1)
    return Fraction(len(sa & sb), len(sa | sb))


def test_token_jaccard_trivials():
    assert token_jaccard("Sudan", "Sudan") == 1.0
    assert token_jaccard("abc", "xyz") == 0.0


def test_token_jaccard_macedonia():
    a, b = "Macedonia", "The_Former_Yugoslav_Republic_of_Macedonia"
    # hand enumeration: {macedonia} vs {the, former, yugoslav, republic, of,
    # macedonia} -> 1/6; stopwords drop "the" and "of" -> 1/4
    assert oracle_jaccard(a, b) == Fraction(1, 6)
    assert oracle_jaccard(a, b, strip=True) == Fraction(1, 4)
    assert token_jaccard(a, b) == pytest.approx(1 / 6)
    assert token_jaccard(a, b, strip_stopwords=True) == pytest.approx(1 / 4)


def test_congo_ordering_under_token_jaccard():
    # with stopwords stripped the correct country scores strictly higher,
    # mirroring the published confidence ordering (0.8 vs 0.76)
    good = token_jaccard("Repub._of_the_Congo", "Congo", strip_stopwords=True)
    bad = token_jaccard(
        "Repub._of_the_Congo", "Democratic_Republic_of_the_Congo", strip_stopwords=True
    )
    assert good == pytest.approx(float(oracle_jaccard("Repub._of_the_Congo", "Congo", True)))
    assert bad == pytest.approx(
        float(oracle_jaccard("Repub._of_the_Congo", "Democratic_Republic_of_the_Congo", True))
    )
    assert good > bad


# --- combination -----------------------------------------------------------------


def _scores(*values):
    return list(zip((Matcher.EXACT_NAME, Matcher.EDIT_SIMILARITY, Matcher.TOKEN_JACCARD), values))


def test_combine_equal_scores_fixed_point():
    for strategy in CombinationStrategy:
        cfg = MatcherConfig(
            strategy=strategy,
            weights=(
                {m: Fraction(1, 3) for m in MatcherConfig().matchers}
                if strategy is CombinationStrategy.WEIGHTED_SUM
                else {}
            ),
        )
        assert combine(_scores(0.7, 0.7, 0.7), cfg) == pytest.approx(0.7)


def test_combine_average():
    cfg = MatcherConfig(
        matchers=(Matcher.EXACT_NAME, Matcher.TOKEN_JACCARD),
        strategy=CombinationStrategy.AVERAGE,
    )
    scores = [(Matcher.EXACT_NAME, 0.2), (Matcher.TOKEN_JACCARD, 0.8)]
    assert combine(scores, cfg) == pytest.approx(0.5)


def test_combine_weighted_sum_linearity():
    cfg = MatcherConfig(
        matchers=(Matcher.EXACT_NAME, Matcher.TOKEN_JACCARD),
        strategy=CombinationStrategy.WEIGHTED_SUM,
        weights={Matcher.EXACT_NAME: 0.75, Matcher.TOKEN_JACCARD: 0.25},
    )
    scores = [(Matcher.EXACT_NAME, 1.0), (Matcher.TOKEN_JACCARD, 0.0)]
    assert combine(scores, cfg) == pytest.approx(0.75)


def test_combine_mismatched_scores_rejected():
    cfg = MatcherConfig()
    with pytest.raises(ValueError):
        combine([(Matcher.EXACT_NAME, 1.0)], cfg)


def test_weighted_sum_requires_normalized_weights():
    with pytest.raises(ValueError):
        MatcherConfig(
            strategy=CombinationStrategy.WEIGHTED_SUM,
            weights={m: 0.5 for m in MatcherConfig().matchers},
        )


_UNIT = st.integers(0, 1000).map(lambda n: n / 1000)


@settings(max_examples=100, deadline=None)
@given(st.tuples(_UNIT, _UNIT, _UNIT))
def test_min_average_max_ordering(values):
    def run(strategy):
        return combine(_scores(*values), MatcherConfig(strategy=strategy))

    low, mid, high = (
        run(CombinationStrategy.MIN),
        run(CombinationStrategy.AVERAGE),
        run(CombinationStrategy.MAX),
    )
    assert low <= mid + 1e-12
    assert mid <= high + 1e-12
    assert 0.0 <= low and high <= 1.0


# --- matching --------------------------------------------------------------------


def _small_pair():
    a = OntologyBuilder(BASE_A)
    country = a.add_class(f"{BASE_A}#Country")
    a.add_datatype_property(f"{BASE_A}#Population")
    a.add_individual(f"{BASE_A}#Sudan", country)
    a.add_individual(f"{BASE_A}#Italy", country)
    b = OntologyBuilder(BASE_B)
    nation = b.add_class(f"{BASE_B}#Country")
    b.add_datatype_property(f"{BASE_B}#Population")
    b.add_individual(f"{BASE_B}#Sudan", nation)
    b.add_individual(f"{BASE_B}#France", nation)
    return a.build(), b.build()


def test_match_empty_other_side():
    o1, _ = _small_pair()
    empty = OntologyBuilder(BASE_B).build()
    assert match(o1, empty).cells == []


def test_self_match_is_identity_at_confidence_one():
    o1, _ = _small_pair()
    cfg = MatcherConfig(matchers=(Matcher.EXACT_NAME,), candidate_floor=0.5)
    alignment = match(o1, o1, cfg)
    assert {(c.entity1, c.entity2) for c in alignment.cells} == {
        (str(e), str(e)) for e in o1.entities
    }
    assert all(c.confidence == 1.0 for c in alignment.cells)


def test_match_kind_isolation():
    o1, o2 = _small_pair()
    alignment = match(o1, o2, MatcherConfig(candidate_floor=0.0))
    for cell in alignment.cells:
        kind1 = o1.entities[cell.entity1]
        kind2 = o2.entities[cell.entity2]
        assert kind1 is kind2
    # the class named Country never pairs with the property or individuals
    class_cells = [
        c for c in alignment.cells if o1.entities[c.entity1] is EntityKind.ONTOLOGY_CLASS
    ]
    assert {c.entity2 for c in class_cells} == {f"{BASE_B}#Country"}


def test_match_confidence_floor_respected():
    o1, o2 = _small_pair()
    floor = 0.4
    alignment = match(o1, o2, MatcherConfig(candidate_floor=floor))
    assert all(floor <= c.confidence <= 1.0 for c in alignment.cells)


def test_match_uses_labels_max():
    a = OntologyBuilder(BASE_A)
    cls_a = a.add_class(f"{BASE_A}#C1")
    a.add_label(cls_a, "Country")
    b = OntologyBuilder(BASE_B)
    b.add_class(f"{BASE_B}#Country")
    alignment = match(a.build(), b.build(), MatcherConfig(candidate_floor=0.5))
    assert len(alignment.cells) == 1
    assert alignment.cells[0].confidence == 1.0


def test_ignore_numeric_ids_flag():
    a = OntologyBuilder(BASE_A)
    cls_a = a.add_class(f"{BASE_A}#Row")
    a.add_individual(f"{BASE_A}#cshapes/1474", cls_a)
    b = OntologyBuilder(BASE_B)
    cls_b = b.add_class(f"{BASE_B}#Row")
    b.add_individual(f"{BASE_B}#cshapes/1474", cls_b)
    with_ids = match(a.build(), b.build(), MatcherConfig(candidate_floor=0.9))
    without = match(
        a.build(), b.build(), MatcherConfig(candidate_floor=0.9, ignore_numeric_ids=True)
    )
    assert len(with_ids.cells) == 2
    assert len(without.cells) == 1  # only the Row class pair survives


def test_match_output_is_sorted_and_deterministic():
    o1, o2 = _small_pair()
    first = match(o1, o2, MatcherConfig(candidate_floor=0.1))
    second = match(o1, o2, MatcherConfig(candidate_floor=0.1))
    assert [c.identity for c in first.cells] == sorted(c.identity for c in first.cells)
    assert [c.identity for c in first.cells] == [c.identity for c in second.cells]


def test_config_json_round_trip():
    cfg = MatcherConfig(
        matchers=(Matcher.EXACT_NAME, Matcher.TOKEN_JACCARD),
        strategy=CombinationStrategy.WEIGHTED_SUM,
        weights={Matcher.EXACT_NAME: 0.6, Matcher.TOKEN_JACCARD: 0.4},
        candidate_floor=0.3,
        strip_stopwords=True,
    )
    again = MatcherConfig.from_json(cfg.to_json())
    assert again == cfg
