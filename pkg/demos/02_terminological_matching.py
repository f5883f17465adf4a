"""Scoring entity names and matching two converted ontologies.

Three matchers work on normalized tokens: exact sequence equality,
Levenshtein similarity of the joined tokens, and Jaccard of the token
sets.  Their combination (average by default) becomes the confidence
of an equivalence correspondence.
"""

from pathlib import Path

from ontoweave import (
    CsvConfig,
    MatcherConfig,
    convert,
    edit_similarity,
    match,
    normalize,
    parse_csv,
    token_jaccard,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

print("tokenization handles separators and camel case:")
for name in ("South_Sudan", "NorthernAfrica", "Hong_Kong_SAR,_China", "Repub._of_the_Congo"):
    print(f"  {name:22s} -> {normalize(name)}")

print("\npairwise similarities (stopwords stripped):")
pairs = [
    ("Repub._of_the_Congo", "Congo"),
    ("Repub._of_the_Congo", "Democratic_Republic_of_the_Congo"),
    ("Sudan_(former)", "Sudan"),
    ("Macedonia", "The_Former_Yugoslav_Republic_of_Macedonia"),
]
for a, b in pairs:
    es = edit_similarity(a, b, strip_stopwords=True)
    tj = token_jaccard(a, b, strip_stopwords=True)
    print(f"  {a:22s} vs {b:34s} edit={es:.3f} jaccard={tj:.3f}")

# note the ordering: the correct Congo country scores higher than the
# wrong one, which is what lets disambiguation pick the right cell

cfg = MatcherConfig(candidate_floor=0.2, strip_stopwords=True)
table_a = parse_csv((FIXTURES / "countries_a.csv").read_text("utf-8"),
                    CsvConfig("Country", ["Region"]))
table_b = parse_csv((FIXTURES / "countries_b.csv").read_text("utf-8"),
                    CsvConfig("country", ["Region"]))
o1 = convert(table_a, "http://example.org/countries-a")
o2 = convert(table_b, "http://example.org/countries-b")

alignment = match(o1, o2, cfg)
print(f"\nalignment: {len(alignment.cells)} cells, "
      f"{len(alignment.ambiguous_cells())} ambiguous")

print("\nlowest-confidence correspondences (uncertainty candidates):")
for cell in sorted(alignment.cells, key=lambda c: c.confidence)[:8]:
    e1 = cell.entity1.rsplit("#", 1)[1]
    e2 = cell.entity2.rsplit("#", 1)[1]
    print(f"  {e1:24s} {cell.relation.symbol} {e2:34s} [{cell.confidence:.3f}]")
