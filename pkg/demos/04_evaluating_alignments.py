"""Scoring alignments against a reference.

The report covers the confusion counts, precision/recall with their
noise/silence complements, the weighted F-measure, the repair-effort
metric (overall), the ambiguity degree, and the size difference delta.
The four variants mirror the untrimmed / disambiguated / trimmed /
trimmed+disambiguated protocol.
"""

from pathlib import Path

from ontoweave import (
    CsvConfig,
    MatcherConfig,
    convert,
    disambiguate_two_pass,
    evaluate,
    match,
    parse_alignment_xml,
    parse_csv,
    threshold_sweep,
    trim,
)
from ontoweave.evaluation import render_report_table

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

table_a = parse_csv((FIXTURES / "countries_a.csv").read_text("utf-8"),
                    CsvConfig("Country", ["Region"]))
table_b = parse_csv((FIXTURES / "countries_b.csv").read_text("utf-8"),
                    CsvConfig("country", ["Region"]))
o1 = convert(table_a, "http://example.org/countries-a")
o2 = convert(table_b, "http://example.org/countries-b")
alignment = match(o1, o2, MatcherConfig(candidate_floor=0.2, strip_stopwords=True))
reference = parse_alignment_xml((FIXTURES / "reference.rdf").read_text("utf-8"))

trimmed = trim(alignment, 0.5)
variants = [
    ("untrimmed", alignment),
    ("disambiguated", disambiguate_two_pass(alignment)),
    ("trimmed", trimmed),
    ("trimmed+disambiguated", disambiguate_two_pass(trimmed)),
]
rows = [(label, evaluate(variant, reference)) for label, variant in variants]
print(render_report_table(rows))

report = rows[0][1]
sign = "+" if report.delta > 0 else ""
print(f"delta of the raw alignment: {sign}{report.delta} ({report.delta_classification})")
print(f"noise={report.noise:.3f} silence={report.silence:.3f}")

# trimming threshold tuning: scan a grid and keep the F1-optimal cut
sweep = threshold_sweep(alignment, reference, [i / 20 for i in range(21)])
print(f"\nbest threshold {sweep.best_alpha} gives F1 {sweep.best_f1:.3f}")
print("curve (alpha -> F1):")
for alpha, f1 in sweep.curve[::4]:
    print(f"  {alpha:.2f} -> {f1:.3f}")
