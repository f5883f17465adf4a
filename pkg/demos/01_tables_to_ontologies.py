"""From a plain CSV table to an ontology.

Each table column plays one of three roles: the id column becomes a
class, association columns become object properties, attribute columns
become datatype properties.  Key values turn into individuals and
attribute cells into typed literals.
"""

from pathlib import Path

from ontoweave import CsvConfig, EntityKind, convert, parse_csv, serialize_turtle

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

text = (FIXTURES / "countries_a.csv").read_text("utf-8")
table = parse_csv(text, CsvConfig(id_column="Country", association_columns=["Region"]))

print(f"table: {len(table.rows)} rows, {len(table.columns)} columns")
for column in table.columns:
    print(f"  {column.header:12s} -> {column.role.value}")

onto = convert(table, "http://example.org/countries-a")

print("\nconverted ontology:")
for kind in EntityKind:
    print(f"  {kind.value:17s} {len(onto.entities_of_kind(kind))}")
print(f"  triples           {len(onto.triples)}")

# cell values keep their punctuation in the minted names, and the raw
# string is preserved as a label
sudan = next(e for e in onto.entities if str(e).endswith("Sudan_(former)"))
print(f"\nminted IRI: {sudan}")
print(f"labels:     {onto.labels[sudan]}")

print("\nfirst lines of the Turtle serialization:")
for line in serialize_turtle(onto).splitlines()[:12]:
    print(f"  {line}")
