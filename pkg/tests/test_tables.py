import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoweave.ontology import EntityKind, Iri, LiteralValue, RDF_TYPE, parse_turtle, serialize_turtle
from ontoweave.tables import (
    Column,
    ColumnRole,
    CsvConfig,
    TableError,
    VirtualTable,
    convert,
    infer_datatype,
    parse_csv,
    sanitize_name,
)

BASE = "http://example.org/countries"


def test_parse_csv_roles_assigned():
    text = "Country,Region,Population\nItaly,Europe,59000000\nFrance,Europe,67000000\n"
    table = parse_csv(text, CsvConfig(id_column="Country", association_columns=["Region"]))
    assert [c.role for c in table.columns] == [
        ColumnRole.ID,
        ColumnRole.ASSOCIATION,
        ColumnRole.ATTRIBUTE,
    ]
    assert len(table.rows) == 2


def test_parse_csv_quoted_cell_survives():
    text = 'Country,Population\n"Virgin_Islands_(U.S.)",106000\n"Korea, South",51000000\n'
    table = parse_csv(text, CsvConfig(id_column="Country"))
    assert table.rows[0][0] == "Virgin_Islands_(U.S.)"
    assert table.rows[1][0] == "Korea, South"


def test_parse_csv_errors():
    cfg = CsvConfig(id_column="Country")
    with pytest.raises(TableError):
        parse_csv("Country,Pop\nItaly\n", cfg)  # ragged
    with pytest.raises(TableError):
        parse_csv("Country,Pop\nItaly,1\nItaly,2\n", cfg)  # duplicate id
    with pytest.raises(TableError):
        parse_csv("Country,Pop\n,1\n", cfg)  # empty id
    with pytest.raises(TableError):
        parse_csv("Country,Pop\nItaly,1\n", CsvConfig(id_column="Nation"))  # unknown
    with pytest.raises(TableError):
        parse_csv("Country,Pop\nItaly,1\n", CsvConfig(id_column=["Country", "Pop"]))


def test_parse_csv_custom_delimiter():
    table = parse_csv("Country;Pop\nItaly;59\n", CsvConfig(id_column="Country", delimiter=";"))
    assert table.rows == [["Italy", "59"]]


def test_227_row_fixture(fixtures_dir):
    text = (fixtures_dir / "countries_227.csv").read_text("utf-8")
    # independent count: raw non-empty lines minus the header
    raw_rows = len([line for line in text.splitlines() if line.strip()]) - 1
    table = parse_csv(text, CsvConfig(id_column="Country", association_columns=["Region"]))
    assert raw_rows == 227
    assert len(table.rows) == 227
    ids = [row[0] for row in table.rows]
    assert len(set(ids)) == 227


def test_convert_zero_rows():
    table = VirtualTable(
        name="t",
        columns=[Column("Country", ColumnRole.ID), Column("Population", ColumnRole.ATTRIBUTE)],
        rows=[],
    )
    onto = convert(table, BASE)
    assert len(onto.entities_of_kind(EntityKind.ONTOLOGY_CLASS)) == 1
    assert len(onto.entities_of_kind(EntityKind.DATATYPE_PROPERTY)) == 1
    assert len(onto.entities_of_kind(EntityKind.INDIVIDUAL)) == 0


def test_convert_one_row_rule_trace():
    table = VirtualTable(
        name="t",
        columns=[
            Column("Country", ColumnRole.ID),
            Column("Region", ColumnRole.ASSOCIATION),
            Column("Population", ColumnRole.ATTRIBUTE),
        ],
        rows=[["Italy", "Europe", "59000000"]],
    )
    onto = convert(table, BASE)
    italy, europe = Iri(f"{BASE}#Italy"), Iri(f"{BASE}#Europe")
    assert onto.entities[italy] is EntityKind.INDIVIDUAL
    assert onto.entities[europe] is EntityKind.INDIVIDUAL
    triples = {(str(t.subject), str(t.predicate), t.object) for t in onto.triples}
    assert (str(italy), RDF_TYPE, Iri(f"{BASE}#Country")) in triples
    assert (str(italy), f"{BASE}#Region", europe) in triples
    assert (str(italy), f"{BASE}#Population", LiteralValue("59000000", "integer")) in triples


def test_convert_empty_cells_emit_nothing():
    table = VirtualTable(
        name="t",
        columns=[
            Column("Country", ColumnRole.ID),
            Column("Region", ColumnRole.ASSOCIATION),
            Column("Population", ColumnRole.ATTRIBUTE),
        ],
        rows=[["Italy", "", ""]],
    )
    onto = convert(table, BASE)
    assertions = [
        t
        for t in onto.triples
        if str(t.predicate) in (f"{BASE}#Region", f"{BASE}#Population")
    ]
    assert assertions == []


def test_convert_keeps_original_names_as_labels():
    table = VirtualTable(
        name="t",
        columns=[Column("Country Name", ColumnRole.ID)],
        rows=[["South Sudan"]],
    )
    onto = convert(table, BASE)
    cls = Iri(f"{BASE}#Country_Name")
    ind = Iri(f"{BASE}#South_Sudan")
    assert onto.labels[cls] == ["Country Name"]
    assert onto.labels[ind] == ["South Sudan"]


def test_convert_deterministic_output():
    table = VirtualTable(
        name="t",
        columns=[Column("Country", ColumnRole.ID), Column("Pop", ColumnRole.ATTRIBUTE)],
        rows=[["Italy", "1"], ["France", "2"]],
    )
    assert serialize_turtle(convert(table, BASE)) == serialize_turtle(convert(table, BASE))


def test_converted_ontology_reparses(fixtures_dir):
    text = (fixtures_dir / "countries_a.csv").read_text("utf-8")
    table = parse_csv(text, CsvConfig(id_column="Country", association_columns=["Region"]))
    onto = convert(table, BASE)
    assert parse_turtle(serialize_turtle(onto)) == onto


def test_sanitize_is_injective_on_fixture_names(fixtures_dir):
    names = set()
    for path in ("countries_a.csv", "countries_b.csv", "countries_227.csv"):
        text = (fixtures_dir / path).read_text("utf-8")
        for line in text.splitlines()[1:]:
            if line.strip():
                names.add(line.split(",")[0].strip('"'))
    sanitized = {sanitize_name(n) for n in names}
    assert len(sanitized) == len(names)


@pytest.mark.parametrize(
    "cell,expected",
    [
        ("4400000", "integer"),
        ("-17", "integer"),
        ("3.14", "decimal"),
        ("+0.5", "decimal"),
        ("true", "boolean"),
        ("false", "boolean"),
        ("True", "string"),
        ("97-1999", "string"),
        ("4.400.000", "string"),
        ("Sudan", "string"),
    ],
)
def test_infer_datatype(cell, expected):
    assert infer_datatype(cell) == expected


_CELLS = st.one_of(
    st.just(""),
    st.integers(0, 10**9).map(str),
    st.text(alphabet="abcdefgh XYZ-.", min_size=1, max_size=10),
)


@st.composite
def random_tables(draw):
    n_attrs = draw(st.integers(0, 3))
    n_assocs = draw(st.integers(0, 2))
    columns = [Column("Key", ColumnRole.ID)]
    columns += [Column(f"Assoc{i}", ColumnRole.ASSOCIATION) for i in range(n_assocs)]
    columns += [Column(f"Attr{i}", ColumnRole.ATTRIBUTE) for i in range(n_attrs)]
    n_rows = draw(st.integers(0, 8))
    rows = []
    for r in range(n_rows):
        row = [f"id_{r}"]
        row += [draw(_CELLS) for _ in range(n_assocs)]
        row += [draw(_CELLS) for _ in range(n_attrs)]
        rows.append(row)
    return VirtualTable(name="gen", columns=columns, rows=rows)


@settings(max_examples=60, deadline=None)
@given(random_tables())
def test_convert_counting_laws(table):
    onto = convert(table, BASE)
    id_class = Iri(f"{BASE}#Key")
    typed_by_id = {
        t.subject
        for t in onto.triples
        if str(t.predicate) == RDF_TYPE and t.object == id_class
    }
    assert len(typed_by_id) == len(table.rows)

    attr_props = {f"{BASE}#{c.header}" for c in table.columns if c.role is ColumnRole.ATTRIBUTE}
    datatype_assertions = [t for t in onto.triples if str(t.predicate) in attr_props]
    attr_indices = table.indices_of(ColumnRole.ATTRIBUTE)
    non_empty_cells = sum(1 for row in table.rows for i in attr_indices if row[i])
    # identical (property, subject, literal) cells collapse under set semantics
    distinct_cells = {
        (row[table.id_index()], i, row[i])
        for row in table.rows
        for i in attr_indices
        if row[i]
    }
    assert len(datatype_assertions) == len(distinct_cells)
    assert len(distinct_cells) == non_empty_cells  # unique ids make cells distinct

    n_object_props = len(onto.entities_of_kind(EntityKind.OBJECT_PROPERTY))
    n_assoc_cols = len(table.indices_of(ColumnRole.ASSOCIATION))
    assert n_object_props == n_assoc_cols
    n_datatype_props = len(onto.entities_of_kind(EntityKind.DATATYPE_PROPERTY))
    assert n_datatype_props == len(table.indices_of(ColumnRole.ATTRIBUTE))
    # one class per id column plus one holder class per association column
    assert len(onto.entities_of_kind(EntityKind.ONTOLOGY_CLASS)) == 1 + n_assoc_cols
    assert len(onto.entities_of_kind(EntityKind.INDIVIDUAL)) >= len(table.rows)
