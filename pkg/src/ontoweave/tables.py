"""CSV relational tables and their conversion to ontologies.

A table is read into a ``VirtualTable`` whose columns carry one of three
roles: the single id column, association columns, and attribute columns.
Conversion mints one class from the id header, an object property per
association column, a datatype property per attribute column, one
individual per key value, and a literal per non-empty attribute cell.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from enum import Enum
from urllib.parse import quote

from .ontology import Iri, LiteralValue, Ontology, OntologyBuilder

__all__ = [
    "ColumnRole",
    "Column",
    "VirtualTable",
    "CsvConfig",
    "TableError",
    "parse_csv",
    "convert",
    "infer_datatype",
    "mint_iri",
    "sanitize_name",
]


class TableError(ValueError):
    pass


class ColumnRole(Enum):
    ID = "Id"
    ASSOCIATION = "Association"
    ATTRIBUTE = "Attribute"


@dataclass(frozen=True)
class Column:
    header: str
    role: ColumnRole


@dataclass
class VirtualTable:
    name: str
    columns: list[Column]
    rows: list[list[str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        id_columns = [c for c in self.columns if c.role is ColumnRole.ID]
        if len(id_columns) != 1:
            raise TableError(f"expected exactly one id column, got {len(id_columns)}")
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise TableError(f"row {i + 1} has {len(row)} cells, expected {width}")
        id_index = self.id_index()
        seen: set[str] = set()
        for i, row in enumerate(self.rows):
            cell = row[id_index]
            if not cell:
                raise TableError(f"empty id cell in row {i + 1}")
            if cell in seen:
                raise TableError(f"duplicate id cell {cell!r}")
            seen.add(cell)

    def id_index(self) -> int:
        return next(i for i, c in enumerate(self.columns) if c.role is ColumnRole.ID)

    def indices_of(self, role: ColumnRole) -> list[int]:
        return [i for i, c in enumerate(self.columns) if c.role is role]


@dataclass
class CsvConfig:
    """Column roles for parse_csv; columns named by header or 0-based index."""

    id_column: str | int
    association_columns: list[str | int] = field(default_factory=list)
    delimiter: str = ","


def _column_index(ref: str | int, headers: list[str]) -> int:
    if isinstance(ref, int):
        if not 0 <= ref < len(headers):
            raise TableError(f"column index {ref} out of range")
        return ref
    try:
        return headers.index(ref)
    except ValueError:
        raise TableError(f"unknown column {ref!r}") from None


def parse_csv(text: str, cfg: CsvConfig, name: str = "table") -> VirtualTable:
    """Parse RFC-4180 CSV text (header row first) into a VirtualTable."""
    if isinstance(cfg.id_column, (list, tuple, set)):
        raise TableError("composed (multi-column) primary keys are not supported")
    reader = csv.reader(io.StringIO(text), delimiter=cfg.delimiter)
    records = [row for row in reader]
    if not records:
        raise TableError("document has no header row")
    headers = records[0]
    id_index = _column_index(cfg.id_column, headers)
    assoc_indices = {_column_index(ref, headers) for ref in cfg.association_columns}
    if id_index in assoc_indices:
        raise TableError("id column cannot also be an association column")
    columns = []
    for i, header in enumerate(headers):
        if i == id_index:
            role = ColumnRole.ID
        elif i in assoc_indices:
            role = ColumnRole.ASSOCIATION
        else:
            role = ColumnRole.ATTRIBUTE
        columns.append(Column(header, role))
    return VirtualTable(name=name, columns=columns, rows=records[1:])


_WHITESPACE_RUN = re.compile(r"\s+")

# RFC 3986 fragment characters stay readable in minted names, so values
# like Sudan_(former), Hong_Kong_SAR,_China, or cshapes/1474 survive.
_IRI_SAFE = "!$&'()*+,;=:@/-._~"


def sanitize_name(raw: str) -> str:
    collapsed = _WHITESPACE_RUN.sub("_", raw.strip())
    return quote(collapsed, safe=_IRI_SAFE)


def mint_iri(base: str, raw: str) -> Iri:
    return Iri(f"{base}#{sanitize_name(raw)}")


def infer_datatype(cell: str) -> str:
    """First match wins: integer, decimal, boolean, then string."""
    body = cell[1:] if cell[:1] in "+-" else cell
    if body.isdigit():
        return "integer"
    if body.count(".") == 1:
        left, right = body.split(".")
        if (left + right).isdigit():
            return "decimal"
    if cell in ("true", "false"):
        return "boolean"
    return "string"


def convert(vt: VirtualTable, base: str) -> Ontology:
    """Apply the five conversion rules to a VirtualTable."""
    builder = OntologyBuilder(base_iri=base)
    id_col = vt.columns[vt.id_index()]
    class_iri = builder.add_class(mint_iri(base, id_col.header))
    builder.add_label(class_iri, id_col.header)

    assoc_props: dict[int, tuple[Iri, Iri]] = {}
    for i in vt.indices_of(ColumnRole.ASSOCIATION):
        header = vt.columns[i].header
        prop = builder.add_object_property(mint_iri(base, header))
        builder.add_label(prop, header)
        # association targets live in a per-column holder class
        holder = builder.add_class(Iri(f"{base}#{sanitize_name(header)}Value"))
        builder.add_label(holder, f"{header}Value")
        assoc_props[i] = (prop, holder)

    attr_props: dict[int, Iri] = {}
    for i in vt.indices_of(ColumnRole.ATTRIBUTE):
        header = vt.columns[i].header
        prop = builder.add_datatype_property(mint_iri(base, header))
        builder.add_label(prop, header)
        attr_props[i] = prop

    id_index = vt.id_index()
    for row in vt.rows:
        individual = builder.add_individual(mint_iri(base, row[id_index]), class_iri)
        builder.add_label(individual, row[id_index])
        for i, (prop, holder) in assoc_props.items():
            cell = row[i]
            if not cell:
                continue
            target = builder.add_individual(mint_iri(base, cell), holder)
            builder.add_label(target, cell)
            builder.assert_object(individual, prop, target)
        for i, prop in attr_props.items():
            cell = row[i]
            if not cell:
                continue
            value = LiteralValue(cell, infer_datatype(cell))
            builder.assert_datatype(individual, prop, value)
    return builder.build()
