"""Ontology domain model with a small Turtle parser/serializer.

An ontology is held as four typed entity sets (classes, object properties,
datatype properties, individuals) plus a set of triples.  Only the Turtle
features the toolkit itself produces are supported: ``@prefix`` lines,
plain ``S P O .`` statements, the ``a`` keyword, IRIs in ``<...>`` or
prefixed form, and quoted literals with an optional ``^^xsd:...`` tag.
Blank nodes, collections and multi-object statements are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "RDF_TYPE",
    "RDFS_LABEL",
    "RDFS_SUBCLASSOF",
    "RDFS_SUBPROPERTYOF",
    "OWL_CLASS",
    "OWL_OBJECT_PROPERTY",
    "OWL_DATATYPE_PROPERTY",
    "OWL_EQUIVALENT_CLASS",
    "OWL_EQUIVALENT_PROPERTY",
    "OWL_SAME_AS",
    "EntityKind",
    "Iri",
    "LiteralValue",
    "Triple",
    "Ontology",
    "OntologyBuilder",
    "OntologyError",
    "TurtleSyntaxError",
    "parse_turtle",
    "serialize_turtle",
]

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDFS_LABEL = RDFS_NS + "label"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS_NS + "subPropertyOf"
OWL_CLASS = OWL_NS + "Class"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"
OWL_EQUIVALENT_CLASS = OWL_NS + "equivalentClass"
OWL_EQUIVALENT_PROPERTY = OWL_NS + "equivalentProperty"
OWL_SAME_AS = OWL_NS + "sameAs"

_DECLARATION_KINDS = {
    OWL_CLASS: "OntologyClass",
    OWL_OBJECT_PROPERTY: "ObjectProperty",
    OWL_DATATYPE_PROPERTY: "DatatypeProperty",
}

_RESERVED_PREDICATES = {
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    OWL_EQUIVALENT_CLASS,
    OWL_EQUIVALENT_PROPERTY,
    OWL_SAME_AS,
}

LITERAL_DATATYPES = ("integer", "decimal", "boolean", "string")

DEFAULT_BASE_IRI = "http://example.org/ontology"


class OntologyError(ValueError):
    """Invariant violation in an ontology value."""


class TurtleSyntaxError(OntologyError):
    """Unparseable document; carries 1-based line/column of the offence."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Iri(str):
    """Absolute IRI, compared codepoint-exact (no folding or decoding)."""

    def __new__(cls, value: str) -> "Iri":
        if not value:
            raise OntologyError("IRI must be non-empty")
        if "://" not in value and ":" not in value:
            raise OntologyError(f"not an absolute IRI: {value!r}")
        return super().__new__(cls, value)

    @property
    def local_name(self) -> str:
        """Fragment after '#', or the last path segment."""
        if "#" in self:
            return self.rsplit("#", 1)[1]
        return self.rstrip("/").rsplit("/", 1)[-1]


class EntityKind(Enum):
    ONTOLOGY_CLASS = "OntologyClass"
    OBJECT_PROPERTY = "ObjectProperty"
    DATATYPE_PROPERTY = "DatatypeProperty"
    INDIVIDUAL = "Individual"


def _is_integer_lexical(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    return body.isdigit()


def _is_decimal_lexical(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    if body.count(".") != 1:
        return False
    left, right = body.split(".")
    return (left.isdigit() or right.isdigit()) and (left + right).isdigit()


@dataclass(frozen=True, order=True)
class LiteralValue:
    lexical: str
    datatype: str = "string"

    def __post_init__(self) -> None:
        if self.datatype not in LITERAL_DATATYPES:
            raise OntologyError(f"unknown literal datatype: {self.datatype}")
        if self.datatype == "integer" and not _is_integer_lexical(self.lexical):
            raise OntologyError(f"not an integer lexical: {self.lexical!r}")
        if self.datatype == "decimal" and not (
            _is_integer_lexical(self.lexical) or _is_decimal_lexical(self.lexical)
        ):
            raise OntologyError(f"not a decimal lexical: {self.lexical!r}")
        if self.datatype == "boolean" and self.lexical not in ("true", "false"):
            raise OntologyError(f"not a boolean lexical: {self.lexical!r}")


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: "Iri | LiteralValue"

    def sort_key(self) -> tuple:
        if isinstance(self.object, LiteralValue):
            obj_key = ("literal", self.object.datatype, self.object.lexical)
        else:
            obj_key = ("iri", str(self.object), "")
        return (str(self.subject), str(self.predicate), obj_key)


@dataclass
class Ontology:
    """Immutable-by-convention ontology value; do not mutate after build."""

    base_iri: str = DEFAULT_BASE_IRI
    entities: dict[Iri, EntityKind] = field(default_factory=dict)
    labels: dict[Iri, list[str]] = field(default_factory=dict)
    triples: frozenset[Triple] = field(default_factory=frozenset)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.base_iri == other.base_iri
            and self.entities == other.entities
            and self.labels == other.labels
            and self.triples == other.triples
        )

    def entities_of_kind(self, kind: EntityKind) -> set[Iri]:
        return {iri for iri, k in self.entities.items() if k is kind}

    def neighbors(self, entity: Iri) -> dict[str, set[Iri]]:
        """Direct parents/children/siblings along subsumption triples."""
        if entity not in self.entities:
            raise OntologyError(f"unknown entity: {entity}")
        subsumptions = [
            t
            for t in self.triples
            if str(t.predicate) in (RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF)
        ]
        parents = {t.object for t in subsumptions if t.subject == entity}
        children = {t.subject for t in subsumptions if t.object == entity}
        siblings: set[Iri] = set()
        for t in subsumptions:
            if t.object in parents and t.subject != entity:
                siblings.add(t.subject)
        return {"parents": parents, "children": children, "siblings": siblings}

    def validate(self) -> None:
        """Assert the structural invariants; raises OntologyError."""
        for t in self.triples:
            pred = str(t.predicate)
            if pred == RDF_TYPE:
                obj = t.object
                if isinstance(obj, LiteralValue):
                    raise OntologyError("rdf:type object must be an IRI")
                if str(obj) in _DECLARATION_KINDS:
                    if t.subject not in self.entities:
                        raise OntologyError(f"declared entity missing: {t.subject}")
                    continue
                if self.entities.get(t.subject) is not EntityKind.INDIVIDUAL:
                    raise OntologyError(
                        f"class assertion subject is not an individual: {t.subject}"
                    )
                if self.entities.get(obj) is not EntityKind.ONTOLOGY_CLASS:
                    raise OntologyError(f"class assertion object is not a class: {obj}")
            elif pred in _RESERVED_PREDICATES:
                continue
            else:
                kind = self.entities.get(t.predicate)
                if kind is EntityKind.OBJECT_PROPERTY:
                    if isinstance(t.object, LiteralValue):
                        raise OntologyError(
                            f"object property {t.predicate} asserted with a literal"
                        )
                    if self.entities.get(t.subject) is not EntityKind.INDIVIDUAL:
                        raise OntologyError(
                            f"property assertion subject is not an individual: {t.subject}"
                        )
                    if self.entities.get(t.object) is not EntityKind.INDIVIDUAL:
                        raise OntologyError(
                            f"object property target is not an individual: {t.object}"
                        )
                elif kind is EntityKind.DATATYPE_PROPERTY:
                    if not isinstance(t.object, LiteralValue):
                        raise OntologyError(
                            f"datatype property {t.predicate} asserted with an IRI"
                        )
                    if self.entities.get(t.subject) is not EntityKind.INDIVIDUAL:
                        raise OntologyError(
                            f"property assertion subject is not an individual: {t.subject}"
                        )
                else:
                    raise OntologyError(f"assertion with non-property predicate: {t.predicate}")


class OntologyBuilder:
    """Accumulates entities and triples, emitting declaration triples."""

    def __init__(self, base_iri: str = DEFAULT_BASE_IRI):
        self.base_iri = base_iri
        self._entities: dict[Iri, EntityKind] = {}
        self._labels: dict[Iri, list[str]] = {}
        self._triples: set[Triple] = set()

    def _declare(self, iri: Iri, kind: EntityKind) -> Iri:
        existing = self._entities.get(iri)
        if existing is not None and existing is not kind:
            raise OntologyError(
                f"{iri} declared as both {existing.value} and {kind.value}"
            )
        self._entities[iri] = kind
        if kind is EntityKind.ONTOLOGY_CLASS:
            self._triples.add(Triple(iri, Iri(RDF_TYPE), Iri(OWL_CLASS)))
        elif kind is EntityKind.OBJECT_PROPERTY:
            self._triples.add(Triple(iri, Iri(RDF_TYPE), Iri(OWL_OBJECT_PROPERTY)))
        elif kind is EntityKind.DATATYPE_PROPERTY:
            self._triples.add(Triple(iri, Iri(RDF_TYPE), Iri(OWL_DATATYPE_PROPERTY)))
        return iri

    def add_class(self, iri: str) -> Iri:
        return self._declare(Iri(iri), EntityKind.ONTOLOGY_CLASS)

    def add_object_property(self, iri: str) -> Iri:
        return self._declare(Iri(iri), EntityKind.OBJECT_PROPERTY)

    def add_datatype_property(self, iri: str) -> Iri:
        return self._declare(Iri(iri), EntityKind.DATATYPE_PROPERTY)

    def add_individual(self, iri: str, of_class: str) -> Iri:
        ind = self._declare(Iri(iri), EntityKind.INDIVIDUAL)
        cls = Iri(of_class)
        if self._entities.get(cls) is not EntityKind.ONTOLOGY_CLASS:
            raise OntologyError(f"not a declared class: {of_class}")
        self._triples.add(Triple(ind, Iri(RDF_TYPE), cls))
        return ind

    def add_label(self, iri: str, label: str) -> None:
        target = Iri(iri)
        if target not in self._entities:
            raise OntologyError(f"label on undeclared entity: {iri}")
        bucket = self._labels.setdefault(target, [])
        if label not in bucket:
            bucket.append(label)
        self._triples.add(Triple(target, Iri(RDFS_LABEL), LiteralValue(label, "string")))

    def assert_object(self, subject: str, prop: str, target: str) -> None:
        self._triples.add(Triple(Iri(subject), Iri(prop), Iri(target)))

    def assert_datatype(self, subject: str, prop: str, value: LiteralValue) -> None:
        self._triples.add(Triple(Iri(subject), Iri(prop), value))

    def add_triple(self, triple: Triple) -> None:
        self._triples.add(triple)

    def build(self, validate: bool = True) -> Ontology:
        onto = Ontology(
            base_iri=self.base_iri,
            entities=dict(self._entities),
            labels={k: sorted(v) for k, v in self._labels.items()},
            triples=frozenset(self._triples),
        )
        if validate:
            onto.validate()
        return onto


# --- Turtle subset parsing ---------------------------------------------------


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == "<":
            j = text.find(">", i)
            if j < 0:
                raise TurtleSyntaxError("unterminated IRI", start_line, start_col)
            tokens.append(_Token(text[i : j + 1], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == '"':
            buf = ['"']
            i += 1
            col += 1
            while True:
                if i >= n:
                    raise TurtleSyntaxError("unterminated literal", start_line, start_col)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n:
                        raise TurtleSyntaxError("dangling escape", line, col)
                    buf.append(text[i : i + 2])
                    i += 2
                    col += 2
                    continue
                if c == "\n":
                    raise TurtleSyntaxError("newline in literal", line, col)
                buf.append(c)
                i += 1
                col += 1
                if c == '"':
                    break
            # optional ^^xsd:type sticks to the literal token
            while i < n and text[i] not in " \t\r\n":
                buf.append(text[i])
                i += 1
                col += 1
            tokens.append(_Token("".join(buf), start_line, start_col))
            continue
        j = i
        while j < n and text[j] not in " \t\r\n":
            j += 1
        tokens.append(_Token(text[i:j], start_line, start_col))
        col += j - i
        i = j
    return tokens


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPES = {"\\\\": "\\", '\\"': '"', "\\n": "\n", "\\t": "\t", "\\r": "\r"}


def _unescape(body: str, tok: _Token) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        if body[i] == "\\":
            pair = body[i : i + 2]
            if pair not in _UNESCAPES:
                raise TurtleSyntaxError(f"bad escape {pair!r}", tok.line, tok.column)
            out.append(_UNESCAPES[pair])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.statements: list[tuple[Iri, Iri, Iri | LiteralValue, _Token]] = []

    def _next(self) -> _Token:
        if self.pos >= len(self.tokens):
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            raise TurtleSyntaxError("unexpected end of document", last.line, last.column)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def run(self) -> None:
        while self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            if tok.text == "@prefix":
                self._prefix_line()
            elif tok.text.startswith("@"):
                raise TurtleSyntaxError(f"unknown directive {tok.text}", tok.line, tok.column)
            else:
                self._statement()

    def _prefix_line(self) -> None:
        self._next()  # @prefix
        name_tok = self._next()
        if not name_tok.text.endswith(":"):
            raise TurtleSyntaxError("prefix name must end with ':'", name_tok.line, name_tok.column)
        iri_tok = self._next()
        if not (iri_tok.text.startswith("<") and iri_tok.text.endswith(">")):
            raise TurtleSyntaxError("prefix IRI must be <...>", iri_tok.line, iri_tok.column)
        dot = self._next()
        if dot.text != ".":
            raise TurtleSyntaxError("prefix line must end with '.'", dot.line, dot.column)
        self.prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]

    def _resolve(self, tok: _Token) -> Iri:
        text = tok.text
        if text.startswith("<") and text.endswith(">"):
            return Iri(text[1:-1])
        if ":" not in text:
            raise TurtleSyntaxError(f"expected IRI, got {text!r}", tok.line, tok.column)
        prefix, local = text.split(":", 1)
        if prefix not in self.prefixes:
            raise TurtleSyntaxError(f"unknown prefix {prefix!r}:", tok.line, tok.column)
        return Iri(self.prefixes[prefix] + local)

    def _object(self, tok: _Token) -> "Iri | LiteralValue":
        text = tok.text
        if text.startswith('"'):
            end = text.rfind('"')
            if end == 0:
                raise TurtleSyntaxError("unterminated literal", tok.line, tok.column)
            body = _unescape(text[1:end], tok)
            suffix = text[end + 1 :]
            if not suffix:
                return LiteralValue(body, "string")
            if not suffix.startswith("^^"):
                raise TurtleSyntaxError(f"bad literal suffix {suffix!r}", tok.line, tok.column)
            dt = self._resolve(_Token(suffix[2:], tok.line, tok.column))
            if not str(dt).startswith(XSD_NS):
                raise TurtleSyntaxError(f"unsupported datatype {dt}", tok.line, tok.column)
            name = str(dt)[len(XSD_NS) :]
            if name not in LITERAL_DATATYPES:
                raise TurtleSyntaxError(f"unsupported datatype xsd:{name}", tok.line, tok.column)
            try:
                return LiteralValue(body, name)
            except OntologyError as exc:
                raise TurtleSyntaxError(str(exc), tok.line, tok.column) from exc
        return self._resolve(tok)

    def _statement(self) -> None:
        subj_tok = self._next()
        subj = self._resolve(subj_tok)
        pred_tok = self._next()
        if pred_tok.text == "a":
            pred = Iri(RDF_TYPE)
        else:
            pred = self._resolve(pred_tok)
        obj_tok = self._next()
        obj = self._object(obj_tok)
        dot = self._next()
        if dot.text != ".":
            raise TurtleSyntaxError("statement must end with '.'", dot.line, dot.column)
        self.statements.append((subj, pred, obj, subj_tok))


def parse_turtle(text: str) -> Ontology:
    """Parse a Turtle-subset document into an Ontology.

    Entity kinds come from declarations (``owl:Class`` etc.), class
    assertions, axiom participation, and property-assertion usage.  An
    entity used with two conflicting kinds is a hard error.
    """
    parser = _Parser(text)
    parser.run()

    kinds: dict[Iri, EntityKind] = {}

    def put(iri: Iri, kind: EntityKind, tok: _Token) -> None:
        existing = kinds.get(iri)
        if existing is not None and existing is not kind:
            raise TurtleSyntaxError(
                f"{iri} used both as {existing.value} and {kind.value}",
                tok.line,
                tok.column,
            )
        kinds[iri] = kind

    # pass 1: explicit declarations
    for subj, pred, obj, tok in parser.statements:
        if str(pred) == RDF_TYPE and isinstance(obj, Iri) and str(obj) in _DECLARATION_KINDS:
            put(subj, EntityKind(_DECLARATION_KINDS[str(obj)]), tok)

    # pass 2: axiom-implied kinds
    for subj, pred, obj, tok in parser.statements:
        p = str(pred)
        if p in (RDFS_SUBCLASSOF, OWL_EQUIVALENT_CLASS):
            if isinstance(obj, LiteralValue):
                raise TurtleSyntaxError("axiom object must be an IRI", tok.line, tok.column)
            put(subj, EntityKind.ONTOLOGY_CLASS, tok)
            put(obj, EntityKind.ONTOLOGY_CLASS, tok)
        elif p == OWL_SAME_AS:
            if isinstance(obj, LiteralValue):
                raise TurtleSyntaxError("owl:sameAs object must be an IRI", tok.line, tok.column)
            put(subj, EntityKind.INDIVIDUAL, tok)
            put(obj, EntityKind.INDIVIDUAL, tok)
        elif p in (RDFS_SUBPROPERTYOF, OWL_EQUIVALENT_PROPERTY):
            for side in (subj, obj):
                if isinstance(side, LiteralValue):
                    raise TurtleSyntaxError("axiom object must be an IRI", tok.line, tok.column)
                if kinds.get(side) not in (
                    EntityKind.OBJECT_PROPERTY,
                    EntityKind.DATATYPE_PROPERTY,
                ):
                    raise TurtleSyntaxError(
                        f"property axiom over undeclared property {side}",
                        tok.line,
                        tok.column,
                    )

    # pass 3: class assertions
    for subj, pred, obj, tok in parser.statements:
        if str(pred) != RDF_TYPE or not isinstance(obj, Iri):
            continue
        if str(obj) in _DECLARATION_KINDS:
            continue
        if kinds.get(obj) is not EntityKind.ONTOLOGY_CLASS:
            raise TurtleSyntaxError(f"typed by undeclared class {obj}", tok.line, tok.column)
        put(subj, EntityKind.INDIVIDUAL, tok)

    # pass 4: property assertions (kind inferred from the object when new)
    for subj, pred, obj, tok in parser.statements:
        p = str(pred)
        if p in _RESERVED_PREDICATES or p == RDF_TYPE:
            continue
        inferred = (
            EntityKind.DATATYPE_PROPERTY
            if isinstance(obj, LiteralValue)
            else EntityKind.OBJECT_PROPERTY
        )
        put(pred, inferred, tok)
        put(subj, EntityKind.INDIVIDUAL, tok)
        if isinstance(obj, Iri):
            put(obj, EntityKind.INDIVIDUAL, tok)

    labels: dict[Iri, list[str]] = {}
    for subj, pred, obj, tok in parser.statements:
        if str(pred) == RDFS_LABEL:
            if not isinstance(obj, LiteralValue) or obj.datatype != "string":
                raise TurtleSyntaxError("rdfs:label needs a string literal", tok.line, tok.column)
            if subj not in kinds:
                raise TurtleSyntaxError(f"label on undeclared entity {subj}", tok.line, tok.column)
            bucket = labels.setdefault(subj, [])
            if obj.lexical not in bucket:
                bucket.append(obj.lexical)

    base = parser.prefixes.get("")
    if base is not None:
        base = base[:-1] if base.endswith("#") else base
    else:
        base = DEFAULT_BASE_IRI

    onto = Ontology(
        base_iri=base,
        entities=kinds,
        labels={k: sorted(v) for k, v in labels.items()},
        triples=frozenset(Triple(s, p, o) for s, p, o, _ in parser.statements),
    )
    onto.validate()
    return onto


# --- Turtle subset serialization ---------------------------------------------

_PREFIX_BLOCK = (
    ("owl", OWL_NS),
    ("rdf", RDF_NS),
    ("rdfs", RDFS_NS),
    ("xsd", XSD_NS),
)


def _pname_safe(local: str) -> bool:
    if not local:
        return False
    if local[0].isdigit() or local.endswith("."):
        return False
    return all(c.isalnum() or c in "_.-" for c in local)


def _render_iri(iri: Iri, base_hash: str) -> str:
    value = str(iri)
    if value.startswith(base_hash):
        local = value[len(base_hash) :]
        if _pname_safe(local):
            return f":{local}"
    for prefix, ns in _PREFIX_BLOCK:
        if value.startswith(ns):
            local = value[len(ns) :]
            if _pname_safe(local):
                return f"{prefix}:{local}"
    return f"<{value}>"


def _render_term(term: "Iri | LiteralValue", base_hash: str) -> str:
    if isinstance(term, LiteralValue):
        body = f'"{_escape(term.lexical)}"'
        if term.datatype == "string":
            return body
        return f"{body}^^xsd:{term.datatype}"
    return _render_iri(term, base_hash)


def serialize_turtle(onto: Ontology) -> str:
    """Deterministic Turtle for the subset: sorted prefixes then triples."""
    base_hash = onto.base_iri + "#"
    lines = [f"@prefix : <{base_hash}> ."]
    for prefix, ns in _PREFIX_BLOCK:
        lines.append(f"@prefix {prefix}: <{ns}> .")
    lines.append("")
    for triple in sorted(onto.triples, key=Triple.sort_key):
        subj = _render_iri(triple.subject, base_hash)
        pred = "a" if str(triple.predicate) == RDF_TYPE else _render_iri(triple.predicate, base_hash)
        obj = _render_term(triple.object, base_hash)
        lines.append(f"{subj} {pred} {obj} .")
    return "\n".join(lines) + "\n"
