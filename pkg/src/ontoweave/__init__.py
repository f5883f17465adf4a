"""Semantic integration of relational tables into a knowledge graph.

The pipeline: parse CSV tables into role-annotated virtual tables,
convert them to small OWL-style ontologies, find equivalence
correspondences with terminological matchers, reduce the uncertainty of
the resulting alignment (confidence cuts, disambiguation, subsumption
rewriting, human review), score it against a reference, and merge the
ontologies plus bridging axioms into one graph.
"""

from .alignment import (
    Alignment,
    AlignmentFormatError,
    Correspondence,
    RelationType,
    parse_alignment_json,
    parse_alignment_xml,
    serialize_alignment_json,
    serialize_alignment_xml,
)
from .evaluation import (
    ConfusionCounts,
    EvaluationReport,
    ambiguity_degree,
    confusion_counts,
    delta,
    evaluate,
    f_measure,
    overall,
    precision,
    recall,
    threshold_sweep,
)
from .filters import (
    disambiguate_max_weight,
    disambiguate_two_pass,
    rewrite_ambiguous_to_subsumption,
    trim,
)
from .matching import (
    CombinationStrategy,
    Matcher,
    MatcherConfig,
    combine,
    edit_similarity,
    match,
    normalize,
    token_jaccard,
)
from .merge import bridge_axioms, merge
from .ontology import (
    EntityKind,
    Iri,
    LiteralValue,
    Ontology,
    OntologyBuilder,
    OntologyError,
    Triple,
    TurtleSyntaxError,
    parse_turtle,
    serialize_turtle,
)
from .review import (
    Decision,
    DecisionAction,
    QueuePolicy,
    ReviewSession,
    UnreviewedPolicy,
    open_session,
)
from .tables import (
    ColumnRole,
    CsvConfig,
    TableError,
    VirtualTable,
    convert,
    infer_datatype,
    parse_csv,
)

__version__ = "0.1.0"
