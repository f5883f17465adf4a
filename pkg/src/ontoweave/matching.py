"""Terminological baseline matcher.

Entity names are tokenized (separator and camel-case splits, lowercased,
optional stopword removal) and scored by three matchers: exact token
sequence, Levenshtein similarity over the joined tokens, and Jaccard over
the token sets.  Per-matcher scores are combined by min, max, average, or
weighted sum, and every pair at or above the candidate floor becomes an
equivalence correspondence.  Each entity kind is matched in isolation, so
the output never relates a class to a property or an individual.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from .alignment import Alignment, Correspondence, RelationType
from .ontology import EntityKind, Iri, Ontology

__all__ = [
    "CombinationStrategy",
    "Matcher",
    "MatcherConfig",
    "combine",
    "edit_distance",
    "edit_similarity",
    "exact_name",
    "match",
    "normalize",
    "token_jaccard",
]

STOPWORDS = ("of", "the", "and", "or")

_SEPARATORS = re.compile(r"[_\-.,/()\s]+")
_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def normalize(name: str, strip_stopwords: bool = False) -> list[str]:
    """Lowercased tokens split on separators and camel-case boundaries."""
    spaced = _CAMEL_BOUNDARY.sub(" ", name)
    tokens = [t.lower() for t in _SEPARATORS.split(spaced) if t]
    if strip_stopwords:
        tokens = [t for t in tokens if t not in STOPWORDS]
    return tokens


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, two-row dynamic program."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def edit_similarity(a: str, b: str, strip_stopwords: bool = False) -> float:
    """1 - normalized Levenshtein over the space-joined token strings."""
    norm_a = " ".join(normalize(a, strip_stopwords))
    norm_b = " ".join(normalize(b, strip_stopwords))
    if not norm_a and not norm_b:
        return 1.0
    longest = max(len(norm_a), len(norm_b))
    return 1.0 - edit_distance(norm_a, norm_b) / longest


def token_jaccard(a: str, b: str, strip_stopwords: bool = False) -> float:
    """Jaccard coefficient over the normalized token sets."""
    set_a = set(normalize(a, strip_stopwords))
    set_b = set(normalize(b, strip_stopwords))
    if not set_a and not set_b:
        return 1.0
    union = set_a | set_b
    if not union:
        return 0.0
    return len(set_a & set_b) / len(union)


def exact_name(a: str, b: str, strip_stopwords: bool = False) -> float:
    """1.0 when the normalized token sequences are equal, else 0.0."""
    return 1.0 if normalize(a, strip_stopwords) == normalize(b, strip_stopwords) else 0.0


class Matcher(Enum):
    EXACT_NAME = "ExactName"
    EDIT_SIMILARITY = "EditSimilarity"
    TOKEN_JACCARD = "TokenJaccard"


_MATCHER_FUNCTIONS = {
    Matcher.EXACT_NAME: exact_name,
    Matcher.EDIT_SIMILARITY: edit_similarity,
    Matcher.TOKEN_JACCARD: token_jaccard,
}


class CombinationStrategy(Enum):
    MIN = "Min"
    MAX = "Max"
    AVERAGE = "Average"
    WEIGHTED_SUM = "WeightedSum"


@dataclass
class MatcherConfig:
    matchers: tuple[Matcher, ...] = (
        Matcher.EXACT_NAME,
        Matcher.EDIT_SIMILARITY,
        Matcher.TOKEN_JACCARD,
    )
    strategy: CombinationStrategy = CombinationStrategy.AVERAGE
    weights: dict[Matcher, float] = field(default_factory=dict)
    candidate_floor: float = 0.4
    strip_stopwords: bool = False
    ignore_numeric_ids: bool = False

    def __post_init__(self) -> None:
        if not self.matchers:
            raise ValueError("at least one matcher required")
        if not 0.0 <= self.candidate_floor <= 1.0:
            raise ValueError("candidate_floor outside [0, 1]")
        if self.strategy is CombinationStrategy.WEIGHTED_SUM:
            if set(self.weights) != set(self.matchers):
                raise ValueError("weights must cover exactly the configured matchers")
            if any(w < 0 for w in self.weights.values()):
                raise ValueError("weights must be nonnegative")
            total = sum(self.weights.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"weights must sum to 1, got {total}")

    @classmethod
    def from_json(cls, text: str) -> "MatcherConfig":
        raw = json.loads(text)
        kwargs = {}
        if "matchers" in raw:
            kwargs["matchers"] = tuple(Matcher(m) for m in raw["matchers"])
        if "strategy" in raw:
            kwargs["strategy"] = CombinationStrategy(raw["strategy"])
        if "weights" in raw:
            kwargs["weights"] = {Matcher(m): float(w) for m, w in raw["weights"].items()}
        for key in ("candidate_floor", "strip_stopwords", "ignore_numeric_ids"):
            if key in raw:
                kwargs[key] = raw[key]
        return cls(**kwargs)

    def to_json(self) -> str:
        return json.dumps(
            {
                "matchers": [m.value for m in self.matchers],
                "strategy": self.strategy.value,
                "weights": {m.value: w for m, w in self.weights.items()},
                "candidate_floor": self.candidate_floor,
                "strip_stopwords": self.strip_stopwords,
                "ignore_numeric_ids": self.ignore_numeric_ids,
            },
            indent=2,
        )


def combine(scores: list[tuple[Matcher, float]], cfg: MatcherConfig) -> float:
    """Fold per-matcher scores into one confidence value."""
    present = [m for m, _ in scores]
    if set(present) != set(cfg.matchers) or len(present) != len(set(present)):
        raise ValueError("scores must cover exactly the configured matchers")
    values = [v for _, v in scores]
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise ValueError("scores outside [0, 1]")
    if cfg.strategy is CombinationStrategy.MIN:
        return min(values)
    if cfg.strategy is CombinationStrategy.MAX:
        return max(values)
    if cfg.strategy is CombinationStrategy.AVERAGE:
        return sum(values) / len(values)
    return sum(cfg.weights[m] * v for m, v in scores)


# id-code names: letters followed by a counter, e.g. cshapes/1474
# (separator may arrive percent-encoded when read back from an IRI)
_NUMERIC_ID = re.compile(r"^[A-Za-z]+(?:[/_\-.]|%[0-9A-Fa-f]{2})?\d+$")


def _looks_like_id_code(name: str) -> bool:
    return bool(_NUMERIC_ID.match(name))


def _entity_names(onto: Ontology, entity: Iri) -> list[str]:
    names = [entity.local_name]
    for label in onto.labels.get(entity, []):
        if label not in names:
            names.append(label)
    return names


def _score_pair(names1: list[str], names2: list[str], cfg: MatcherConfig) -> float:
    scores = []
    for matcher in cfg.matchers:
        fn = _MATCHER_FUNCTIONS[matcher]
        best = 0.0
        for n1 in names1:
            for n2 in names2:
                best = max(best, fn(n1, n2, cfg.strip_stopwords))
        scores.append((matcher, best))
    return combine(scores, cfg)


def match(o1: Ontology, o2: Ontology, cfg: MatcherConfig | None = None) -> Alignment:
    """Score all same-kind cross pairs and keep those above the floor."""
    cfg = cfg or MatcherConfig()
    cells: list[Correspondence] = []
    for kind in EntityKind:
        left = sorted(o1.entities_of_kind(kind))
        right = sorted(o2.entities_of_kind(kind))
        for e1 in left:
            names1 = _entity_names(o1, e1)
            if cfg.ignore_numeric_ids and all(_looks_like_id_code(n) for n in names1):
                continue
            for e2 in right:
                names2 = _entity_names(o2, e2)
                if cfg.ignore_numeric_ids and all(_looks_like_id_code(n) for n in names2):
                    continue
                score = _score_pair(names1, names2, cfg)
                if score >= cfg.candidate_floor:
                    cells.append(
                        Correspondence(
                            entity1=str(e1),
                            entity2=str(e2),
                            relation=RelationType.EQUIVALENCE,
                            confidence=score,
                        )
                    )
    cells.sort(key=Correspondence.sort_key)
    return Alignment(onto1=o1.base_iri, onto2=o2.base_iri, cells=cells)
