"""Alignment evaluation against a reference.

Cells are compared by their identity triple (entity1, entity2, relation);
confidences never influence the confusion counts.  Precision, recall,
noise, silence, the weighted F-measure, overall, the ambiguity degree,
and the size difference delta are computed exactly; undefined values
(empty alignment or empty reference) surface as explicit ``None``, never
silent zeros.

Recall divides by the reference size (TP + FN).  Overall is
``recall * (2 - 1/precision)``, equivalently ``1 - (FP + FN) / |R|``; a
precision of zero makes it ``-inf`` ("not worth repair").
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources

from .alignment import Alignment
from .filters import trim

__all__ = [
    "ConfusionCounts",
    "EvaluationReport",
    "PublishedRow",
    "SweepResult",
    "ambiguity_degree",
    "confusion_counts",
    "delta",
    "evaluate",
    "f_measure",
    "load_published_results",
    "overall",
    "precision",
    "recall",
    "render_report_table",
    "round_metric",
    "threshold_sweep",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int | None = None

    @property
    def alignment_size(self) -> int:
        return self.tp + self.fp

    @property
    def reference_size(self) -> int:
        return self.tp + self.fn


def confusion_counts(
    alignment: Alignment,
    reference: Alignment,
    sizes: tuple[int, int] | None = None,
) -> ConfusionCounts:
    """TP/FP/FN (and TN when the entity-set sizes are supplied)."""
    found = alignment.identities()
    expected = reference.identities()
    tp = len(found & expected)
    fp = len(found) - tp
    fn = len(expected) - tp
    tn = None
    if sizes is not None:
        total = sizes[0] * sizes[1]
        tn = total - len(found | expected)
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def precision(counts: ConfusionCounts) -> float | None:
    """TP / |A|; None when the alignment is empty."""
    if counts.alignment_size == 0:
        return None
    return counts.tp / counts.alignment_size


def recall(counts: ConfusionCounts) -> float | None:
    """TP / |R|; None when the reference is empty."""
    if counts.reference_size == 0:
        return None
    return counts.tp / counts.reference_size


def f_measure(p: float, r: float, alpha: float = 0.5) -> float:
    """P*R / ((1-alpha)*P + alpha*R); equals P at alpha=1 and R at alpha=0."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    if alpha == 1.0:
        return p
    if alpha == 0.0:
        return r
    if p == 0.0 and r == 0.0:
        return 0.0
    return (p * r) / ((1.0 - alpha) * p + alpha * r)


def overall(p: float, r: float) -> float:
    """Repair-effort metric R*(2 - 1/P); -inf at zero precision."""
    if p == 0.0:
        return float("-inf")
    return r * (2.0 - 1.0 / p)


def ambiguity_degree(alignment: Alignment) -> float:
    """Percentage of cells participating in any ambiguity; 0 when empty."""
    if not alignment.cells:
        return 0.0
    return len(alignment.ambiguous_cells()) * 100.0 / len(alignment.cells)


def delta(reference_size: int, alignment_size: int) -> tuple[int, str]:
    """|R| - |A| with its under-/over-matching classification."""
    value = reference_size - alignment_size
    if value > 0:
        tag = "under-matching"
    elif value < 0:
        tag = "over-matching"
    else:
        tag = "balanced"
    return value, tag


@dataclass
class EvaluationReport:
    alignment_size: int
    reference_size: int
    ambiguous_count: int
    counts: ConfusionCounts
    precision: float | None
    recall: float | None
    noise: float | None
    silence: float | None
    f_alpha: float
    f_measure_alpha: float | None
    f1: float | None
    overall: float | None
    ambiguity_degree: float
    ambiguity_defined: bool
    delta: int
    delta_classification: str

    def to_dict(self) -> dict:
        def jsonable(value):
            if value == float("-inf"):
                return "-inf"
            return value

        return {
            "alignment_size": self.alignment_size,
            "reference_size": self.reference_size,
            "ambiguous_count": self.ambiguous_count,
            "tp": self.counts.tp,
            "fp": self.counts.fp,
            "fn": self.counts.fn,
            "tn": self.counts.tn,
            "precision": self.precision,
            "recall": self.recall,
            "noise": self.noise,
            "silence": self.silence,
            "f_alpha": self.f_alpha,
            "f_measure_alpha": jsonable(self.f_measure_alpha),
            "f1": jsonable(self.f1),
            "overall": jsonable(self.overall),
            "ambiguity_degree": self.ambiguity_degree,
            "ambiguity_defined": self.ambiguity_defined,
            "delta": self.delta,
            "delta_classification": self.delta_classification,
        }

    def table_row(self) -> list[str]:
        """R, A, Amb, Precision, Recall, F-measure, Overall, Ambiguity."""
        return [
            str(self.reference_size),
            str(self.alignment_size),
            str(self.ambiguous_count),
            format_metric(self.precision),
            format_metric(self.recall),
            format_metric(self.f1),
            format_metric(self.overall),
            format_metric(self.ambiguity_degree) + "%",
        ]


def round_metric(value: float, digits: int = 3) -> float:
    """Round half up, matching the printed tables; internals stay exact."""
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def format_metric(value: float | None, digits: int = 3) -> str:
    if value is None:
        return "n/a"
    if value == float("-inf"):
        return "-inf"
    return f"{round_metric(value, digits):g}"


def evaluate(
    alignment: Alignment,
    reference: Alignment,
    alpha: float = 0.5,
    sizes: tuple[int, int] | None = None,
) -> EvaluationReport:
    """Assemble every metric for one (alignment, reference) pair."""
    counts = confusion_counts(alignment, reference, sizes)
    p = precision(counts)
    r = recall(counts)
    f_a = None if p is None or r is None else f_measure(p, r, alpha)
    f_1 = None if p is None or r is None else f_measure(p, r, 0.5)
    o = None if p is None or r is None else overall(p, r)
    d_value, d_tag = delta(counts.reference_size, counts.alignment_size)
    return EvaluationReport(
        alignment_size=len(alignment.cells),
        reference_size=len(reference.cells),
        ambiguous_count=len(alignment.ambiguous_cells()),
        counts=counts,
        precision=p,
        recall=r,
        noise=None if p is None else 1.0 - p,
        silence=None if r is None else 1.0 - r,
        f_alpha=alpha,
        f_measure_alpha=f_a,
        f1=f_1,
        overall=o,
        ambiguity_degree=ambiguity_degree(alignment),
        ambiguity_defined=bool(alignment.cells),
        delta=d_value,
        delta_classification=d_tag,
    )


REPORT_COLUMNS = ["R", "A", "Amb", "Precision", "Recall", "F-measure", "Overall", "Ambiguity"]


def render_report_table(rows: list[tuple[str, EvaluationReport]]) -> str:
    """Fixed-width text table in the published column layout."""
    header = ["Variant"] + REPORT_COLUMNS
    body = [[label] + report.table_row() for label, report in rows]
    widths = [max(len(str(line[i])) for line in [header] + body) for i in range(len(header))]
    lines = []
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for line in body:
        lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(line, widths)))
    return "\n".join(lines) + "\n"


def report_csv(rows: list[tuple[str, EvaluationReport]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["variant"] + [c.lower() for c in REPORT_COLUMNS])
    for label, report in rows:
        writer.writerow([label] + report.table_row())
    return buffer.getvalue()


@dataclass
class SweepResult:
    best_alpha: float
    best_f1: float
    curve: list[tuple[float, float]]


def threshold_sweep(
    alignment: Alignment, reference: Alignment, grid: list[float]
) -> SweepResult:
    """F1 of trim(alignment, alpha) over the grid; smallest argmax wins.

    An alpha that empties the alignment scores 0 in the curve.
    """
    if not grid:
        raise ValueError("grid must be non-empty")
    curve: list[tuple[float, float]] = []
    for alpha in grid:
        report = evaluate(trim(alignment, alpha), reference)
        f1 = report.f1 if report.f1 is not None else 0.0
        curve.append((alpha, f1))
    best_alpha, best_f1 = curve[0]
    for alpha, f1 in curve[1:]:
        if f1 > best_f1:
            best_alpha, best_f1 = alpha, f1
    return SweepResult(best_alpha=best_alpha, best_f1=best_f1, curve=curve)


# --- published results fixture -------------------------------------------------


@dataclass(frozen=True)
class PublishedRow:
    """One row of the published result tables (variants 1 through 4)."""

    table: int
    experiment: int
    tool: str
    threshold: float | None
    reference_size: int
    alignment_size: int
    ambiguous_count: int
    precision: float
    recall: float
    f1: float
    overall: float
    ambiguity_pct: float


def load_published_results() -> list[PublishedRow]:
    """Rows of the bundled table1.csv fixture (all four result tables)."""
    text = resources.files("ontoweave").joinpath("data/table1.csv").read_text("utf-8")
    rows = []
    for record in csv.DictReader(io.StringIO(text)):
        rows.append(
            PublishedRow(
                table=int(record["table"]),
                experiment=int(record["experiment"]),
                tool=record["tool"],
                threshold=float(record["threshold"]) if record["threshold"] else None,
                reference_size=int(record["reference_size"]),
                alignment_size=int(record["alignment_size"]),
                ambiguous_count=int(record["ambiguous_count"]),
                precision=float(record["precision"]),
                recall=float(record["recall"]),
                f1=float(record["f_measure"]),
                overall=float(record["overall"]),
                ambiguity_pct=float(record["ambiguity_pct"]),
            )
        )
    return rows
