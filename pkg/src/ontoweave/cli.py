"""Command line front end chaining the pipeline stages.

Exit codes: 0 success, 2 bad usage (flag errors), 3 missing input file,
4 unparseable input, 5 invalid configuration.  Identical inputs always
produce byte-identical outputs; ``pipeline`` equals the composition of
the individual subcommands on the same files.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .alignment import (
    Alignment,
    AlignmentFormatError,
    parse_alignment_json,
    parse_alignment_xml,
    serialize_alignment_json,
    serialize_alignment_xml,
)
from .evaluation import (
    EvaluationReport,
    evaluate,
    render_report_table,
    report_csv,
    threshold_sweep,
)
from .filters import (
    disambiguate_max_weight,
    disambiguate_two_pass,
    rewrite_ambiguous_to_subsumption,
    trim,
)
from .matching import MatcherConfig, match
from .merge import bridge_axioms, merge
from .ontology import Ontology, OntologyError, parse_turtle, serialize_turtle
from .review import QueuePolicy, open_session
from .tables import CsvConfig, TableError, convert, parse_csv

EXIT_OK = 0
EXIT_MISSING_FILE = 3
EXIT_PARSE_ERROR = 4
EXIT_BAD_CONFIG = 5

_EXIT_CODE_DOC = (
    "Exit codes: 0 success, 2 usage error, 3 missing file, "
    "4 parse failure, 5 invalid configuration."
)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.exists():
        _fail(EXIT_MISSING_FILE, f"no such file: {path}")
    return p.read_text("utf-8")


def _load_alignment(path: str) -> Alignment:
    text = _read_text(path)
    try:
        if path.endswith(".json"):
            return parse_alignment_json(text)
        return parse_alignment_xml(text)
    except AlignmentFormatError as exc:
        _fail(EXIT_PARSE_ERROR, f"{path}: {exc}")


def _write_alignment(alignment: Alignment, path: str) -> None:
    if path.endswith(".json"):
        Path(path).write_text(serialize_alignment_json(alignment), encoding="utf-8")
    else:
        Path(path).write_text(serialize_alignment_xml(alignment), encoding="utf-8")


def _load_ontology(path: str) -> Ontology:
    text = _read_text(path)
    try:
        return parse_turtle(text)
    except OntologyError as exc:
        _fail(EXIT_PARSE_ERROR, f"{path}: {exc}")


@click.group(epilog=_EXIT_CODE_DOC)
def main() -> None:
    """Tabular-data integration toolkit: convert, match, filter, evaluate, merge."""


@main.command()
@click.option("--input", "input_path", required=True, help="CSV file (header row first).")
@click.option("--id-column", required=True, help="Header (or 0-based index) of the id column.")
@click.option("--association", "associations", multiple=True, help="Association column; repeatable.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--base-iri", default="http://example.org/ontology", show_default=True)
@click.option("--name", default=None, help="Table name (defaults to the file stem).")
@click.option("--output", required=True, help="Turtle output path.")
def convert_cmd(input_path, id_column, associations, delimiter, base_iri, name, output):
    """Convert a CSV table to an ontology."""
    text = _read_text(input_path)
    id_ref = int(id_column) if id_column.lstrip("-").isdigit() else id_column
    assoc = [int(a) if a.lstrip("-").isdigit() else a for a in associations]
    try:
        table = parse_csv(
            text,
            CsvConfig(id_column=id_ref, association_columns=assoc, delimiter=delimiter),
            name=name or Path(input_path).stem,
        )
        onto = convert(table, base_iri)
    except TableError as exc:
        _fail(EXIT_PARSE_ERROR, f"{input_path}: {exc}")
    Path(output).write_text(serialize_turtle(onto), encoding="utf-8")
    click.echo(f"wrote {output} ({len(onto.entities)} entities, {len(onto.triples)} triples)")


main.add_command(convert_cmd, name="convert")


def _matcher_config(config_path, floor, strategy) -> MatcherConfig:
    try:
        if config_path:
            cfg = MatcherConfig.from_json(_read_text(config_path))
        else:
            cfg = MatcherConfig()
        if floor is not None:
            cfg.candidate_floor = floor
            cfg.__post_init__()
        if strategy is not None:
            from .matching import CombinationStrategy

            cfg.strategy = CombinationStrategy(strategy)
            cfg.__post_init__()
        return cfg
    except (ValueError, KeyError) as exc:
        _fail(EXIT_BAD_CONFIG, f"matcher config: {exc}")


@main.command(name="match")
@click.option("--onto1", required=True, help="First ontology (Turtle).")
@click.option("--onto2", required=True, help="Second ontology (Turtle).")
@click.option("--config", "config_path", default=None, help="Matcher config JSON.")
@click.option("--floor", type=float, default=None, help="Candidate floor override.")
@click.option("--strategy", default=None, help="Combination strategy override.")
@click.option("--output", required=True)
def match_cmd(onto1, onto2, config_path, floor, strategy, output):
    """Match two ontologies with the terminological baseline."""
    o1 = _load_ontology(onto1)
    o2 = _load_ontology(onto2)
    cfg = _matcher_config(config_path, floor, strategy)
    alignment = match(o1, o2, cfg)
    _write_alignment(alignment, output)
    click.echo(f"wrote {output} ({len(alignment.cells)} correspondences)")


@main.command(name="trim")
@click.option("--input", "input_path", required=True)
@click.option("--alpha", type=float, required=True, help="Confidence threshold in [0, 1].")
@click.option("--output", required=True)
def trim_cmd(input_path, alpha, output):
    """Apply a confidence cut to an alignment."""
    alignment = _load_alignment(input_path)
    try:
        trimmed = trim(alignment, alpha)
    except ValueError as exc:
        _fail(EXIT_BAD_CONFIG, str(exc))
    _write_alignment(trimmed, output)
    click.echo(f"wrote {output} ({len(trimmed.cells)}/{len(alignment.cells)} kept)")


_DISAMBIGUATORS = {
    "two-pass": disambiguate_two_pass,
    "max-weight": disambiguate_max_weight,
    "subsumption-rewrite": rewrite_ambiguous_to_subsumption,
}


@main.command(name="disambiguate")
@click.option("--input", "input_path", required=True)
@click.option(
    "--strategy",
    type=click.Choice(sorted(_DISAMBIGUATORS)),
    default="two-pass",
    show_default=True,
)
@click.option("--output", required=True)
def disambiguate_cmd(input_path, strategy, output):
    """Reduce alignment ambiguity."""
    alignment = _load_alignment(input_path)
    result = _DISAMBIGUATORS[strategy](alignment)
    _write_alignment(result, output)
    click.echo(f"wrote {output} ({len(result.cells)}/{len(alignment.cells)} cells)")


def _echo_report(label: str, report: EvaluationReport) -> None:
    click.echo(render_report_table([(label, report)]), nl=False)


@main.command(name="evaluate")
@click.option("--alignment", "alignment_path", required=True)
@click.option("--reference", "reference_path", required=True)
@click.option("--alpha-f", type=float, default=0.5, show_default=True, help="F-measure alpha.")
@click.option("--json", "json_path", default=None, help="Also write the report as JSON.")
@click.option("--csv", "csv_path", default=None, help="Also write the report as CSV.")
def evaluate_cmd(alignment_path, reference_path, alpha_f, json_path, csv_path):
    """Score an alignment against a reference alignment."""
    alignment = _load_alignment(alignment_path)
    reference = _load_alignment(reference_path)
    report = evaluate(alignment, reference, alpha=alpha_f)
    _echo_report("alignment", report)
    delta_sign = f"{report.delta:+d}" if report.delta else "0"
    click.echo(f"delta: {delta_sign} ({report.delta_classification})")
    if json_path:
        Path(json_path).write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    if csv_path:
        Path(csv_path).write_text(report_csv([("alignment", report)]), encoding="utf-8")


def _parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) == 3:
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        grid = []
        value = start
        while value <= stop + 1e-12:
            grid.append(round(value, 10))
            value += step
        return grid
    return [float(p) for p in spec.split(",")]


@main.command(name="sweep")
@click.option("--alignment", "alignment_path", required=True)
@click.option("--reference", "reference_path", required=True)
@click.option("--grid", default="0:1:0.01", show_default=True, help="start:stop:step or a,b,c.")
def sweep_cmd(alignment_path, reference_path, grid):
    """Find the trimming threshold that maximizes F1."""
    alignment = _load_alignment(alignment_path)
    reference = _load_alignment(reference_path)
    try:
        grid_values = _parse_grid(grid)
        result = threshold_sweep(alignment, reference, grid_values)
    except ValueError as exc:
        _fail(EXIT_BAD_CONFIG, f"grid: {exc}")
    for alpha, f1 in result.curve:
        click.echo(f"{alpha:.4f}\t{f1:.6f}")
    click.echo(f"best alpha: {result.best_alpha} (f1 {result.best_f1:.6f})")


@main.command(name="merge")
@click.option("--onto1", required=True)
@click.option("--onto2", required=True)
@click.option("--alignment", "alignment_path", required=True)
@click.option("--output", required=True, help="Merged ontology (Turtle).")
@click.option("--skipped", "skipped_path", default=None, help="Sidecar JSON for untranslated cells.")
def merge_cmd(onto1, onto2, alignment_path, output, skipped_path):
    """Merge two ontologies through an alignment into one knowledge graph."""
    o1 = _load_ontology(onto1)
    o2 = _load_ontology(onto2)
    alignment = _load_alignment(alignment_path)
    try:
        bridges = bridge_axioms(alignment, o1, o2)
        merged = merge(o1, o2, alignment)
    except OntologyError as exc:
        _fail(EXIT_PARSE_ERROR, str(exc))
    Path(output).write_text(serialize_turtle(merged), encoding="utf-8")
    if skipped_path:
        payload = [
            {
                "entity1": s.entity1,
                "entity2": s.entity2,
                "relation": s.relation,
                "reason": s.reason,
            }
            for s in bridges.skipped
        ]
        Path(skipped_path).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    click.echo(
        f"wrote {output} ({len(merged.triples)} triples, "
        f"{len(bridges.triples)} bridges, {len(bridges.skipped)} skipped)"
    )


@main.command(name="review")
@click.option("--alignment", "alignment_path", required=True)
@click.option("--onto1", required=True)
@click.option("--onto2", required=True)
@click.option("--log", "log_path", default="decisions.jsonl", show_default=True)
@click.option("--output", default="validated-alignment.rdf", show_default=True)
@click.option("--reference", "reference_path", default=None)
@click.option("--threshold", type=float, default=0.0, show_default=True)
@click.option("--queue-kinds", default="Ambiguous,LowConfidence", show_default=True)
@click.option("--static-dir", default=None, help="Directory with the built UI bundle.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8351, show_default=True)
def review_cmd(
    alignment_path,
    onto1,
    onto2,
    log_path,
    output,
    reference_path,
    threshold,
    queue_kinds,
    static_dir,
    host,
    port,
):
    """Serve the human review loop over HTTP."""
    import uvicorn

    from .service import create_app

    alignment = _load_alignment(alignment_path)
    o1 = _load_ontology(onto1)
    o2 = _load_ontology(onto2)
    try:
        policy = QueuePolicy(
            kinds=frozenset(k for k in queue_kinds.split(",") if k),
            threshold=threshold,
        )
        session = open_session(alignment, o1, o2, policy=policy, log_path=log_path)
    except ValueError as exc:
        _fail(EXIT_BAD_CONFIG, str(exc))
    if host not in ("127.0.0.1", "localhost"):
        click.echo(
            "warning: binding a non-localhost interface exposes the session "
            "to the network; the service has no authentication",
            err=True,
        )
    app = create_app(
        session,
        output_path=output,
        reference_path=reference_path,
        static_dir=static_dir,
    )
    click.echo(f"review queue: {len(session.queue())} cells at http://{host}:{port}/")
    uvicorn.run(app, host=host, port=port, log_level="warning")


def _pipeline_source(section: dict, default_base: str, out_dir: Path, tag: str) -> Ontology:
    if "turtle" in section:
        return _load_ontology(section["turtle"])
    if "csv" not in section:
        _fail(EXIT_BAD_CONFIG, f"source {tag}: needs 'csv' or 'turtle'")
    text = _read_text(section["csv"])
    try:
        table = parse_csv(
            text,
            CsvConfig(
                id_column=section["id_column"],
                association_columns=section.get("association_columns", []),
                delimiter=section.get("delimiter", ","),
            ),
            name=section.get("name", Path(section["csv"]).stem),
        )
        onto = convert(table, section.get("base_iri", default_base + "/" + tag))
    except (TableError, KeyError) as exc:
        _fail(EXIT_PARSE_ERROR, f"source {tag}: {exc}")
    (out_dir / f"{tag}.ttl").write_text(serialize_turtle(onto), encoding="utf-8")
    return onto


@main.command(name="pipeline")
@click.option(
    "--config",
    "config_path",
    envvar="ONTOWEAVE_CONFIG",
    required=True,
    help="Pipeline config JSON (env ONTOWEAVE_CONFIG).",
)
def pipeline_cmd(config_path):
    """Run convert, match, trim, disambiguate, evaluate, and merge end to end.

    Emits the four report variants (untrimmed, disambiguated, trimmed,
    trimmed+disambiguated) plus every intermediate artifact.
    """
    try:
        config = json.loads(_read_text(config_path))
    except json.JSONDecodeError as exc:
        _fail(EXIT_PARSE_ERROR, f"{config_path}: {exc}")

    out_dir = Path(config.get("output_dir", "pipeline-out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    base = config.get("base_iri", "http://example.org")

    if "source1" not in config or "source2" not in config:
        _fail(EXIT_BAD_CONFIG, "config needs 'source1' and 'source2' sections")
    o1 = _pipeline_source(config["source1"], base, out_dir, "source1")
    o2 = _pipeline_source(config["source2"], base, out_dir, "source2")

    cfg = MatcherConfig()
    if "match" in config:
        try:
            cfg = MatcherConfig.from_json(json.dumps(config["match"]))
        except (ValueError, KeyError) as exc:
            _fail(EXIT_BAD_CONFIG, f"match section: {exc}")
    alignment = match(o1, o2, cfg)
    _write_alignment(alignment, str(out_dir / "alignment.rdf"))

    alpha = config.get("trim", {}).get("alpha")
    strategy = config.get("disambiguate", {}).get("strategy", "two-pass")
    if strategy not in _DISAMBIGUATORS:
        _fail(EXIT_BAD_CONFIG, f"unknown disambiguation strategy {strategy!r}")
    disambiguator = _DISAMBIGUATORS[strategy]

    trimmed = trim(alignment, alpha) if alpha is not None else alignment
    variants: list[tuple[str, Alignment]] = [
        ("untrimmed", alignment),
        ("disambiguated", disambiguator(alignment)),
        ("trimmed", trimmed),
        ("trimmed+disambiguated", disambiguator(trimmed)),
    ]
    for label, variant in variants:
        safe = label.replace("+", "-")
        _write_alignment(variant, str(out_dir / f"alignment-{safe}.rdf"))

    if "evaluate" in config:
        section = config["evaluate"]
        reference = _load_alignment(section["reference"])
        alpha_f = section.get("alpha_f", 0.5)
        rows = [
            (label, evaluate(variant, reference, alpha=alpha_f))
            for label, variant in variants
        ]
        table = render_report_table(rows)
        (out_dir / "report.txt").write_text(table, encoding="utf-8")
        (out_dir / "report.csv").write_text(report_csv(rows), encoding="utf-8")
        (out_dir / "report.json").write_text(
            json.dumps(
                {label: report.to_dict() for label, report in rows},
                indent=2,
                sort_keys=True,
            )
            + "\n",
            encoding="utf-8",
        )
        click.echo(table, nl=False)

    if "merge" in config:
        final = variants[-1][1]
        merged = merge(o1, o2, final)
        merged_path = config["merge"].get("output", str(out_dir / "merged.ttl"))
        Path(merged_path).write_text(serialize_turtle(merged), encoding="utf-8")
        click.echo(f"merged knowledge graph: {merged_path}")

    click.echo(f"pipeline artifacts in {out_dir}")


if __name__ == "__main__":
    main()
