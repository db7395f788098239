"""Command line interface; a thin client over the pipeline stages and
the query service.
"""
from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import align as align_mod
from . import pipeline
from .config import DEFAULT_CONFIG_NAME, load_config
from .errors import ConfigError, LitkgError
from .service import create_app
from .store import GraphStore


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except LitkgError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


_config_option = click.option(
    "-c",
    "--config",
    "config_path",
    type=click.Path(path_type=Path),
    default=Path(DEFAULT_CONFIG_NAME),
    show_default=True,
    help="Path to the YAML configuration.",
)


@click.group()
def cli() -> None:
    """Build and explore a literature knowledge graph."""


@cli.command()
@_config_option
@_handle_errors
def ingest(config_path: Path) -> None:
    """Parse the author dump and select qualifying authors."""
    cfg = load_config(config_path)
    payload = pipeline.run_ingest(cfg)
    rejected = sum(payload["rejected"].values())
    click.echo(
        f"selected {len(payload['selected'])} authors "
        f"({rejected} rejected, {len(payload['errors'])} bad lines)"
    )
    for reason, count in payload["rejected"].items():
        click.echo(f"  rejected by {reason}: {count}")


@cli.command()
@_config_option
@click.option("--offline", is_flag=True, help="Replay recorded responses only; never hit the network.")
@click.option("--threshold", type=float, default=None, help="Override the similarity threshold.")
@_handle_errors
def align(config_path: Path, offline: bool, threshold: float | None) -> None:
    """Link authors to platform identities and stage the links."""
    cfg = load_config(config_path)
    payload = pipeline.run_align(cfg, offline=offline, threshold=threshold)
    accepted = sum(1 for c in payload["candidates"] if c["accepted"])
    click.echo(f"{len(payload['candidates'])} candidates, {accepted} accepted links")


@cli.command()
@_config_option
@_handle_errors
def classify(config_path: Path) -> None:
    """Compute author roles and stage them."""
    cfg = load_config(config_path)
    roles = pipeline.run_classify(cfg)
    flagged = sum(1 for r in roles.values() if r)
    click.echo(f"classified {len(roles)} authors; {flagged} carry roles")


@cli.command()
@_config_option
@click.option("--no-derived", is_flag=True, help="Skip materializing derived shortcut triples.")
@_handle_errors
def build(config_path: Path, no_derived: bool) -> None:
    """Assemble the graph, write the canonical export and build report."""
    cfg = load_config(config_path)
    result = pipeline.run_build(cfg, materialize=not no_derived)
    click.echo(result.report.to_text(), nl=False)
    click.echo(f"graph written to {cfg.out_dir / pipeline.GRAPH_FILE}")


@cli.group()
def qa() -> None:
    """Sampling and scoring for manual link validation."""


@qa.command("sample")
@_config_option
@click.option("--seed", type=int, default=None, help="Override the sampling seed.")
@click.option("--per-bucket", type=int, default=None, help="Override the per-bucket sample size.")
@click.option(
    "--out",
    type=click.Path(path_type=Path),
    default=None,
    help="Worksheet path (default: <out_dir>/qa_worksheet.csv).",
)
@_handle_errors
def qa_sample(config_path: Path, seed: int | None, per_bucket: int | None, out: Path | None) -> None:
    """Draw a reproducible worksheet of candidates to annotate."""
    cfg = load_config(config_path)
    candidates = pipeline.load_candidates(cfg)
    rows = align_mod.qa_sample(
        candidates,
        seed=cfg.qa_seed if seed is None else seed,
        per_bucket=cfg.qa_per_bucket if per_bucket is None else per_bucket,
    )
    path = out or (cfg.out_dir / "qa_worksheet.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    align_mod.write_worksheet(rows, path)
    click.echo(f"wrote {len(rows)} sample rows to {path}")


@qa.command("score")
@click.argument("worksheet", type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Emit the scores as JSON.")
@_handle_errors
def qa_score(worksheet: Path, as_json: bool) -> None:
    """Score an annotated worksheet: per-bucket accuracy."""
    rows = align_mod.read_worksheet(worksheet)
    scores = align_mod.qa_score(rows)
    if as_json:
        payload = [
            {
                "bucket": f"{s.low:.1f}-{s.high:.1f}",
                "total": s.total,
                "correct": s.correct,
                "accuracy": s.accuracy,
            }
            for s in scores
        ]
        click.echo(json.dumps(payload, indent=2))
        return
    for s in scores:
        accuracy = f"{s.accuracy:.2f}" if s.accuracy is not None else "n/a"
        click.echo(f"[{s.low:.1f}, {s.high:.1f}): {s.correct}/{s.total} accuracy {accuracy}")


@cli.command()
@_config_option
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "csv", "json"]),
    default="text",
    show_default=True,
)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Write to a file instead of stdout.")
@_handle_errors
def stats(config_path: Path, fmt: str, out: Path | None) -> None:
    """Summary tables over the built graph."""
    cfg = load_config(config_path)
    store = GraphStore.load(pipeline.staged_graph_path(cfg))
    report = store.stats(cfg.base_iri)
    if fmt == "text":
        rendered = report.to_text()
    elif fmt == "csv":
        rendered = report.to_csv()
    else:
        rendered = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if out is None:
        click.echo(rendered, nl=False)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(rendered, "utf-8")
        click.echo(f"wrote stats to {out}")


@cli.command()
@_config_option
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["nt", "ttl"]),
    default="nt",
    show_default=True,
)
@click.option("--no-derived", is_flag=True, help="Exclude derived shortcut triples.")
@_handle_errors
def export(config_path: Path, out: Path, fmt: str, no_derived: bool) -> None:
    """Serialize the built graph to N-Triples or Turtle."""
    cfg = load_config(config_path)
    store = GraphStore.load(pipeline.staged_graph_path(cfg))
    out.parent.mkdir(parents=True, exist_ok=True)
    store.export(out, fmt, include_derived=not no_derived)
    click.echo(f"exported {len(store)} triples to {out}")


@cli.command()
@_config_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option(
    "--graph",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Graph file to serve (default: the staged build output).",
)
@_handle_errors
def serve(config_path: Path, host: str, port: int, graph: Path | None) -> None:
    """Serve the query API (and the UI bundle, when configured)."""
    import uvicorn

    cfg = load_config(config_path)
    path = graph or pipeline.staged_graph_path(cfg)
    store = GraphStore.load(path)
    app = create_app(store, cfg)
    click.echo(f"serving {len(store)} triples on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="info")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
