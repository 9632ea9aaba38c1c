"""Command-line front end: fit scales, inspect them, run queries (one-shot
or in a small REPL), apply incremental updates, export the FT table, and
launch the HTTP service."""
from __future__ import annotations

import sys

import click

from . import __version__
from .clustering import clusterdb_star
from .dataset import DatasetError, attribute_series, load_csv
from .knowledge import KnowledgeBase, KnowledgeBaseError, load_kb
from .maintenance import MaintenanceError, delete_value, insert_value
from .membership import gfat
from .query import QueryError, QuerySyntaxError, evaluate, parse_query


class Fail(click.ClickException):
    exit_code = 1


def _load_data(path):
    if not path:
        raise Fail("--data <csv> is required for this command")
    try:
        return load_csv(path)
    except DatasetError as exc:
        raise Fail(str(exc))


def _load_kb(path, required=True):
    if not path:
        if required:
            raise Fail("--kb <path> is required for this command")
        return KnowledgeBase()
    try:
        return load_kb(path)
    except KnowledgeBaseError as exc:
        raise Fail(str(exc))


@click.group()
@click.version_option(__version__)
@click.option("--data", "data_path", type=click.Path(), default=None,
              help="CSV dataset path.")
@click.option("--kb", "kb_path", type=click.Path(), default="kb.json",
              show_default=True, help="Knowledge base (JSON) path.")
@click.option("--alpha", type=click.FloatRange(0, 1, max_open=True), default=0.0,
              show_default=True, help="Binarization cut for query evaluation.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]),
              default="table", show_default=True)
@click.pass_context
def main(ctx, data_path, kb_path, alpha, fmt):
    ctx.obj = {"data": data_path, "kb": kb_path, "alpha": alpha, "format": fmt}


@main.command()
@click.argument("csv_path", type=click.Path(exists=True))
@click.argument("attributes", nargs=-1, required=True)
@click.pass_context
def fit(ctx, csv_path, attributes):
    """Cluster each attribute of CSV_PATH and write the derived scales."""
    ds = _load_data(csv_path)
    kb = _load_kb(ctx.obj["kb"], required=False) if _exists(ctx.obj["kb"]) \
        else KnowledgeBase()
    for attr in attributes:
        try:
            series = attribute_series(ds, attr)
        except DatasetError as exc:
            raise Fail(str(exc))
        partition, index_value = clusterdb_star(series)
        variable = gfat(partition)
        kb = kb.put(variable)
        shown = "n/a" if index_value is None else f"{index_value:.3f}"
        click.echo(f"{attr}: {len(partition.clusters)} clusters (DB*={shown})")
        for term in variable.terms:
            click.echo(f"  {term.term}: A={term.a:g} B={term.b:g} "
                       f"C={term.c:g} D={term.d:g}")
    kb.save(ctx.obj["kb"])
    click.echo(f"wrote {ctx.obj['kb']}")


def _exists(path):
    import os
    return path and os.path.exists(path)


@main.command("show-mf")
@click.argument("attribute")
@click.pass_context
def show_mf(ctx, attribute):
    """Print the trapezoid parameters of one attribute's terms."""
    kb = _load_kb(ctx.obj["kb"])
    try:
        variable = kb.variable(attribute)
    except KnowledgeBaseError as exc:
        raise Fail(str(exc))
    click.echo(f"{attribute}  domain [{variable.domain[0]:g}, {variable.domain[1]:g}]")
    for t in variable.terms:
        click.echo(f"  {t.term} ({t.label}): A={t.a:g} B={t.b:g} C={t.c:g} D={t.d:g}")


def _maintain(ctx, attribute, value, op):
    ds = _load_data(ctx.obj["data"])
    try:
        series = attribute_series(ds, attribute)
    except DatasetError as exc:
        raise Fail(str(exc))
    partition, _ = clusterdb_star(series)
    fitted = gfat(partition)
    try:
        outcome = op(partition, fitted, value)
    except MaintenanceError as exc:
        raise Fail(str(exc))
    click.echo(f"{attribute} {value:g}: {outcome.kind.capitalize()}"
               f" ({len(outcome.partition.clusters)} clusters,"
               f" touched terms: {list(outcome.touched) or 'none'})")
    for t in outcome.variable.terms:
        click.echo(f"  {t.term}: A={t.a:g} B={t.b:g} C={t.c:g} D={t.d:g}")
    kb_path = ctx.obj["kb"]
    if _exists(kb_path):
        kb = _load_kb(kb_path)
        known = attribute in kb.attribute_names()
        if not known or kb.variable(attribute).terms == fitted.terms:
            kb.put(outcome.variable).save(kb_path)
            click.echo(f"updated {kb_path}")
        else:
            click.echo(f"note: {kb_path} holds a hand-loaded scale for "
                       f"{attribute!r}; left untouched")


@main.command()
@click.argument("attribute")
@click.argument("value", type=float)
@click.pass_context
def insert(ctx, attribute, value):
    """Insert VALUE into ATTRIBUTE's series and maintain its scale."""
    _maintain(ctx, attribute, value, insert_value)


@main.command()
@click.argument("attribute")
@click.argument("value", type=float)
@click.pass_context
def delete(ctx, attribute, value):
    """Delete VALUE from ATTRIBUTE's series and maintain its scale."""
    _maintain(ctx, attribute, value, delete_value)


def _print_outcome(outcome, fmt):
    if fmt == "json":
        click.echo(outcome.to_json())
        return
    if outcome.status == "answers":
        click.echo("answers:")
        for row, degree, projection in outcome.answers:
            cells = ", ".join(f"{k}={v}" for k, v in projection.items())
            click.echo(f"  [{degree:.2f}] row {row}: {cells}")
        return
    click.echo("no answers. minimal failure reasons:")
    for reason in outcome.failure_reasons:
        click.echo("  - " + " and ".join(str(c) for c in reason))
    if outcome.approximate:
        click.echo("approximate subqueries:")
        for i, (conds, answers) in enumerate(outcome.approximate, start=1):
            click.echo(f"  [{i}] " + " and ".join(str(c) for c in conds))
            for row, degree, projection in answers:
                cells = ", ".join(f"{k}={v}" for k, v in projection.items())
                click.echo(f"      [{degree:.2f}] row {row}: {cells}")


def _evaluate_text(ctx, text):
    ds = _load_data(ctx.obj["data"])
    kb = _load_kb(ctx.obj["kb"])
    fq = parse_query(text)
    return evaluate(fq, ds, kb, alpha=ctx.obj["alpha"])


@main.command()
@click.argument("text")
@click.pass_context
def query(ctx, text):
    """Evaluate a fuzzy query, e.g. \"SELECT nom FROM employes WHERE taille
    IS moyenne\"."""
    try:
        outcome = _evaluate_text(ctx, text)
    except (QuerySyntaxError, QueryError, KnowledgeBaseError, DatasetError) as exc:
        raise Fail(str(exc))
    _print_outcome(outcome, ctx.obj["format"])


@main.command()
@click.pass_context
def repl(ctx):
    """Interactive loop: type a query, inspect the failure report, and
    re-run an approximate subquery by entering its number."""
    ds = _load_data(ctx.obj["data"])
    kb = _load_kb(ctx.obj["kb"])
    click.echo("flexquery repl; enter a query, a subquery number, or 'quit'")
    last_approx = []
    while True:
        try:
            line = input("query> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line.lower() in ("q", "quit", "exit"):
            break
        if line.isdigit() and last_approx:
            n = int(line)
            if not 1 <= n <= len(last_approx):
                click.echo(f"pick a number between 1 and {len(last_approx)}")
                continue
            conds = last_approx[n - 1][0]
            text = "SELECT * FROM data WHERE " + \
                " AND ".join(f"{c.attribute} IS {c.label}" for c in conds)
            click.echo(f"re-running: {text}")
        else:
            text = line
        try:
            outcome = evaluate(parse_query(text), ds, kb, alpha=ctx.obj["alpha"])
        except (QuerySyntaxError, QueryError, KnowledgeBaseError, DatasetError) as exc:
            click.echo(f"error: {exc}")
            continue
        _print_outcome(outcome, ctx.obj["format"])
        last_approx = list(outcome.approximate)
        if last_approx:
            click.echo("enter a number to adopt an approximate subquery")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Start the HTTP service over the dataset (and optional kb)."""
    import uvicorn

    from .service import SessionState, create_app

    kb_path = ctx.obj["kb"] if _exists(ctx.obj["kb"]) else None
    state = SessionState.from_paths(_require_data(ctx), kb_path,
                                    alpha=ctx.obj["alpha"])
    uvicorn.run(create_app(state), host=host, port=port)


def _require_data(ctx):
    if not ctx.obj["data"]:
        raise Fail("--data <csv> is required for this command")
    return ctx.obj["data"]


@main.command("export-ft")
@click.option("--out", type=click.Path(), default="ft.csv", show_default=True)
@click.pass_context
def export_ft(ctx, out):
    """Write the flat FT table (terme, A, B, C, D) as CSV."""
    kb = _load_kb(ctx.obj["kb"])
    kb.export_ft(out)
    click.echo(f"wrote {out} ({len(kb.records)} rows)")


if __name__ == "__main__":
    main()
