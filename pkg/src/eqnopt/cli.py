"""Command line front end.

Subcommands: optimize (full pipeline with CEC gate), features (CSV feature
dump, the trainer's ingestion format), bench (greedy vs pool extraction
sweeps over a corpus), check (equivalence of two files), fuzz (random corpus
generation). Every option can also be set through EQNOPT_<COMMAND>_<OPTION>
environment variables.

Exit codes: 0 success, 2 usage, 3 parse/interface error, 4 model error,
5 extraction error, 6 inequivalence (CEC gate or check).
"""
from __future__ import annotations

import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .costmodel import AnalyticCostModel, EnsembleCostModel, load_model
from .egraph import EGraph
from .equiv import INEQUIVALENT, check_equiv
from .eqnformat import parse_eqn, write_eqn
from .errors import (
    CapacityError,
    EqnOptError,
    ExtractionError,
    InterfaceError,
    ModelError,
    ParseError,
    SelectionError,
)
from .expr import circuit_to_term
from .extraction import (
    AST_DEPTH,
    AST_SIZE,
    FeasibleCostTable,
    LocalCost,
    PoolConfig,
    build_pool,
    extract_greedy,
)
from .features import FEATURE_NAMES, extract_features
from .fuzz import random_circuit
from .optimizer import RunConfig, bundled_model_path, run_optimize
from .saturation import SaturationLimits, saturate

EXIT_PARSE = 3
EXIT_MODEL = 4
EXIT_EXTRACTION = 5
EXIT_CEC = 6

_ERROR_CODES = (
    ((ParseError, InterfaceError), EXIT_PARSE),
    ((ModelError,), EXIT_MODEL),
    ((ExtractionError, SelectionError, CapacityError), EXIT_EXTRACTION),
)


def _fail(stage: str, exc: EqnOptError):
    for classes, code in _ERROR_CODES:
        if isinstance(exc, classes):
            click.echo(f"error [{stage}]: {exc}", err=True)
            sys.exit(code)
    click.echo(f"error [{stage}]: {exc}", err=True)
    sys.exit(1)


def _fmt(value) -> str:
    """CSV-friendly numbers: integral values print as integers, everything
    else as the shortest exact float repr.
    """
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    return repr(value) if isinstance(value, float) else str(value)


def _limit_options(fn):
    fn = click.option("--time-limit", type=float, default=300.0,
                      show_default=True, help="Saturation wall-time budget [s].")(fn)
    fn = click.option("--node-limit", type=int, default=2_500_000,
                      show_default=True, help="Saturation e-node budget.")(fn)
    fn = click.option("--iter-limit", type=int, default=30,
                      show_default=True, help="Saturation iteration budget.")(fn)
    return fn


def _pool_options(fn):
    fn = click.option("--pool-size", type=int, default=122, show_default=True)(fn)
    fn = click.option("--p-suboptimal", type=float, default=0.2, show_default=True)(fn)
    fn = click.option("--strategy-ratio", default="1:3", show_default=True,
                      help="strategy a : strategy b sample ratio.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    return fn


def _parse_ratio(text: str) -> "tuple[int, int]":
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise click.BadParameter(f"expected A:B, got {text!r}")


@click.group()
def cli():
    """Boolean circuit optimization via e-graph rewriting."""


@cli.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_path", type=click.Path(dir_okay=False),
              help="Optimized eqn path [default: INPUT with .opt.eqn].")
@click.option("--objective", default="area", show_default=True,
              type=click.Choice(["delay", "area", "balanced", "ast-size", "ast-depth"]))
@click.option("--delay-model", type=click.Path(exists=True, dir_okay=False))
@click.option("--area-model", type=click.Path(exists=True, dir_okay=False))
@_limit_options
@_pool_options
@click.option("--cec-exhaustive-limit", type=int, default=12, show_default=True)
@click.option("--cec-vectors", type=int, default=10_000, show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              help="Write the run report as JSON here.")
@click.option("--quiet", is_flag=True, help="Suppress the report table.")
def optimize(input_path, output_path, objective, delay_model, area_model,
             time_limit, node_limit, iter_limit, pool_size, p_suboptimal,
             strategy_ratio, seed, cec_exhaustive_limit, cec_vectors,
             report_path, quiet):
    """Optimize one equation file and equivalence-check the result."""
    cfg = RunConfig(
        objective=objective,
        delay_model=delay_model,
        area_model=area_model,
        limits=SaturationLimits(time_limit, node_limit, iter_limit),
        pool=PoolConfig(pool_size=pool_size, p_suboptimal=p_suboptimal,
                        strategy_ratio=_parse_ratio(strategy_ratio), seed=seed),
        cec_exhaustive_limit=cec_exhaustive_limit,
        cec_vectors=cec_vectors,
    )
    try:
        circuit = parse_eqn(Path(input_path).read_text())
    except EqnOptError as exc:
        _fail("parse", exc)
    try:
        optimized, run_report = run_optimize(circuit, cfg)
    except EqnOptError as exc:
        _fail("optimize", exc)

    out = Path(output_path) if output_path else Path(input_path).with_suffix(".opt.eqn")
    out.write_text(write_eqn(optimized))
    if report_path:
        Path(report_path).write_text(
            json.dumps(run_report.to_json_dict(), indent=1) + "\n")
    if not quiet:
        click.echo(run_report.to_table())
    if run_report.cec.verdict == INEQUIVALENT:
        click.echo("error [cec]: optimized circuit is NOT equivalent", err=True)
        sys.exit(EXIT_CEC)


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", "corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--output", "output_path", type=click.Path(dir_okay=False),
              help="Feature CSV [default: stdout].")
@click.option("--append", is_flag=True, help="Append rows, skip the header.")
@click.option("--labels", type=click.Choice([AST_SIZE, AST_DEPTH, "weighted-ops"]),
              help="Also emit analytic pseudo-labels of this kind.")
@click.option("--labels-output", type=click.Path(dir_okay=False),
              help="Label CSV path (name,label), required with --labels.")
def features(input_path, corpus_dir, output_path, append, labels, labels_output):
    """Dump the 7 regression features, one CSV row per circuit."""
    if bool(input_path) == bool(corpus_dir):
        raise click.UsageError("give exactly one of --input / --corpus")
    if labels and not labels_output:
        raise click.UsageError("--labels needs --labels-output")
    paths = ([Path(input_path)] if input_path
             else sorted(Path(corpus_dir).glob("*.eqn")))
    rows = []
    label_rows = []
    for path in paths:
        try:
            circuit = parse_eqn(path.read_text())
        except EqnOptError as exc:
            _fail(f"parse {path.name}", exc)
        term = circuit_to_term(circuit)
        vec = extract_features(term)
        rows.append([path.stem] + [_fmt(v) for v in vec])
        if labels:
            label_rows.append([path.stem, _fmt(LocalCost(labels).term_cost(term))])

    header = ["name"] + list(FEATURE_NAMES)
    if output_path:
        mode = "a" if append else "w"
        with open(output_path, mode, newline="") as fh:
            writer = csv.writer(fh)
            if not append:
                writer.writerow(header)
            writer.writerows(rows)
    else:
        click.echo(",".join(header))
        for row in rows:
            click.echo(",".join(row))
    if labels:
        mode = "a" if append else "w"
        with open(labels_output, mode, newline="") as fh:
            writer = csv.writer(fh)
            if not append:
                writer.writerow(["name", "label"])
            writer.writerows(label_rows)


def _bench_one(args):
    """One corpus entry: greedy by size, greedy by depth, and best-of-pool
    at each requested size under the selection model. Runs in a worker
    process; returns CSV rows.
    """
    path_text, name, objective, model_path, limits, pool_sizes, seed = args
    started = time.monotonic()
    try:
        circuit = parse_eqn(path_text)
        term = circuit_to_term(circuit)
        g = EGraph()
        root = g.add_term(term)
        saturate(g, limits=limits)
        if objective == "ast-size":
            model = AnalyticCostModel(LocalCost(AST_SIZE))
        elif objective == "ast-depth":
            model = AnalyticCostModel(LocalCost(AST_DEPTH))
        else:
            model = EnsembleCostModel(load_model(model_path))

        tables = {}
        rows = []
        for label, kind in (("greedy_size", AST_SIZE), ("greedy_depth", AST_DEPTH)):
            t0 = time.monotonic()
            table = tables.setdefault(kind, FeasibleCostTable(g, LocalCost(kind)))
            cost = model.cost(extract_greedy(g, root, LocalCost(kind), table))
            rows.append([name, label, _fmt(cost),
                         f"{time.monotonic() - t0:.4f}", "ok"])

        t0 = time.monotonic()
        pool = build_pool(
            g, root, PoolConfig(pool_size=max(pool_sizes), seed=seed),
            tables={k: t for k, t in tables.items()})
        costs = [(cand.index, model.cost(cand.term)) for cand in pool.candidates]
        pool_wall = time.monotonic() - t0
        for size in pool_sizes:
            best = min(c for idx, c in costs if idx < size)
            rows.append([name, f"pool@{size}", _fmt(best),
                         f"{pool_wall:.4f}", "ok"])
        return rows
    except Exception as exc:  # per-circuit failures recorded, run continues
        return [[name, "error", "", f"{time.monotonic() - started:.4f}",
                 f"{type(exc).__name__}: {exc}"]]


@cli.command()
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--output", "output_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--objective", default="area", show_default=True,
              type=click.Choice(["delay", "area", "ast-size", "ast-depth"]))
@click.option("--delay-model", type=click.Path(exists=True, dir_okay=False))
@click.option("--area-model", type=click.Path(exists=True, dir_okay=False))
@_limit_options
@click.option("--pool-sizes", default="2,10,50,100,150", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
def bench(corpus_dir, output_path, objective, delay_model, area_model,
          time_limit, node_limit, iter_limit, pool_sizes, seed, jobs):
    """Compare greedy and pool extraction over a corpus of eqn files."""
    limits = SaturationLimits(time_limit, node_limit, iter_limit)
    sizes = sorted({int(s) for s in pool_sizes.split(",") if s.strip()})
    if not sizes or sizes[0] < 2:
        raise click.UsageError("pool sizes must be >= 2")
    if objective == "delay":
        model_path = delay_model or bundled_model_path("delay")
    elif objective == "area":
        model_path = area_model or bundled_model_path("area")
    else:
        model_path = None

    paths = sorted(Path(corpus_dir).glob("*.eqn"))
    tasks = [(p.read_text(), p.stem, objective, model_path, limits, sizes, seed)
             for p in paths]
    with open(output_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["circuit", "strategy", "cost", "wall_s", "status"])
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for rows in pool.map(_bench_one, tasks):
                    writer.writerows(rows)
        else:
            for task in tasks:
                writer.writerows(_bench_one(task))
    click.echo(f"wrote {output_path} ({len(tasks)} circuits)")


@cli.command()
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--cec-exhaustive-limit", type=int, default=12, show_default=True)
@click.option("--cec-vectors", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def check(file_a, file_b, cec_exhaustive_limit, cec_vectors, seed, as_json):
    """Equivalence-check two equation files (exit 6 when inequivalent)."""
    try:
        a = parse_eqn(Path(file_a).read_text())
        b = parse_eqn(Path(file_b).read_text())
    except EqnOptError as exc:
        _fail("parse", exc)
    try:
        report = check_equiv(a, b, cec_exhaustive_limit, cec_vectors, seed)
    except EqnOptError as exc:
        _fail("check", exc)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=1))
    else:
        click.echo(f"{report.verdict} ({report.method}, "
                   f"{report.vectors_tested} vectors)")
        if report.counterexample is not None:
            click.echo(f"counterexample: {report.counterexample}")
    if report.verdict == INEQUIVALENT:
        sys.exit(EXIT_CEC)


@cli.command()
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--max-inputs", type=int, default=10, show_default=True)
@click.option("--max-gates", type=int, default=48, show_default=True)
@click.option("--max-outputs", type=int, default=3, show_default=True)
def fuzz(count, seed, out_dir, max_inputs, max_gates, max_outputs):
    """Generate a corpus of random circuits as eqn files."""
    import random as _random

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        rng = _random.Random(f"fuzz:{seed}:{i}")
        circuit = random_circuit(rng, max_inputs, max_gates, max_outputs)
        (out / f"fuzz{i:04d}.eqn").write_text(write_eqn(circuit))
    click.echo(f"wrote {count} circuits to {out}")


def main():
    cli(auto_envvar_prefix="EQNOPT")


if __name__ == "__main__":
    main()
