"""Command-line entry point: align, evaluate, search-order, stats, validate."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .align import align_corpus
from .config import ConfigError, RunConfig, build_run_config, parse_order
from .corpus import validate_sentence
from .corpus_io import (
    CorpusFormatError,
    CorpusLoadError,
    GoldReferenceError,
    read_aligned,
    read_corpus,
    read_gold,
    write_aligned,
)
from .evaluation import evaluate, search_order
from .providers import (
    AuthError,
    EmbedAlignerClient,
    LiveDictionary,
    LiveTranslator,
    ProviderBundle,
    ResponseCache,
    fixture_bundle,
)
from .providers.fixtures import FileLemmatizer, FileThesaurus
from .providers.live import require_env
from .stats import method_stats

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2  # run completed but some sentences hard-failed


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


def _build_bundle(run: RunConfig) -> ProviderBundle:
    if run.providers == "fixture":
        return fixture_bundle(run.fixtures_dir, run.cache_dir)
    # Live mode: credentials are checked up front, before any file is touched.
    translator_key = require_env("XLAP_TRANSLATOR_KEY")
    dict_key = require_env("XLAP_DICT_KEY")
    aligner_url = require_env("XLAP_ALIGNER_URL")
    translator_url = require_env("XLAP_TRANSLATOR_URL")
    dict_url = require_env("XLAP_DICT_URL")
    fixtures = Path(run.fixtures_dir)
    return ProviderBundle(
        translator=LiveTranslator(translator_url, translator_key),
        dictionary=LiveDictionary(dict_url, dict_key),
        # Lemma and synonym tables are deterministic local data in both modes.
        lemmatizer=FileLemmatizer({"pt": fixtures / "lemmas.pt.tsv"}),
        thesaurus=FileThesaurus({"pt": fixtures / "thesaurus.pt.txt"}),
        aligner=EmbedAlignerClient(aligner_url),
        cache=ResponseCache(run.cache_dir),
        max_inflight=4,
    )


def _write_csv(path: str, rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        csv.writer(handle).writerows(rows)


_shared_options = [
    click.option("--config", "config_file", type=click.Path(exists=True), default=None,
                 help="Key=value config file; explicit flags win."),
    click.option("--variant", type=click.Choice(["european", "brazilian"]), default=None),
    click.option("--providers", type=click.Choice(["fixture", "live"]), default=None),
    click.option("--cache-dir", "cache_dir", default=None),
    click.option("--fixtures-dir", "fixtures_dir", default=None),
    click.option("--order", default=None, help="Comma-separated strategy order."),
    click.option("--fuzzy-threshold", "fuzzy_threshold", type=float, default=None),
    click.option("--parallelism", type=int, default=None),
]


def shared_options(fn):
    for option in reversed(_shared_options):
        fn = option(fn)
    return fn


def _run_config(config_file, **overrides) -> RunConfig:
    try:
        if overrides.get("order") is not None:
            overrides["order"] = parse_order(overrides["order"])
        return build_run_config(config_file, overrides)
    except (ConfigError, OSError) as err:
        _fail(str(err))
        raise AssertionError  # unreachable


@click.group()
def main() -> None:
    """Project span annotations onto machine-translated sentences."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--log-file", "log_file", type=click.Path(), default=None,
              help="Structured JSONL run log (one event per sentence).")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Also write the method-stats table as CSV.")
@shared_options
def align(input_path, output_path, log_file, csv_path, config_file, **overrides) -> None:
    """Translate (if needed) and align a corpus; writes the aligned corpus
    and prints the per-method statistics table."""
    run = _run_config(config_file, input=input_path, output=output_path, **overrides)
    try:
        bundle = _build_bundle(run)
    except (AuthError, OSError) as err:
        _fail(str(err))
    log_handle = open(log_file, "w", encoding="utf-8", newline="\n") if log_file else None
    run_log = None
    if log_handle is not None:
        run_log = lambda event: log_handle.write(json.dumps(event, ensure_ascii=False) + "\n")
    try:
        sentences = list(read_corpus(run.input))
        result = align_corpus(
            sentences,
            bundle,
            run.pipeline_config(),
            variant=run.variant,
            parallelism=run.parallelism,
            run_log=run_log,
        )
        write_aligned(run.output, result.sentences)
    except (CorpusFormatError, CorpusLoadError, OSError) as err:
        _fail(str(err))
    finally:
        if log_handle is not None:
            log_handle.close()
    click.echo(result.stats.render_text())
    if csv_path:
        _write_csv(csv_path, result.stats.to_csv_rows())
    if result.failures:
        for failure in result.failures:
            click.echo(
                f"failed: {failure.doc_id}/{failure.sent_id}: {failure.reason}", err=True
            )
        sys.exit(EXIT_PARTIAL)


@main.command(name="evaluate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="Aligned corpus produced by 'align'.")
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@click.option("--csv", "csv_path", type=click.Path(), default=None)
def evaluate_cmd(input_path, gold_path, csv_path) -> None:
    """Score an aligned corpus against gold manual alignments."""
    try:
        aligned = list(read_aligned(input_path))
        gold = read_gold(gold_path, aligned)
        report = evaluate(aligned, gold)
    except (CorpusFormatError, CorpusLoadError, GoldReferenceError, OSError) as err:
        _fail(str(err))
    click.echo(report.render_text())
    breakdown = report.error_breakdown()
    click.echo("")
    click.echo("Errors: " + ", ".join(f"{k.value}={v}" for k, v in sorted(breakdown.items())))
    if csv_path:
        _write_csv(csv_path, report.to_csv_rows())


@main.command(name="search-order")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@shared_options
def search_order_cmd(input_path, gold_path, config_file, **overrides) -> None:
    """Align under every permutation of the strategy order and rank them."""
    run = _run_config(config_file, input=input_path, gold=gold_path, **overrides)
    try:
        bundle = _build_bundle(run)
        sentences = list(read_corpus(run.input))
        base_config = run.pipeline_config()
        result = align_corpus(sentences, bundle, base_config, variant=run.variant)
        gold = read_gold(run.gold, result.sentences)
        search = search_order(sentences, gold, bundle, base_config, variant=run.variant)
    except (AuthError, CorpusFormatError, CorpusLoadError, GoldReferenceError, OSError) as err:
        _fail(str(err))
    width = max(len(score.name) for score in search.table)
    click.echo(f"{'Order'.ljust(width)}  Exact   Relaxed")
    for score in search.table:
        click.echo(f"{score.name.ljust(width)}  {score.exact:.4f}  {score.relaxed:.4f}")
    click.echo(f"best: {search.best.name}")


@main.command(name="stats")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--csv", "csv_path", type=click.Path(), default=None)
def stats_cmd(input_path, csv_path) -> None:
    """Print the method x kind x split count table for an aligned corpus."""
    try:
        stats = method_stats(read_aligned(input_path))
    except (CorpusFormatError, CorpusLoadError, OSError) as err:
        _fail(str(err))
    click.echo(stats.render_text())
    if csv_path:
        _write_csv(csv_path, stats.to_csv_rows())


@main.command(name="validate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
def validate_cmd(input_path) -> None:
    """Check every record against the data invariants."""
    count = 0
    try:
        for sentence in read_corpus(input_path):
            # read_corpus already raises on violations; re-run for the count.
            assert not validate_sentence(sentence)
            count += 1
    except (CorpusFormatError, CorpusLoadError, OSError) as err:
        _fail(str(err))
    click.echo(f"ok: {count} sentences valid")


if __name__ == "__main__":
    main()
