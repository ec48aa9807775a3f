"""Command-line front end: ingest, train, predict, evaluate, bench.

Every command exits 0 on success; errors print one line naming the failing
stage and exit 2 (bad input), 3 (empty result), or 4 (I/O failure).
"""

from __future__ import annotations

import functools
import json
import os
import statistics
import sys
import time

import click

from . import __version__
from .classifier import (
    SCHEMA_VERSION,
    WeightMode,
    load_model,
    save_model,
)
from .config import PipelineConfig, load_config
from .corpus import Corpus, Split, load_corpus, save_corpus
from .errors import EmptyResult, InputError, IoFailure, PipelineError
from .evaluation import evaluate, format_table, format_tsv
from .pipeline import (
    classify_corpus,
    restrict_to_categories,
    train_full_baseline,
    train_pipeline,
)


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineError as exc:
            stage = exc.stage or fn.__name__
            click.echo(f"error [{stage}]: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _tag(exc: PipelineError, stage: str) -> PipelineError:
    if exc.stage is None:
        exc.stage = stage
    return exc


def _staged(stage: str, call, *args, **kwargs):
    try:
        return call(*args, **kwargs)
    except PipelineError as exc:
        raise _tag(exc, stage)


def _build_config(config_path: str | None, flags: dict) -> PipelineConfig:
    base = (
        _staged("config", load_config, config_path)
        if config_path
        else PipelineConfig()
    )
    return _staged("config", base.merged, flags)


def _config_options(fn):
    options = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="JSON config file; explicit flags override it."),
        click.option("--stopwords", "stopwords_path", type=click.Path(),
                     default=None, help="Stopword list, one word per line."),
        click.option("--conflate-tau", type=float, default=None,
                     help="Digram similarity needed to merge terms [default: 0.6]."),
        click.option("--min-token-len", type=int, default=None,
                     help="Shortest token kept [default: 2]."),
        click.option("--n-features", type=int, default=None,
                     help="Features kept by weight [default: 2000]."),
        click.option("--weighting", type=click.Choice(["tf", "tfidf"]),
                     default=None, help="Vector weighting scheme [default: tfidf]."),
        click.option("--idf-base", type=click.Choice(["10", "e"]), default=None,
                     help="Logarithm base for idf [default: 10]."),
        click.option("--k-fraction", type=float, default=None,
                     help="Clusters per category as a fraction of its size [default: 0.1]."),
        click.option("--min-cluster-size", type=int, default=None,
                     help="Clusters smaller than this are pruned [default: 5]."),
        click.option("--outlier-sigma", type=float, default=None,
                     help="Mean-distance z-score that flags outliers [default: 2.0]."),
        click.option("--edit-cap", type=int, default=None,
                     help="Token count cap for edit distance [default: 256]."),
        click.option("--restarts", type=int, default=None,
                     help="Clustering restarts per category [default: 5]."),
        click.option("--fallback-full-category/--no-fallback-full-category",
                     "fallback_full_category", default=None,
                     help="Use the full purged category when condensation "
                          "empties it [default: on]."),
        click.option("--seed", type=int, default=None,
                     help="Base random seed [default: 0]."),
        click.option("--threads", type=int, default=None,
                     help="Worker threads; results do not depend on this [default: 1]."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
@click.version_option(
    version=__version__,
    message=f"%(prog)s %(version)s (model schema v{SCHEMA_VERSION})",
)
def main():
    """Text categorization with a medoid-condensed weighted kNN."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(),
              help="Corpus file to validate.")
@click.option("--format", "input_format", type=click.Choice(["jsonl"]),
              default="jsonl", show_default=True, help="Corpus file format.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Where to write the canonicalized corpus.")
@_cli_errors
def ingest(input_path, input_format, out_path):
    """Validate a corpus file and write its canonical form."""
    corpus = _staged("ingest", load_corpus, input_path, input_format)
    _staged("ingest", save_corpus, corpus, out_path)
    splits = {s: 0 for s in Split}
    for doc in corpus:
        splits[doc.split] += 1
    click.echo(
        f"{len(corpus)} documents "
        f"(train {splits[Split.TRAIN]}, test {splits[Split.TEST]}, "
        f"unused {splits[Split.UNUSED]}), "
        f"{len(corpus.categories)} categories"
    )
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(),
              help="Labeled corpus with split fields.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Model file to write.")
@_config_options
@_cli_errors
def train(corpus_path, out_path, config_path, **flags):
    """Build and save a condensed model from the train split."""
    cfg = _build_config(config_path, flags)
    corpus = _staged("load", load_corpus, corpus_path)
    result = _staged("train", train_pipeline, corpus, cfg)
    _staged("save", save_model, result.model, out_path)
    stats = result.stats
    for cat in stats.categories:
        note = " (fallback)" if cat.used_fallback else ""
        click.echo(
            f"{cat.category}: {cat.n_representatives} representatives "
            f"from {cat.n_documents} documents "
            f"({cat.n_purged} purged, {cat.n_pruned_clusters} clusters pruned)"
            f"{note}"
        )
    click.echo(
        f"model: {stats.n_representatives} representatives "
        f"from {stats.n_train} training documents"
    )
    if stats.removed_categories:
        click.echo(
            "categories without train/test presence removed: "
            + ", ".join(stats.removed_categories)
        )
    click.echo(f"training time: {stats.train_seconds:.3f}s")
    click.echo(f"wrote {out_path}")


def _write_predictions(path, predictions) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            for pred in predictions:
                record = {
                    "id": pred.doc_id,
                    "predicted": pred.predicted,
                    "scores": pred.scores,
                }
                fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
                fh.write("\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write predictions {path}: {exc}") from exc


def _resolve_model(model_path, baseline, corpus_path):
    """The model to classify with (and its training time when known): the
    saved one, or the uncondensed baseline rebuilt from the training
    corpus under the saved config."""
    model = _staged("load-model", load_model, model_path)
    if not baseline:
        return model, None
    if corpus_path is None:
        raise InputError(
            "--baseline-full-knn needs --corpus to rebuild the full "
            "training set",
            stage="load-model",
        )
    cfg = _staged("config", PipelineConfig.from_dict, model.config)
    corpus = _staged("load", load_corpus, corpus_path)
    result = _staged("train", train_full_baseline, corpus, cfg)
    return result.model, result.stats.train_seconds


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(),
              help="Model file from `train`.")
@click.option("--input", "input_path", required=True, type=click.Path(),
              help="Documents to classify (corpus file).")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Predictions file to write.")
@click.option("--k", type=int, default=5, show_default=True,
              help="Neighbors consulted per document.")
@click.option("--weight-mode",
              type=click.Choice([m.value for m in WeightMode]),
              default=WeightMode.RANK.value, show_default=True,
              help="Neighbor vote weighting.")
@click.option("--threads", type=int, default=1, show_default=True,
              help="Worker threads; results do not depend on this.")
@click.option("--baseline-full-knn", is_flag=True,
              help="Classify with every training vector instead of the "
                   "condensed representatives.")
@click.option("--corpus", "corpus_path", type=click.Path(), default=None,
              help="Training corpus (required with --baseline-full-knn).")
@_cli_errors
def predict(model_path, input_path, out_path, k, weight_mode, threads,
            baseline_full_knn, corpus_path):
    """Classify documents and write one JSON record per line."""
    model, _ = _resolve_model(model_path, baseline_full_knn, corpus_path)
    docs = _staged("load", load_corpus, input_path)
    mode = WeightMode(weight_mode)
    started = time.perf_counter()
    predictions = _staged(
        "classify", classify_corpus, model, docs, k, mode, threads
    )
    elapsed = time.perf_counter() - started
    _staged("save", _write_predictions, out_path, predictions)
    click.echo(
        f"classified {len(predictions)} documents in {elapsed:.3f}s "
        f"({len(model.representatives)} representatives, "
        f"k={k}, weight-mode={mode.value})"
    )
    click.echo(f"wrote {out_path}")


@main.command(name="evaluate")
@click.option("--model", "model_path", required=True, type=click.Path(),
              help="Model file from `train`.")
@click.option("--input", "input_path", required=True, type=click.Path(),
              help="Labeled corpus; its test-split documents are scored.")
@click.option("--k", type=int, default=5, show_default=True,
              help="Neighbors consulted per document.")
@click.option("--weight-mode",
              type=click.Choice([m.value for m in WeightMode]),
              default=WeightMode.RANK.value, show_default=True,
              help="Neighbor vote weighting.")
@click.option("--threads", type=int, default=1, show_default=True,
              help="Worker threads; results do not depend on this.")
@click.option("--baseline-full-knn", is_flag=True,
              help="Score the uncondensed kNN instead of the condensed model.")
@click.option("--corpus", "corpus_path", type=click.Path(), default=None,
              help="Training corpus (required with --baseline-full-knn).")
@click.option("--predictions-out", type=click.Path(), default=None,
              help="Also write the predictions file.")
@click.option("--report-out", type=click.Path(), default=None,
              help="Write the full report to this file.")
@click.option("--report-format", type=click.Choice(["json", "tsv"]),
              default="json", show_default=True,
              help="Format of --report-out.")
@_cli_errors
def evaluate_cmd(model_path, input_path, k, weight_mode, threads,
                 baseline_full_knn, corpus_path, predictions_out,
                 report_out, report_format):
    """Classify the test split and print precision/recall/F1."""
    model, train_seconds = _resolve_model(
        model_path, baseline_full_knn, corpus_path
    )
    corpus = _staged("load", load_corpus, input_path)
    test_docs = [doc for doc in corpus if doc.split is Split.TEST]
    if not test_docs:
        raise EmptyResult("no test-split documents in input", stage="evaluate")
    restricted, dropped = restrict_to_categories(
        Corpus(tuple(test_docs)), set(model.categories)
    )
    if len(restricted) == 0:
        raise EmptyResult(
            "no test document carries a category the model knows",
            stage="evaluate",
        )
    mode = WeightMode(weight_mode)
    started = time.perf_counter()
    predictions = _staged(
        "classify", classify_corpus, model, restricted, k, mode, threads
    )
    elapsed = time.perf_counter() - started
    if predictions_out:
        _staged("save", _write_predictions, predictions_out, predictions)
    predicted = {p.doc_id: p.predicted for p in predictions}
    gold = {doc.id: doc.labels for doc in restricted}
    report = _staged("evaluate", evaluate, predicted, gold)
    report.timings["test_seconds"] = elapsed
    if train_seconds is not None:
        report.timings["train_seconds"] = train_seconds
    if dropped:
        click.echo(f"skipped {dropped} documents with no model category", err=True)
    click.echo(format_table(report))
    if report_out:
        body = (
            format_tsv(report)
            if report_format == "tsv"
            else report.to_json() + "\n"
        )
        tmp = f"{report_out}.tmp.{os.getpid()}"
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(body)
            os.replace(tmp, report_out)
        except OSError as exc:
            raise IoFailure(
                f"cannot write report {report_out}: {exc}", stage="save"
            ) from exc
        click.echo(f"wrote {report_out}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(),
              help="Labeled corpus with train and test splits.")
@click.option("--k", type=int, default=5, show_default=True,
              help="Neighbors consulted per document.")
@click.option("--weight-mode",
              type=click.Choice([m.value for m in WeightMode]),
              default=WeightMode.RANK.value, show_default=True,
              help="Weighting used by the weighted variant.")
@click.option("--repetitions", type=int, default=3, show_default=True,
              help="Timing repetitions per method.")
@_config_options
@_cli_errors
def bench(corpus_path, k, weight_mode, repetitions, config_path, **flags):
    """Time full kNN against the condensed classifier on one corpus."""
    if repetitions < 1:
        raise InputError("--repetitions must be >= 1", stage="bench")
    cfg = _build_config(config_path, flags)
    corpus = _staged("load", load_corpus, corpus_path)
    mode = WeightMode(weight_mode)
    methods = [
        ("full-knn", train_full_baseline, WeightMode.NONE),
        ("condensed-knn", train_pipeline, WeightMode.NONE),
        (f"condensed-knn+{mode.value}", train_pipeline, mode),
    ]
    rows = []
    for name, trainer, vote_mode in methods:
        train_times, test_times, accuracies = [], [], []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            result = _staged("train", trainer, corpus, cfg)
            train_times.append(time.perf_counter() - t0)
            test_corpus = result.test
            t0 = time.perf_counter()
            predictions = _staged(
                "classify", classify_corpus, result.model, test_corpus,
                k, vote_mode, cfg.threads,
            )
            test_times.append(time.perf_counter() - t0)
            predicted = {p.doc_id: p.predicted for p in predictions}
            gold = {doc.id: doc.labels for doc in test_corpus}
            accuracies.append(_staged("evaluate", evaluate, predicted, gold).accuracy)
        rows.append((name, train_times, test_times, accuracies[0]))

    def stat(values):
        mean = statistics.fmean(values)
        var = statistics.pvariance(values) if len(values) > 1 else 0.0
        return f"{mean:.3f}s (var {var:.6f})"

    click.echo(
        f"# {repetitions} repetitions per method; "
        "mean and population variance of wall-clock seconds"
    )
    header = ("method", "train", "test", "accuracy")
    table = [header]
    for name, train_times, test_times, accuracy in rows:
        table.append((name, stat(train_times), stat(test_times), f"{accuracy:.4f}"))
    widths = [max(len(row[i]) for row in table) for i in range(4)]
    for row in table:
        click.echo(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            ).rstrip()
        )


if __name__ == "__main__":
    main()
