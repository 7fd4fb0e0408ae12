"""Command-line entry points for the pipeline stages."""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import synth as synth_mod
from .corpus import SfTypeInventory, load_documents, load_labels, save_documents, save_labels
from .evaluate import evaluate as evaluate_scores
from .features import Vocabulary, build_vocab, featurize as featurize_tokens
from .fusion import FusionWeights, fuse as fuse_matrices, standardize, tune_weights
from .pipeline import StreamSpec, learning_curve, train_stream
from .select import rank_for_annotation
from .service import AnnotationSession, ServiceConfig, create_app
from .svm import ScoreMatrix, TrainConfig, load_model, save_model, score_documents
from .translate import load_table, save_table, translate_corpus_stream


def _parse_stream_spec(text: str) -> StreamSpec:
    """Parse "stream", "stream:n" or "stream:n:min_df"."""
    parts = text.split(":")
    if len(parts) == 1:
        return StreamSpec(stream_id=parts[0])
    if len(parts) == 2:
        return StreamSpec(stream_id=parts[0], n=int(parts[1]))
    if len(parts) == 3:
        return StreamSpec(stream_id=parts[0], n=int(parts[1]), min_df=int(parts[2]))
    raise click.BadParameter(f"bad stream spec {text!r}")


def _inventory_from(scores: ScoreMatrix, inventory_path: str | None) -> SfTypeInventory:
    if inventory_path:
        return SfTypeInventory.load(inventory_path)
    return SfTypeInventory(tuple(scores.type_ids))


@click.group()
def main():
    """Situation-frame classification pipeline."""


@main.command()
@click.option("--docs", "num_docs", type=int, default=1000, show_default=True)
@click.option("--types", "num_types", type=int, default=11, show_default=True)
@click.option("--vocab", "vocab_size", type=int, default=500, show_default=True)
@click.option("--tokens", nargs=2, type=int, default=(20, 60), show_default=True)
@click.option("--prevalence", type=float, default=0.1, show_default=True)
@click.option("--concentration", type=float, default=0.1, show_default=True)
@click.option("--background-mix", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def synth(num_docs, num_types, vocab_size, tokens, prevalence, concentration,
          background_mix, seed, out_dir):
    """Generate a synthetic corpus with oracle truth and a translation table."""
    config = synth_mod.SynthConfig(
        num_types=num_types,
        vocab_size=vocab_size,
        docs=num_docs,
        tokens_per_doc=tuple(tokens),
        type_prevalence=tuple([prevalence] * num_types),
        topic_word_concentration=concentration,
        background_mix=background_mix,
        seed=seed,
    )
    corpus, truth, table = synth_mod.generate(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_documents(corpus, out / "docs.jsonl")
    save_labels(truth, out / "truth.jsonl")
    save_table(table, out / "table.tsv")
    truth.inventory.save(out / "inventory.json")
    click.echo(f"wrote {len(corpus)} docs to {out}")


@main.command()
@click.option("--table", "table_path", type=click.Path(exists=True), required=True)
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--from", "from_stream", default="asr", show_default=True)
@click.option("--to", "to_stream", default="eng", show_default=True)
@click.option("--k", type=int, default=4, show_default=True)
@click.option("--oov", type=click.Choice(["drop", "passthrough"]), default="drop", show_default=True)
def translate(table_path, in_path, out_path, from_stream, to_stream, k, oov):
    """Attach a translated token stream to every document."""
    corpus = load_documents(in_path)
    table = load_table(table_path)
    translate_corpus_stream(corpus, table, from_stream, to_stream, k=k, oov=oov)
    save_documents(corpus, out_path)
    click.echo(f"translated {from_stream} -> {to_stream} for {len(corpus)} docs")


@main.command()
@click.option("--docs", "docs_path", type=click.Path(exists=True), required=True)
@click.option("--stream", default="asr", show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--min-df", type=int, default=1, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def featurize(docs_path, stream, n, min_df, out_path):
    """Build and save the n-gram vocabulary for one stream."""
    corpus = load_documents(docs_path)
    vocab = build_vocab(corpus, stream, n=n, min_df=min_df)
    vocab.save(out_path)
    click.echo(f"vocabulary of {len(vocab)} terms over {vocab.num_docs} docs")


@main.command()
@click.option("--docs", "docs_path", type=click.Path(exists=True), required=True)
@click.option("--labels", "labels_path", type=click.Path(exists=True), required=True)
@click.option("--inventory", "inventory_path", type=click.Path(exists=True), default=None)
@click.option("--stream", default="asr", show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--min-df", type=int, default=1, show_default=True)
@click.option("--lambda", "lambda_", type=float, default=1e-4, show_default=True)
@click.option("--epochs", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def train(docs_path, labels_path, inventory_path, stream, n, min_df, lambda_, epochs, seed, out_dir):
    """Train one-vs-rest SVMs for one stream; writes vocab and model files."""
    corpus = load_documents(docs_path)
    inventory = (
        SfTypeInventory.load(inventory_path) if inventory_path else SfTypeInventory.default()
    )
    labels = load_labels(labels_path, inventory)
    config = TrainConfig(lambda_=lambda_, epochs=epochs, seed=seed)
    spec = StreamSpec(stream_id=stream, n=n, min_df=min_df)
    sm = train_stream(corpus, labels, inventory, spec, config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sm.vocab.save(out / f"vocab_{stream}.json")
    for model in sm.models:
        save_model(model, out / f"{stream}_{model.sf_type}.json")
    degenerate = [m.sf_type for m in sm.models if m.degenerate]
    click.echo(
        f"trained {len(sm.models)} models on {len(labels)} labels"
        + (f" (degenerate: {', '.join(degenerate)})" if degenerate else "")
    )


@main.command()
@click.option("--docs", "docs_path", type=click.Path(exists=True), required=True)
@click.option("--models", "models_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--stream", default="asr", show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def score(docs_path, models_dir, stream, out_path):
    """Score all documents with a trained stream's models."""
    corpus = load_documents(docs_path)
    models_dir = Path(models_dir)
    vocab = Vocabulary.load(models_dir / f"vocab_{stream}.json")
    model_paths = sorted(models_dir.glob(f"{stream}_*.json"))
    if not model_paths:
        raise click.ClickException(f"no model files for stream {stream} in {models_dir}")
    models = [load_model(p) for p in model_paths]
    feats = [featurize_tokens(d.tokens(stream), vocab) for d in corpus]
    matrix = score_documents(models, feats, corpus.doc_ids(), source_tag=stream)
    matrix.save(out_path)
    click.echo(f"scored {len(corpus)} docs x {len(models)} types")


@main.command()
@click.option("--scores", "score_paths", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--weights", "weights_path", type=click.Path(exists=True), required=True)
@click.option("--standardize/--no-standardize", "do_standardize", default=False, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def fuse(score_paths, weights_path, do_standardize, out_path):
    """Weighted linear combination of score matrices."""
    matrices = [ScoreMatrix.load(p) for p in score_paths]
    if do_standardize:
        matrices = [standardize(m) for m in matrices]
    weights = FusionWeights.load(weights_path)
    fused = fuse_matrices(matrices, weights)
    fused.save(out_path)
    click.echo(f"fused {len(matrices)} matrices")


@main.command("tune-weights")
@click.option("--scores", "score_paths", type=click.Path(exists=True), multiple=True, required=True)
@click.option("--dev-labels", "dev_labels_path", type=click.Path(exists=True), required=True)
@click.option("--inventory", "inventory_path", type=click.Path(exists=True), default=None)
@click.option("--step", type=float, default=0.1, show_default=True)
@click.option("--standardize/--no-standardize", "do_standardize", default=True, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def tune_weights_cmd(score_paths, dev_labels_path, inventory_path, step, do_standardize, out_path):
    """Grid-search fusion weights maximizing macro mean type AP on dev labels."""
    matrices = [ScoreMatrix.load(p) for p in score_paths]
    if do_standardize:
        matrices = [standardize(m) for m in matrices]
    inventory = _inventory_from(matrices[0], inventory_path)
    dev_labels = load_labels(dev_labels_path, inventory)
    weights = tune_weights(matrices, dev_labels, grid_step=step)
    weights.save(out_path)
    click.echo(f"tuned weights: {weights.normalized().weights}")


@main.command()
@click.option("--scores", "scores_path", type=click.Path(exists=True), required=True)
@click.option("--labeled", "labels_path", type=click.Path(exists=True), required=True)
@click.option("--inventory", "inventory_path", type=click.Path(exists=True), default=None)
@click.option("--budget", type=int, required=True)
@click.option("--strategy", type=click.Choice(["per_type_top", "random"]), default="per_type_top",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
def select(scores_path, labels_path, inventory_path, budget, strategy, seed, out_path):
    """Rank unlabeled documents for annotation."""
    matrix = ScoreMatrix.load(scores_path)
    inventory = _inventory_from(matrix, inventory_path)
    labeled = load_labels(labels_path, inventory).labeled_ids()
    batch = rank_for_annotation(matrix, labeled, budget, strategy=strategy, seed=seed)
    payload = {
        "doc_ids": batch.doc_ids,
        "rationale": {
            d: {"sf_type": r[0], "score": r[1]} for d, r in batch.rationale.items()
        },
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


@main.command("evaluate")
@click.option("--scores", "scores_path", type=click.Path(exists=True), required=True)
@click.option("--truth", "truth_path", type=click.Path(exists=True), required=True)
@click.option("--inventory", "inventory_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None)
def evaluate_cmd(scores_path, truth_path, inventory_path, out_path):
    """Two-layer AP report for a score matrix against truth labels."""
    matrix = ScoreMatrix.load(scores_path)
    inventory = _inventory_from(matrix, inventory_path)
    truth = load_labels(truth_path, inventory)
    report = evaluate_scores(matrix, truth)
    if out_path:
        report.save(out_path)
    click.echo(
        f"mean_type_ap={report.mean_type_ap} relevance_ap={report.relevance_ap} "
        f"docs={report.num_docs} relevant={report.num_relevant}"
    )


@main.command("learning-curve")
@click.option("--docs", "docs_path", type=click.Path(exists=True), required=True)
@click.option("--truth", "truth_path", type=click.Path(exists=True), required=True)
@click.option("--inventory", "inventory_path", type=click.Path(exists=True), default=None)
@click.option("--stream", "stream_specs", multiple=True, default=("asr",), show_default=True,
              help="stream id, optionally stream:n:min_df; repeatable")
@click.option("--grid", default="50,100,200", show_default=True)
@click.option("--folds", type=int, default=10, show_default=True)
@click.option("--seeds", default="0", show_default=True)
@click.option("--lambda", "lambda_", type=float, default=1e-4, show_default=True)
@click.option("--epochs", type=int, default=20, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--csv", "csv_path", type=click.Path(), default=None)
def learning_curve_cmd(docs_path, truth_path, inventory_path, stream_specs, grid, folds,
                       seeds, lambda_, epochs, out_path, csv_path):
    """Cross-validated AP as a function of the number of training labels."""
    corpus = load_documents(docs_path)
    inventory = (
        SfTypeInventory.load(inventory_path) if inventory_path else SfTypeInventory.default()
    )
    truth = load_labels(truth_path, inventory)
    specs = [_parse_stream_spec(s) for s in stream_specs]
    label_grid = [int(x) for x in grid.split(",")]
    seed_list = [int(x) for x in seeds.split(",")]
    config = TrainConfig(lambda_=lambda_, epochs=epochs, seed=seed_list[0])
    curve = learning_curve(
        corpus, truth, specs, config, label_grid=label_grid, folds=folds, seeds=seed_list
    )
    curve.save(out_path)
    if csv_path:
        curve.save_csv(csv_path)
    for p in curve.points:
        click.echo(
            f"labels={p.num_labels} mean_type_ap={p.mean_type_ap:.4f} "
            f"relevance_ap={p.relevance_ap:.4f} stderr={p.stderr:.4f}"
        )


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--labels", "labels_path", type=click.Path(), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--oracle-labels", "oracle_path", type=click.Path(exists=True), default=None)
@click.option("--model-dir", type=click.Path(file_okay=False), default=None)
@click.option("--static-dir", type=click.Path(file_okay=False), default=None)
def serve(port, host, corpus_path, labels_path, config_path, oracle_path, model_dir, static_dir):
    """Run the annotation service."""
    import uvicorn

    config = ServiceConfig.load(config_path)
    corpus = load_documents(corpus_path)
    inventory = (
        SfTypeInventory.load(config.inventory_path)
        if config.inventory_path
        else SfTypeInventory.default()
    )
    oracle = load_labels(oracle_path, inventory) if oracle_path else None
    session = AnnotationSession(
        corpus=corpus,
        inventory=inventory,
        label_log=labels_path,
        config=config,
        oracle_labels=oracle,
        model_dir=model_dir,
    )
    if static_dir is None and Path("frontend/dist").is_dir():
        static_dir = "frontend/dist"
    app = create_app(session, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
