import json

import pytest
from click.testing import CliRunner

from sfpipe.cli import main
from sfpipe.corpus import load_documents
from sfpipe.svm import ScoreMatrix


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


@pytest.fixture
def synth_dir(runner, tmp_path):
    out = tmp_path / "data"
    run_ok(
        runner,
        [
            "synth", "--docs", "120", "--types", "3", "--vocab", "60",
            "--tokens", "8", "16", "--prevalence", "0.4",
            "--concentration", "0.05", "--background-mix", "0.1",
            "--seed", "3", "--out", str(out),
        ],
    )
    return out


def test_synth_writes_all_artifacts(synth_dir):
    for name in ("docs.jsonl", "truth.jsonl", "table.tsv", "inventory.json"):
        assert (synth_dir / name).exists()
    corpus = load_documents(synth_dir / "docs.jsonl")
    assert len(corpus) == 120


def test_full_pipeline_via_cli(runner, synth_dir, tmp_path):
    models = tmp_path / "models"
    run_ok(
        runner,
        [
            "train", "--docs", str(synth_dir / "docs.jsonl"),
            "--labels", str(synth_dir / "truth.jsonl"),
            "--inventory", str(synth_dir / "inventory.json"),
            "--stream", "asr", "--lambda", "1e-4", "--epochs", "5",
            "--seed", "7", "--out", str(models),
        ],
    )
    assert (models / "vocab_asr.json").exists()
    assert len(list(models.glob("asr_*.json"))) == 3

    scores = tmp_path / "scores.json"
    run_ok(
        runner,
        [
            "score", "--docs", str(synth_dir / "docs.jsonl"),
            "--models", str(models), "--stream", "asr", "--out", str(scores),
        ],
    )
    matrix = ScoreMatrix.load(scores)
    assert matrix.scores.shape == (120, 3)

    result = run_ok(
        runner,
        [
            "evaluate", "--scores", str(scores),
            "--truth", str(synth_dir / "truth.jsonl"),
            "--out", str(tmp_path / "report.json"),
        ],
    )
    assert "mean_type_ap" in result.output
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["mean_type_ap"] > 0.9  # in-sample on separable data

    batch_path = tmp_path / "batch.json"
    empty_labels = tmp_path / "empty.jsonl"
    empty_labels.write_text("")
    run_ok(
        runner,
        [
            "select", "--scores", str(scores), "--labeled", str(empty_labels),
            "--budget", "5", "--strategy", "per_type_top", "--out", str(batch_path),
        ],
    )
    batch = json.loads(batch_path.read_text())
    assert len(batch["doc_ids"]) == 5


def test_translate_adds_stream(runner, synth_dir, tmp_path):
    out = tmp_path / "translated.jsonl"
    run_ok(
        runner,
        [
            "translate", "--table", str(synth_dir / "table.tsv"),
            "--in", str(synth_dir / "docs.jsonl"), "--out", str(out),
            "--from", "asr", "--to", "eng", "--k", "2",
        ],
    )
    corpus = load_documents(out)
    doc = corpus[0]
    assert len(doc.tokens("eng")) == 2 * len(doc.tokens("asr"))


def test_featurize_writes_vocab(runner, synth_dir, tmp_path):
    out = tmp_path / "vocab.json"
    run_ok(
        runner,
        [
            "featurize", "--docs", str(synth_dir / "docs.jsonl"),
            "--stream", "asr", "--n", "1", "--min-df", "2", "--out", str(out),
        ],
    )
    vocab = json.loads(out.read_text())
    assert vocab["min_df"] == 2
    assert vocab["num_docs"] == 120


def test_fuse_and_tune_weights(runner, synth_dir, tmp_path):
    models = tmp_path / "models"
    run_ok(
        runner,
        [
            "train", "--docs", str(synth_dir / "docs.jsonl"),
            "--labels", str(synth_dir / "truth.jsonl"),
            "--inventory", str(synth_dir / "inventory.json"),
            "--stream", "asr", "--epochs", "4", "--out", str(models),
        ],
    )
    scores = tmp_path / "s.json"
    run_ok(
        runner,
        ["score", "--docs", str(synth_dir / "docs.jsonl"), "--models", str(models),
         "--stream", "asr", "--out", str(scores)],
    )
    weights_path = tmp_path / "w.json"
    run_ok(
        runner,
        [
            "tune-weights", "--scores", str(scores),
            "--dev-labels", str(synth_dir / "truth.jsonl"),
            "--inventory", str(synth_dir / "inventory.json"),
            "--step", "0.5", "--out", str(weights_path),
        ],
    )
    weights = json.loads(weights_path.read_text())
    assert weights["weights"] == {"asr": 1.0}

    fused = tmp_path / "fused.json"
    run_ok(
        runner,
        ["fuse", "--scores", str(scores), "--weights", str(weights_path),
         "--out", str(fused)],
    )
    assert ScoreMatrix.load(fused).source_tag == "fused"


def test_learning_curve_cli(runner, synth_dir, tmp_path):
    out = tmp_path / "curve.json"
    csv_out = tmp_path / "curve.csv"
    result = run_ok(
        runner,
        [
            "learning-curve", "--docs", str(synth_dir / "docs.jsonl"),
            "--truth", str(synth_dir / "truth.jsonl"),
            "--inventory", str(synth_dir / "inventory.json"),
            "--stream", "asr", "--grid", "10,30", "--folds", "3",
            "--seeds", "0", "--epochs", "4",
            "--out", str(out), "--csv", str(csv_out),
        ],
    )
    assert "labels=30" in result.output
    assert csv_out.read_text().startswith("num_labels,")
