#!/usr/bin/env python3
"""Learning-curve experiment on a synthetic corpus.

Generates a moderately noisy corpus, sweeps the number of training labels
under k-fold cross validation, and writes the curve as JSON + CSV (and a PNG
when --plot is given).
"""

import argparse
from pathlib import Path

from sfpipe import synth
from sfpipe.pipeline import StreamSpec, learning_curve
from sfpipe.svm import TrainConfig


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=1100)
    parser.add_argument("--types", type=int, default=11)
    parser.add_argument("--vocab", type=int, default=600)
    parser.add_argument("--background-mix", type=float, default=0.55)
    parser.add_argument("--concentration", type=float, default=0.2)
    parser.add_argument("--grid", default="50,100,200,400,800")
    parser.add_argument("--folds", type=int, default=5)
    parser.add_argument("--seeds", default="0,1,2,3,4")
    parser.add_argument("--epochs", type=int, default=6)
    parser.add_argument("--corpus-seed", type=int, default=42)
    parser.add_argument("--out", type=Path, default=Path("learning_curve"))
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    config = synth.SynthConfig(
        num_types=args.types,
        vocab_size=args.vocab,
        docs=args.docs,
        tokens_per_doc=(20, 40),
        type_prevalence=tuple([0.12] * args.types),
        topic_word_concentration=args.concentration,
        background_mix=args.background_mix,
        seed=args.corpus_seed,
    )
    corpus, truth, _ = synth.generate(config)
    curve = learning_curve(
        corpus,
        truth,
        [StreamSpec("asr")],
        TrainConfig(lambda_=1e-4, epochs=args.epochs, seed=0),
        label_grid=[int(x) for x in args.grid.split(",")],
        folds=args.folds,
        seeds=[int(x) for x in args.seeds.split(",")],
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    curve.save(args.out.with_suffix(".json"))
    curve.save_csv(args.out.with_suffix(".csv"))
    for p in curve.points:
        print(
            f"labels={p.num_labels:5d}  mean_type_ap={p.mean_type_ap:.4f} "
            f"(+/- {p.stderr:.4f})  relevance_ap={p.relevance_ap:.4f}"
        )
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs = [p.num_labels for p in curve.points]
        ys = [p.mean_type_ap for p in curve.points]
        errs = [p.stderr for p in curve.points]
        plt.errorbar(xs, ys, yerr=errs, marker="o", label="mean type AP")
        plt.plot(xs, [p.relevance_ap for p in curve.points], marker="s", label="relevance AP")
        plt.xscale("log")
        plt.xlabel("training labels")
        plt.ylabel("average precision")
        plt.legend()
        plt.grid(alpha=0.3)
        plt.savefig(args.out.with_suffix(".png"), dpi=150, bbox_inches="tight")
        print(f"wrote {args.out.with_suffix('.png')}")


if __name__ == "__main__":
    main()
