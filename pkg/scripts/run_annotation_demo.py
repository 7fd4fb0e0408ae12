#!/usr/bin/env python3
"""Set up a synthetic annotation session workspace and launch the service.

Creates docs/truth/table/inventory plus a service config under --workdir,
then (unless --no-serve) starts the annotation service with oracle labels
available, so /api/oracle/labels can auto-answer batches for demos.
"""

import argparse
import json
import subprocess
import sys
from pathlib import Path


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", type=Path, default=Path("demo_session"))
    parser.add_argument("--docs", type=int, default=400)
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--no-serve", action="store_true")
    args = parser.parse_args()

    data = args.workdir / "data"
    subprocess.run(
        [
            sys.executable, "-m", "sfpipe.cli", "synth",
            "--docs", str(args.docs), "--types", "11", "--vocab", "500",
            "--tokens", "15", "30", "--prevalence", "0.1",
            "--concentration", "0.05", "--background-mix", "0.2",
            "--seed", "7", "--out", str(data),
        ],
        check=True,
    )
    config = {
        "streams": [{"stream": "asr"}],
        "lambda": 1e-4,
        "epochs": 10,
        "seed": 1,
        "selection": {"strategy": "per_type_top"},
        "inventory": str(data / "inventory.json"),
    }
    config_path = args.workdir / "config.json"
    config_path.write_text(json.dumps(config, indent=2))
    labels_path = args.workdir / "labels.jsonl"
    print(f"workspace ready under {args.workdir}/")

    serve_cmd = [
        sys.executable, "-m", "sfpipe.cli", "serve",
        "--port", str(args.port),
        "--corpus", str(data / "docs.jsonl"),
        "--labels", str(labels_path),
        "--config", str(config_path),
        "--oracle-labels", str(data / "truth.jsonl"),
    ]
    if args.no_serve:
        print("launch with:\n  " + " ".join(serve_cmd))
        return
    print(f"serving on http://127.0.0.1:{args.port} (ctrl-c to stop)")
    subprocess.run(serve_cmd)


if __name__ == "__main__":
    main()
