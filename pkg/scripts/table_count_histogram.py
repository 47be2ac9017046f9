"""Bootstrap histogram of mean table counts: seed corpus vs weighted vs uniform sampling.

    python scripts/table_count_histogram.py [--data data/seed] [--gamma 5] [--plot hist.png]

Prints one line per series and optionally writes the JSON report and a figure.
"""
import argparse
import json
import logging
from pathlib import Path

from sqlsynth.schema import load_content, load_schemas
from sqlsynth.stats import calibrate_gamma, table_counts
from sqlsynth.synth import SynthesisConfig
from sqlsynth.template import build_pool, load_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", default="data/seed", help="directory with tables.json, train.json, content/")
    ap.add_argument("--gamma", type=float, default=5.0)
    ap.add_argument("--samples", type=int, default=2000, help="synthetic queries per series")
    ap.add_argument("--resample-size", type=int, default=500)
    ap.add_argument("--repetitions", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="JSON report")
    ap.add_argument("--plot", help="PNG figure (needs matplotlib)")
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    data = Path(args.data)
    schemas = load_schemas(data / "tables.json")
    corpus = load_corpus(data / "train.json")
    pool, _ = build_pool(corpus, schemas)
    contents = {db: load_content(data / "content", s) for db, s in schemas.items()}
    result = calibrate_gamma(
        pool, schemas, table_counts(corpus, schemas).counts, [args.gamma], contents, SynthesisConfig(seed=args.seed),
        resample_size=args.resample_size, repetitions=args.repetitions, working_size=args.samples,
        seed=args.seed, uniform_baseline=True,
    )
    for report in (result.reference, *result.candidates.values(), result.baseline):
        print(f"{report.label:<10} mean {report.mean:.4f}  std {report.std:.4f}  ({report.n_queries} queries)")
    if args.out:
        Path(args.out).write_text(json.dumps(result.to_json(), indent=1) + "\n", encoding="utf-8")
    if args.plot:
        from sqlsynth.plot import plot_calibration

        plot_calibration(result, args.plot)


if __name__ == "__main__":
    main()
