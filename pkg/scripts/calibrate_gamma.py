"""Sweep gamma over several seeds and database mixes and report the bootstrap-closest candidate.

    python scripts/calibrate_gamma.py [--data data/seed] [--gammas 2 3 5 10] [--seeds 0 1 2 3]

``--db-mix uniform`` draws the target database uniformly per sample (the
synthesizer's default).  ``--db-mix corpus`` gives each database a share of the
synthetic queries proportional to its share of the seed corpus.
"""
import argparse
import json
import logging
from collections import Counter
from dataclasses import replace
from pathlib import Path

import numpy as np

from sqlsynth.schema import load_content, load_schemas
from sqlsynth.stats import bootstrap_report, recommend, table_counts
from sqlsynth.synth import SynthesisConfig, synthesize_dataset
from sqlsynth.template import build_pool, load_corpus


def synthetic_counts(pool, schemas, contents, corpus, config, mix):
    if mix == "uniform":
        examples, _ = synthesize_dataset(pool, schemas, contents, config)
    else:
        share = Counter(r["db_id"] for r in corpus)
        total = sum(share.values())
        examples = []
        for k, db in enumerate(sorted(share)):
            n = round(config.total_samples * share[db] / total)
            cfg = replace(config, total_samples=n, seed=config.seed + 7919 * (k + 1))
            examples += synthesize_dataset(pool, {db: schemas[db]}, contents, cfg)[0]
    return table_counts((e.to_json(with_ir=False) for e in examples), schemas, "sql").counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", default="data/seed")
    ap.add_argument("--gammas", type=float, nargs="+", default=[2.0, 3.0, 5.0, 10.0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--db-mix", choices=("uniform", "corpus"), default="uniform")
    ap.add_argument("--samples", type=int, default=2000, help="synthetic queries per gamma and seed")
    ap.add_argument("--resample-size", type=int, default=500)
    ap.add_argument("--repetitions", type=int, default=100)
    ap.add_argument("--out", help="JSON summary")
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    data = Path(args.data)
    schemas = load_schemas(data / "tables.json")
    corpus = load_corpus(data / "train.json")
    pool, _ = build_pool(corpus, schemas)
    contents = {db: load_content(data / "content", s) for db, s in schemas.items()}
    real = table_counts(corpus, schemas).counts

    rows = []
    for seed in args.seeds:
        ref = bootstrap_report("reference", real, args.resample_size, args.repetitions, seed)
        means = {}
        for k, g in enumerate(args.gammas):
            cfg = SynthesisConfig(gamma=g, seed=seed, total_samples=args.samples, with_ir=False)
            counts = synthetic_counts(pool, schemas, contents, corpus, cfg, args.db_mix)
            means[g] = bootstrap_report(f"gamma={g:g}", counts, args.resample_size, args.repetitions,
                                        seed + k + 1).mean
        best, _ = recommend(ref.mean, means)
        rows.append({"seed": seed, "reference": ref.mean, "means": means, "recommended": best})
        cells = "  ".join(f"{g:g}:{m:.3f}" for g, m in means.items())
        print(f"seed {seed}: reference {ref.mean:.3f}  {cells}  -> {best:g}")

    avg = {g: float(np.mean([r["means"][g] for r in rows])) for g in args.gammas}
    ref_avg = float(np.mean([r["reference"] for r in rows]))
    print(f"average: reference {ref_avg:.3f}  " + "  ".join(f"{g:g}:{m:.3f}" for g, m in avg.items()))
    print("recommendations:", dict(Counter(r["recommended"] for r in rows)))
    if args.out:
        summary = {"db_mix": args.db_mix, "runs": [{**r, "means": {str(g): m for g, m in r["means"].items()}}
                                                   for r in rows]}
        Path(args.out).write_text(json.dumps(summary, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
