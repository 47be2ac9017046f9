"""Table-count statistics, bootstrap histograms and gamma calibration."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SqlSynthError
from .schema import DatabaseContent, Schema
from .sql import parse_sql, table_count
from .synth import SynthesisConfig, synthesize_dataset
from .template import TemplatePool

log = logging.getLogger(__name__)


@dataclass
class CountResult:
    counts: list[int] = field(default_factory=list)
    failures: int = 0
    errors: dict = field(default_factory=dict)


def table_counts(records: Iterable[Mapping], schemas: Mapping[str, Schema], sql_key: str = "query") -> CountResult:
    """Table count of every record that parses; failures are counted by reason."""
    out = CountResult()
    for rec in records:
        schema = schemas.get(rec.get("db_id"))
        sql = rec.get(sql_key)
        if schema is None or sql is None:
            out.failures += 1
            out.errors["unknown_db" if schema is None else "missing_sql"] = out.errors.get(
                "unknown_db" if schema is None else "missing_sql", 0) + 1
            continue
        try:
            out.counts.append(table_count(parse_sql(sql, schema)))
        except SqlSynthError as exc:
            out.failures += 1
            out.errors[type(exc).__name__] = out.errors.get(type(exc).__name__, 0) + 1
    return out


def count_histogram(counts: Sequence[int]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for c in counts:
        hist[c] = hist.get(c, 0) + 1
    return dict(sorted(hist.items()))


def bootstrap_means(counts: Sequence[int], resample_size: int, repetitions: int, rng: np.random.Generator):
    """Means of ``repetitions`` resamples (with replacement) of ``resample_size`` counts.

    Returns the means and the number of individual draws made.
    """
    data = np.asarray(counts, dtype=float)
    if data.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    idx = rng.integers(0, data.size, size=(repetitions, resample_size))
    return data[idx].mean(axis=1), int(idx.size)


@dataclass
class TableCountReport:
    label: str
    n_queries: int
    resample_size: int
    repetitions: int
    draws: int
    means: np.ndarray = field(repr=False)
    bins: int = 20

    @property
    def mean(self) -> float:
        return float(self.means.mean())

    @property
    def std(self) -> float:
        return float(self.means.std(ddof=1)) if len(self.means) > 1 else 0.0

    def histogram(self, edges: Sequence[float] | None = None) -> dict:
        counts, edges = np.histogram(self.means, bins=self.bins if edges is None else edges)
        return {"edges": [round(float(e), 6) for e in edges], "counts": [int(c) for c in counts]}

    def to_json(self, edges=None) -> dict:
        return {
            "label": self.label,
            "n_queries": self.n_queries,
            "resample_size": self.resample_size,
            "repetitions": self.repetitions,
            "draws": self.draws,
            "mean": round(self.mean, 6),
            "std": round(self.std, 6),
            "histogram": self.histogram(edges),
        }


def bootstrap_report(label: str, counts: Sequence[int], resample_size: int, repetitions: int,
                     seed: int, bins: int = 20) -> TableCountReport:
    rng = np.random.default_rng(seed)
    means, draws = bootstrap_means(counts, resample_size, repetitions, rng)
    if draws != resample_size * repetitions:
        raise AssertionError("bootstrap draw accounting mismatch")
    return TableCountReport(label, len(counts), resample_size, repetitions, draws, means, bins)


@dataclass
class CalibrationResult:
    reference: TableCountReport
    candidates: dict[float, TableCountReport]
    distance: dict[float, float]
    recommended: float
    baseline: TableCountReport | None = None

    def shared_edges(self, bins: int = 20):
        reports = [self.reference, *self.candidates.values()] + ([self.baseline] if self.baseline else [])
        lo = min(float(r.means.min()) for r in reports)
        hi = max(float(r.means.max()) for r in reports)
        if hi <= lo:
            hi = lo + 1e-9
        return np.linspace(lo, hi, bins + 1)

    def to_json(self) -> dict:
        edges = self.shared_edges()
        out = {
            "metric": "absolute difference of bootstrap means",
            "recommended_gamma": self.recommended,
            "distance": {str(g): round(d, 6) for g, d in self.distance.items()},
            "reference": self.reference.to_json(edges),
            "candidates": {str(g): r.to_json(edges) for g, r in self.candidates.items()},
        }
        if self.baseline is not None:
            out["uniform_baseline"] = self.baseline.to_json(edges)
        return out


def recommend(reference_mean: float, candidate_means: Mapping[float, float]) -> tuple[float, dict[float, float]]:
    """Candidate whose mean is closest to the reference; ties go to the first listed."""
    distance = {g: abs(m - reference_mean) for g, m in candidate_means.items()}
    best = None
    for g, d in distance.items():
        if best is None or d < distance[best]:
            best = g
    return best, distance


def synthetic_counts(pool: TemplatePool, schemas: Mapping[str, Schema],
                     contents: Mapping[str, DatabaseContent | None] | None, config: SynthesisConfig) -> list[int]:
    examples, _ = synthesize_dataset(pool, schemas, contents, replace(config, with_ir=False))
    return table_counts((e.to_json(with_ir=False) for e in examples), schemas, sql_key="sql").counts


def calibrate_gamma(pool: TemplatePool, schemas: Mapping[str, Schema], reference_counts: Sequence[int],
                    gammas: Sequence[float], contents=None, base_config: SynthesisConfig | None = None,
                    resample_size: int = 7000, repetitions: int = 1000, working_size: int | None = None,
                    seed: int = 0, uniform_baseline: bool = False, bins: int = 20) -> CalibrationResult:
    """Bootstrap the mean table count for each candidate gamma and pick the closest to the reference."""
    if not gammas:
        raise ValueError("at least one candidate gamma is required")
    base = base_config or SynthesisConfig()
    size = working_size or resample_size
    reference = bootstrap_report("reference", reference_counts, resample_size, repetitions, seed, bins)
    reports = {}
    for k, g in enumerate(gammas):
        cfg = replace(base, gamma=g, total_samples=size, samples_per_db=None, sampler="weighted")
        counts = synthetic_counts(pool, schemas, contents, cfg)
        reports[g] = bootstrap_report(f"gamma={g:g}", counts, resample_size, repetitions, seed + k + 1, bins)
        log.info("gamma %g: mean table count %.4f", g, reports[g].mean)
    recommended, distance = recommend(reference.mean, {g: r.mean for g, r in reports.items()})
    baseline = None
    if uniform_baseline:
        cfg = replace(base, total_samples=size, samples_per_db=None, sampler="uniform")
        counts = synthetic_counts(pool, schemas, contents, cfg)
        baseline = bootstrap_report("uniform", counts, resample_size, repetitions, seed + len(gammas) + 1, bins)
    return CalibrationResult(reference, reports, distance, recommended, baseline)
