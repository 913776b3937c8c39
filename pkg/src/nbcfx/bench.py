"""Synthetic benchmark: compile, encode and explain random classifiers."""
from __future__ import annotations

import csv
import io
import logging
import random
import time
from dataclasses import asdict, dataclass, fields
from statistics import mean
from typing import Sequence

from .encoder import encode_function
from .errors import NoCounterfactualExists
from .explain import ExplainOptions, explain
from .model import generate_synthetic
from .odd import compile_model, count_zero_paths, negate

__all__ = [
    "BenchRecord",
    "run_bench",
    "summarize",
    "records_to_csv",
    "summary_to_csv",
    "parse_bench_csv",
    "REFERENCE_AVERAGES",
    "DEFAULT_CLAUSE_CAP",
    "MAX_FEATURES",
]

logger = logging.getLogger(__name__)

DEFAULT_CLAUSE_CAP = 10**6
MAX_FEATURES = 25

# Published per-size averages: n -> (obdd nodes, cnf clauses, #mcs)
REFERENCE_AVERAGES = {
    5: (9, 3, 3),
    10: (42, 64, 23),
    16: (370, 2598, 101),
    20: (1020, 27122, 305),
    22: (2546, 123878, 272),
    25: (8626, 684847, 364),
}


@dataclass
class BenchRecord:
    n: int
    seed: int
    obdd_nodes: int
    cnf_clauses: int
    encode_time_ms: float
    mcs_count: int | None
    enumerate_time_ms: float
    status: str = "ok"  # ok | constant | clause_cap


TIMING_COLUMNS = ("encode_time_ms", "enumerate_time_ms")
COLUMNS = tuple(f.name for f in fields(BenchRecord))
SUMMARY_COLUMNS = (
    "n",
    "models",
    "obdd_nodes",
    "cnf_clauses",
    "encode_time_ms",
    "mcs_count",
    "enumerate_time_ms",
)


def _bench_one(n, model_seed, instance, clause_cap):
    model = generate_synthetic(n, model_seed)
    t0 = time.perf_counter()
    d = compile_model(model)
    nodes = d.size()
    neg = negate(d)
    pos_paths, neg_paths = count_zero_paths(d), count_zero_paths(neg)
    if max(pos_paths, neg_paths) > clause_cap:
        logger.warning("n=%d seed=%d: %d clauses exceed cap", n, model_seed, pos_paths)
        return BenchRecord(n, model_seed, nodes, pos_paths, 0.0, None, 0.0, "clause_cap")
    cnf_pos = encode_function(d)
    cnf_neg = encode_function(neg)
    encode_ms = (time.perf_counter() - t0) * 1000.0

    t1 = time.perf_counter()
    try:
        report = explain(model, d, cnf_pos, cnf_neg, instance, ExplainOptions())
        mcs_count, status = len(report.counterfactuals), "ok"
    except NoCounterfactualExists:
        mcs_count, status = 0, "constant"
    enum_ms = (time.perf_counter() - t1) * 1000.0
    return BenchRecord(n, model_seed, nodes, len(cnf_pos), encode_ms, mcs_count, enum_ms, status)


def run_bench(
    sizes: Sequence[int],
    per_size: int,
    seed: int,
    clause_cap: int = DEFAULT_CLAUSE_CAP,
) -> list[BenchRecord]:
    """``per_size`` random models (and one random instance each) per size."""
    sizes = list(sizes)
    if not sizes or any(not 1 <= n <= MAX_FEATURES for n in sizes):
        raise ValueError(f"sizes must lie in 1..{MAX_FEATURES}")
    if per_size < 1:
        raise ValueError("per_size must be >= 1")
    rng = random.Random(seed)
    records = []
    for n in sizes:
        for _ in range(per_size):
            model_seed = rng.randrange(2**31)
            instance = tuple(rng.randint(0, 1) for _ in range(n))
            rec = _bench_one(n, model_seed, instance, clause_cap)
            logger.info("bench %s", rec)
            records.append(rec)
    return records


def summarize(records: Sequence[BenchRecord]) -> list[dict]:
    """Per-size averages, skipping cells aborted by the clause cap."""
    by_size = {}
    for rec in records:
        by_size.setdefault(rec.n, []).append(rec)
    rows = []
    for n in sorted(by_size):
        done = [r for r in by_size[n] if r.status != "clause_cap"]
        row = {"n": n, "models": len(done)}
        for col in SUMMARY_COLUMNS[2:]:
            vals = [getattr(r, col) for r in done if getattr(r, col) is not None]
            row[col] = float(mean(vals)) if vals else None
        rows.append(row)
    return rows


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def records_to_csv(records: Sequence[BenchRecord], timings: bool = False) -> str:
    columns = [c for c in COLUMNS if timings or c not in TIMING_COLUMNS]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        d = asdict(rec)
        w.writerow([_fmt(d[c]) for c in columns])
    return out.getvalue()


def summary_to_csv(rows: Sequence[dict], timings: bool = False) -> str:
    columns = [c for c in SUMMARY_COLUMNS if timings or c not in TIMING_COLUMNS]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return out.getvalue()


def parse_bench_csv(text: str) -> list[BenchRecord]:
    """Read rows written by :func:`records_to_csv` (timing columns optional)."""
    reader = csv.DictReader(io.StringIO(text))
    missing = {"n", "seed", "obdd_nodes", "cnf_clauses", "mcs_count", "status"} - set(
        reader.fieldnames or ()
    )
    if missing:
        raise ValueError(f"bench CSV lacks columns {sorted(missing)}")
    records = []
    for row in reader:
        records.append(
            BenchRecord(
                n=int(row["n"]),
                seed=int(row["seed"]),
                obdd_nodes=int(row["obdd_nodes"]),
                cnf_clauses=int(row["cnf_clauses"]),
                encode_time_ms=float(row.get("encode_time_ms") or 0.0),
                mcs_count=int(row["mcs_count"]) if row["mcs_count"] else None,
                enumerate_time_ms=float(row.get("enumerate_time_ms") or 0.0),
                status=row["status"],
            )
        )
    return records
