"""Timing harness for every scheme operation.

Each trial builds two users, encrypts one shared message under both and
times one call of every operation. Trials use independent RNG streams
derived from a master seed, so ``jobs > 1`` gives the same samples.
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import scheme
from .params import Params
from .rng import Rng

OPS = ("setup", "encrypt", "decrypt", "td1", "td2", "td3", "test1", "test2", "test3")
COLUMNS = ("op", "trials", "mean_us", "median_us", "min_us")
MIN_TRIALS = 100


@dataclass(frozen=True)
class BenchRecord:
    op: str
    trials: int
    mean_us: float
    median_us: float
    min_us: float
    fingerprint: tuple[int, int, int, int]

    def row(self) -> list:
        return [self.op, self.trials, f"{self.mean_us:.3f}", f"{self.median_us:.3f}", f"{self.min_us:.3f}"]


def _timed(times: dict, op: str, fn, *args):
    start = time.perf_counter_ns()
    out = fn(*args)
    times[op] = (time.perf_counter_ns() - start) / 1e3
    return out


def run_trial(params: Params, seed, index: int) -> dict[str, float]:
    """Microseconds per operation for one trial."""
    rng = Rng(f"bench/{seed}/{index}")
    t: dict[str, float] = {}
    pk_i, sk_i = _timed(t, "setup", scheme.setup, params, rng)
    pk_j, sk_j = scheme.setup(params, rng)
    msg = rng.words(params.n) & np.uint64(1)
    ct_i = _timed(t, "encrypt", scheme.encrypt, pk_i, msg, rng)
    ct_j = scheme.encrypt(pk_j, msg, rng)
    _timed(t, "decrypt", scheme.decrypt_detailed, sk_i, pk_i, ct_i, rng)
    td1_i = _timed(t, "td1", scheme.td1, sk_i, pk_i)
    td1_j = scheme.td1(sk_j, pk_j)
    td2_i = _timed(t, "td2", scheme.td2, sk_i, pk_i, ct_i, rng)
    td2_j = scheme.td2(sk_j, pk_j, ct_j, rng)

    def td3():
        return scheme.td3_i(sk_i, pk_i, ct_i, rng), scheme.td3_j(sk_j, pk_j)

    td3_i, td3_j = _timed(t, "td3", td3)
    _timed(t, "test1", scheme.test1, td1_i, td1_j, ct_i, ct_j, rng)
    _timed(t, "test2", scheme.test2, td2_i, td2_j, ct_i, ct_j)
    _timed(t, "test3", scheme.test3, td3_i, td3_j, ct_i, ct_j, rng)
    return t


def _trial_chunk(params: Params, seed, indices) -> list[dict[str, float]]:
    return [run_trial(params, seed, i) for i in indices]


def run_bench(params: Params, trials: int, seed=0, jobs: int = 1, warmup: int = 1) -> list[BenchRecord]:
    if trials < MIN_TRIALS:
        raise ValueError(f"at least {MIN_TRIALS} trials are required, got {trials}")
    for i in range(warmup):  # JIT compilation and table construction
        run_trial(params, seed, -1 - i)
    if jobs <= 1:
        results = _trial_chunk(params, seed, range(trials))
    else:
        chunks = [range(start, trials, jobs) for start in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for part in pool.map(_trial_chunk, [params] * jobs, [seed] * jobs, chunks) for r in part]
    records = []
    for op in OPS:
        samples = [r[op] for r in results]
        records.append(BenchRecord(op, len(samples), statistics.fmean(samples), statistics.median(samples),
                                   min(samples), params.fingerprint))
    return records


def write_csv(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for rec in records:
        writer.writerow(rec.row())
