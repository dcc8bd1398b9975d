"""Timing comparison of von Neumann entropy against negativity on random states.

Each sample times one balanced bipartition (the first ``n // 2`` qubits
against the rest) of a fresh Haar-random state, with both measures run on
the same state.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .entanglement import NEGATIVITY_MAX_QUBITS, Bipartition, negativity, reduced_density, vn_entropy
from .errors import ConfigurationError, UsageError
from .simulator import PureState

MEASURES = ("vn_entropy", "negativity")
CSV_HEADER = ("n", "measure", "samples", "mean_seconds", "std_seconds")


@dataclass
class BenchRecord:
    n_qubits: int
    measure: str
    sample_count: int
    mean_time: float
    std_dev: float
    median_time: float

    def row(self) -> tuple:
        return (self.n_qubits, self.measure, self.sample_count, self.mean_time, self.std_dev)


def random_pure_state(n: int, rng: np.random.Generator) -> PureState:
    if n < 1:
        raise UsageError(f"need at least one qubit, got {n}")
    dim = 1 << n
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(n, amps / np.linalg.norm(amps))


def balanced_bipartition(n: int) -> Bipartition:
    return Bipartition((1 << (n // 2)) - 1, n)


def _measure_fn(measure: str):
    if measure == "vn_entropy":
        return lambda s, b: vn_entropy(reduced_density(s, b))
    return negativity


def run_measure_benchmark(
    n_range: Iterable[int],
    samples: int,
    rng: np.random.Generator,
    warmup: int = 5,
) -> list[BenchRecord]:
    ns = list(n_range)
    if not ns:
        return []
    if max(ns) > NEGATIVITY_MAX_QUBITS or min(ns) < 2:
        raise ConfigurationError(f"benchmark qubit counts must lie in [2, {NEGATIVITY_MAX_QUBITS}]")
    if samples < 1:
        raise ConfigurationError("samples must be >= 1")
    records = []
    fns = [_measure_fn(m) for m in MEASURES]
    for n in ns:
        b = balanced_bipartition(n)
        for _ in range(warmup):
            state = random_pure_state(n, rng)
            for fn in fns:
                fn(state, b)
        times = np.empty((len(MEASURES), samples))
        # both measures see the same state; alternating order cancels drift
        for i in range(samples):
            state = random_pure_state(n, rng)
            order = range(len(fns)) if i % 2 == 0 else reversed(range(len(fns)))
            for m in order:
                t0 = time.perf_counter()
                fns[m](state, b)
                times[m, i] = time.perf_counter() - t0
        for m, measure in enumerate(MEASURES):
            t = times[m]
            records.append(BenchRecord(n, measure, samples, float(t.mean()),
                                       float(t.std()), float(np.median(t))))
    return records


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()
