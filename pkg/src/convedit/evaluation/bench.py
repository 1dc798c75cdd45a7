"""Single-threaded latency benchmark for the rewriter."""

from __future__ import annotations

import math
import platform
import time
from dataclasses import dataclass, field

import numpy as np

from ..datagen.dataset import LabeledExample
from ..errors import ConvEditError
from ..tokens import concat_turns

MIN_REPS = 100


@dataclass
class BenchReport:
    reps: int
    p50_us: float
    p95_us: float
    mean_us: float
    #: least-squares slope of per-query latency (µs) against gold rewrite length
    slope_us_per_token: float
    hardware: str = field(default_factory=lambda: f"{platform.machine()} / {platform.processor() or 'unknown cpu'}")

    def to_dict(self) -> dict:
        return {
            "reps": self.reps,
            "p50_us": self.p50_us,
            "p95_us": self.p95_us,
            "mean_us": self.mean_us,
            "slope_us_per_token": self.slope_us_per_token,
            "hardware": self.hardware,
        }


def latency_bench(rewriter, examples: list[LabeledExample],
                  warmup: int = 10, repeats: int = 1) -> BenchReport:
    """Time predict+decode+apply per query, one query at a time.

    The slope against gold rewrite length checks that latency does not grow
    with output size, as expected when every edit is produced in one shot.
    With ``repeats`` > 1 each query is timed that many times and the minimum
    kept, suppressing scheduler noise on loaded machines.
    """
    if len(examples) < MIN_REPS:
        raise ConvEditError(
            f"need at least {MIN_REPS} examples for a latency benchmark, got {len(examples)}")
    if repeats < 1:
        raise ConvEditError(f"repeats must be >= 1, got {repeats}")
    prepared = [(concat_turns(ex.context, ex.followup), len(ex.rewrite)) for ex in examples]
    for seq, _ in prepared[:warmup]:
        rewriter.predict_program(seq)
    latencies = np.empty(len(prepared))
    lengths = np.empty(len(prepared))
    for i, (seq, rw_len) in enumerate(prepared):
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            rewriter.predict_program(seq)
            best = min(best, time.perf_counter() - t0)
        latencies[i] = best * 1e6
        lengths[i] = rw_len
    slope = float(np.polyfit(lengths, latencies, 1)[0]) if np.ptp(lengths) > 0 else 0.0
    return BenchReport(
        reps=len(prepared),
        p50_us=float(np.percentile(latencies, 50)),
        p95_us=float(np.percentile(latencies, 95)),
        mean_us=float(latencies.mean()),
        slope_us_per_token=slope,
    )
