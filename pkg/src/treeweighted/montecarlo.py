"""Seeded Monte Carlo over independent streams.

Replicates are split across ``streams`` deterministically, each stream runs
on its own :class:`RandomSource`, and the per-stream accumulators are merged
in stream order after all of them finish.  The result depends on ``(seed,
streams, reps)`` only, never on how many worker processes ran the streams.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .samplers import RandomSource
from .statistics import Accumulator

Task = Callable[[np.random.Generator, int], Accumulator]


def split_reps(reps: int, streams: int) -> list[int]:
    base, extra = divmod(reps, streams)
    return [base + (i < extra) for i in range(streams)]


def _run_stream(task: Task, seed: int, stream: int, reps: int) -> Accumulator:
    return task(RandomSource(seed, stream).generator(), reps)


def run_streams(task: Task, reps: int, seed: int, streams: int = 1, workers: int = 1) -> Accumulator:
    """Run ``task(generator, reps_i)`` on every stream and merge the results.

    ``task`` must be picklable (a module-level function or a
    :func:`functools.partial` of one) when ``workers > 1``.
    """
    if streams < 1:
        raise ValueError("need at least one stream")
    chunks = split_reps(reps, streams)
    if workers > 1 and streams > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_stream, task, seed, i, r) for i, r in enumerate(chunks)
            ]
            parts = [f.result() for f in futures]
    else:
        parts = [_run_stream(task, seed, i, r) for i, r in enumerate(chunks)]
    total = Accumulator()
    for part in parts:
        total = total.merge(part)
    return total
