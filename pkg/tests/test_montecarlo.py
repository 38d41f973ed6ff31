from functools import partial

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from treeweighted.montecarlo import run_streams, split_reps
from treeweighted.statistics import Accumulator


def draw_task(scale, gen, reps):
    acc = Accumulator()
    for x in gen.integers(0, scale, reps).tolist():
        acc.add({"x": x}, {"parity": x % 2})
    return acc


@given(st.integers(0, 1000), st.integers(1, 16))
def test_split_reps(reps, streams):
    parts = split_reps(reps, streams)
    assert sum(parts) == reps and len(parts) == streams
    assert max(parts) - min(parts) <= 1


def test_run_streams_is_deterministic():
    task = partial(draw_task, 100)
    a = run_streams(task, 1000, seed=3, streams=4)
    assert a == run_streams(task, 1000, seed=3, streams=4)
    assert a.count == 1000
    assert a != run_streams(task, 1000, seed=4, streams=4)


def test_worker_count_does_not_change_results():
    task = partial(draw_task, 100)
    assert run_streams(task, 400, seed=5, streams=3, workers=2) == run_streams(
        task, 400, seed=5, streams=3, workers=1
    )


def test_streams_are_independent():
    task = partial(draw_task, 2**30)
    parts = [run_streams(task, 200, seed=1, streams=1) for _ in range(2)]
    assert parts[0] == parts[1]
    one, two = run_streams(task, 2, seed=1, streams=2), run_streams(task, 1, seed=1, streams=1)
    assert one.sums["x"] != 2 * two.sums["x"]
    assert np.isfinite(one.mean("x"))
