import random

import pytest

from helpers import W, golden_run
from otalearn.automata import live_location_count
from otalearn.equivalence import find_witness
from otalearn.generator import GenSpec, generate
from otalearn.smart import BoundExceeded, LearningStalled, learn_smart, symbolic_state_bound
from otalearn.teacher import Oracle, ScriptedOracle

STATS_KEYS = {
    "mode", "membership_count", "equivalence_count", "locations_learned",
    "locations_non_sink", "table_rows", "table_columns", "wall_time_ms",
}


def test_golden_run_counts(running):
    res, snaps, oracle = golden_run(running)
    # frozen from the scripted replay: five counterexamples plus the final yes
    assert res.stats["equivalence_count"] == 6
    assert res.stats["membership_count"] == 23
    assert (res.stats["locations_learned"], res.stats["locations_non_sink"]) == (3, 2)
    assert (res.stats["table_rows"], res.stats["table_columns"]) == (13, 2)
    assert find_witness(res.hypothesis, running) is None


@pytest.mark.parametrize("trick", [True, False])
def test_live_running_example(running, trick):
    res = learn_smart(Oracle(running, "smart", trick))
    assert find_witness(res.hypothesis, running) is None
    assert set(res.stats) == STATS_KEYS
    assert res.stats["mode"] == "smart"
    assert len(res.table.S) <= symbolic_state_bound(running) == 30
    assert live_location_count(res.hypothesis) == 2


def test_state_bound_is_enforced(running):
    with pytest.raises(BoundExceeded):
        learn_smart(Oracle(running), state_bound=1)


def test_stale_counterexample_uses_suffixes(running):
    # the same counterexample twice: the second time its prefixes are all known
    ctx = (W("(a,1.1,N)(b,2.9,R)", "reset-delay"), "-")
    res = learn_smart(ScriptedOracle(running, [ctx, ctx]))
    assert len(res.table.E) > 1


def test_useless_counterexample_stalls(running):
    ctx = (W("(b,0,R)", "reset-delay"), "-")
    with pytest.raises(LearningStalled):
        learn_smart(ScriptedOracle(running, [ctx, ctx, ctx]))


def test_round_limit(running):
    with pytest.raises(LearningStalled):
        learn_smart(Oracle(running), max_rounds=1)


def test_random_targets():
    rng = random.Random(91)
    for _ in range(30):
        A = generate(GenSpec(rng.randint(2, 5), rng.randint(1, 3), rng.randint(1, 6), seed=rng.randrange(2**32)))
        res = learn_smart(Oracle(A))
        assert find_witness(res.hypothesis, A) is None
        assert len(res.table.S) <= symbolic_state_bound(A)


def test_without_evidence_closure(running):
    res = learn_smart(Oracle(running), evidence=False)
    assert find_witness(res.hypothesis, running) is None
