import math
import random
from fractions import Fraction as F

import pytest

from helpers import golden_run
from otalearn.automata import Guard, Verdict, complete, project, run_delay, run_logical, validate
from otalearn.generator import GenSpec, generate
from otalearn.hypothesis import (
    PartitionPreconditionViolated,
    TableNotPrepared,
    build_dfa,
    build_hypothesis,
    hypothesis_from_table,
    partition,
)
from otalearn.io import parse_guard
from otalearn.regions import region_code
from otalearn.table import initial_table, is_prepared, process_counterexample, repair
from otalearn.sampling import random_delay_word


@pytest.fixture(scope="module")
def golden(running):
    return golden_run(running)


def guards_of(H, q, a):
    return [str(t.guard) for t in H.outgoing(q, a)]


# -- partition -------------------------------------------------------------------------

@pytest.mark.parametrize(
    "values, expected",
    [
        ([0], ["[0,+)"]),
        ([0, F(11, 10), 3], ["[0,1]", "(1,3)", "[3,+)"]),
        ([0, 2, 4], ["[0,2)", "[2,4)", "[4,+)"]),
        ([F(0), F(1, 10)], ["[0,0]", "(0,+)"]),
        ([0, 1, F(21, 10)], ["[0,1)", "[1,2]", "(2,+)"]),
    ],
)
def test_partition_examples(values, expected):
    assert [str(g) for g in partition(values)] == expected


@pytest.mark.parametrize("values", [[], [1], [0, 0], [0, 2, 1], [0, F(11, 10), F(13, 10)]])
def test_partition_preconditions(values):
    with pytest.raises(PartitionPreconditionViolated):
        partition(values)


def _random_partition_input(rng):
    pool = set()
    for n in range(0, 8):
        if rng.random() < 0.4:
            pool.add(F(n))
        if rng.random() < 0.4:
            pool.add(n + F(rng.randint(1, 9), 10))
    return sorted(pool | {F(0)})


def test_partition_property():
    rng = random.Random(31)
    for _ in range(1000):
        ell = _random_partition_input(rng)
        guards = partition(ell)
        assert all(mu in g for mu, g in zip(ell, guards))
        # every region up to beyond the largest constant is covered exactly once
        kappa = 9
        spans = [g.codes(kappa) for g in guards]
        covered = []
        for lo, hi in spans:
            covered.extend(range(lo, hi + 1))
        assert sorted(covered) == list(range(2 * kappa + 2))
        probes = [F(n, 20) for n in range(0, 220)]
        for v in probes:
            assert sum(v in g for g in guards) == 1


# -- hypotheses of the documented run ------------------------------------------------------

def test_h1(golden):
    H1 = golden[2].submitted[0]
    assert H1.locations == ("q0",)
    assert guards_of(H1, "q0", "a") == ["[0,+)"] and guards_of(H1, "q0", "b") == ["[0,+)"]
    assert not H1.accepting


def test_h5(golden):
    H = golden[2].submitted[3]
    assert len(H.locations) == 2 and len(H.transitions) == 7
    assert guards_of(H, "q0", "a") == ["[0,1]", "(1,3)", "[3,+)"]
    assert H.accepting == {"q1"}


def test_m5_dfa(golden):
    T5 = golden[1][4][1]
    M = build_dfa(T5)
    assert len(M.locations) == 2 and len(M.transitions) == 7
    assert M.initial == "q0" and M.accepting == {"q1"}


def test_h9_and_h10(golden):
    H9, H10 = golden[2].submitted[4], golden[2].submitted[5]
    assert len(H9.locations) == 3
    assert len(H10.locations) == 3
    loop = [t for t in H10.transitions if t.source == t.target == "q1" and t.action == "b"]
    assert len(loop) == 1 and loop[0].guard == parse_guard("[2,4)")
    assert golden[0].hypothesis == H10


def test_build_requires_prepared(golden):
    with pytest.raises(TableNotPrepared):
        build_dfa(golden[1][1][1])


def test_hypotheses_match_their_tables(golden):
    tables = [T for _, T in golden[1]]
    for H, k in zip(golden[2].submitted, (0, 2, 3, 4, 8, 9)):
        assert hypothesis_from_table(tables[k]) == H


# -- properties over random prepared tables -------------------------------------------------

def _prepared_tables(count, seed):
    """Prepared tables from random targets, refined by random counterexamples."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = complete(generate(GenSpec(rng.randint(2, 4), rng.randint(1, 3), rng.randint(1, 5), seed=rng.randrange(2**32))))
        member = lambda g, A=A: run_logical(A, g, trick=False)  # noqa: E731
        T = repair(initial_table(A.alphabet, member), member)
        out.append((A, T.copy()))
        for _ in range(3):
            ctx, _ = run_delay(A, random_delay_word(rng, A.alphabet, A.max_constant, 4), trick=False)
            if not ctx:
                continue
            process_counterexample(T, ctx, member)
            repair(T, member)
            out.append((A, T.copy()))
    return out[:count]


@pytest.fixture(scope="module")
def prepared():
    return _prepared_tables(1000, 41)


def test_hypothesis_complete_and_deterministic(prepared):
    assert len(prepared) >= 1000
    for _, T in prepared:
        assert is_prepared(T)
        r = validate(hypothesis_from_table(T))
        assert r.deterministic and r.complete


def test_hypothesis_agrees_with_cells(prepared):
    checked = 0
    for _, T in prepared:
        H = hypothesis_from_table(T)
        for (p, e), v in T.f.items():
            word, verdict = run_logical(H, project(T.words[(p, e)]), trick=False)
            assert verdict == v, (p, e)
            if T.in_s(p):
                assert word == T.words[(p, e)]
            checked += 1
    assert checked >= 1000


def _warp(word, power):
    """Move every fractional value inside its unit interval by a strictly increasing map."""
    out = []
    for a, mu, *rest in word:
        fl = math.floor(mu)
        fr = mu - fl
        if fr:
            fr = fr**power if power > 0 else 1 - (1 - fr) ** (-power)
        out.append((a, fl + fr, *rest))
    return tuple(out)


def test_region_perturbation_keeps_cells(prepared):
    rng = random.Random(51)
    checked = 0
    for A, T in prepared:
        H = hypothesis_from_table(T)
        items = list(T.f.items())
        for (p, e), v in rng.sample(items, min(3, len(items))):
            word = project(T.words[(p, e)])
            moved = _warp(word, rng.choice([2, 3, -2, -3]))
            assert [region_code(t, 9) for _, t in moved] == [region_code(t, 9) for _, t in word]
            assert run_logical(A, moved, trick=False)[1] == v
            assert run_logical(H, moved, trick=False)[1] == v
            checked += 1
    assert checked >= 1000


def test_build_hypothesis_rejects_missing_actions(golden):
    M = build_dfa(golden[1][0][1])
    M.transitions = {k: v for k, v in M.transitions.items() if k[1][0] != "b"}
    with pytest.raises(PartitionPreconditionViolated):
        build_hypothesis(M)


def test_guard_sanity():
    assert Guard.point(3).codes(4) == (6, 6)
    assert Verdict("+") is Verdict.ACCEPT
