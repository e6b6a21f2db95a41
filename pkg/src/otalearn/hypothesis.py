"""From a prepared observation table to a complete hypothesis automaton."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .automata import OTA, Guard, Transition
from .table import ObservationTable, find_defect


class TableNotPrepared(ValueError):
    pass


class PartitionPreconditionViolated(ValueError):
    pass


class HypothesisClash(ValueError):
    """Two table prefixes disagree on the target of the same timed action."""


def partition(values: Sequence[Fraction]) -> List[Guard]:
    """Split [0, inf) into guards, one per value, each containing its value.

    ``values`` must start at 0, be strictly increasing, and no two
    non-integer values may share an integer part.
    """
    ell = [Fraction(v) for v in values]
    if not ell or ell[0] != 0:
        raise PartitionPreconditionViolated("the list must start with 0")
    floors = set()
    for i, v in enumerate(ell):
        if i and v <= ell[i - 1]:
            raise PartitionPreconditionViolated(f"list not strictly increasing at {i}")
        if v.denominator != 1:
            fl = math.floor(v)
            if fl in floors:
                raise PartitionPreconditionViolated(f"two fractional values with integer part {fl}")
            floors.add(fl)

    guards = []
    for i, mu in enumerate(ell):
        nxt = ell[i + 1] if i + 1 < len(ell) else None
        lo_int = mu.denominator == 1
        lower, lower_closed = (int(mu), True) if lo_int else (math.floor(mu), False)
        if nxt is None:
            guards.append(Guard(lower, lower_closed, None, False))
        elif nxt.denominator == 1:
            guards.append(Guard(lower, lower_closed, int(nxt), False))
        else:
            guards.append(Guard(lower, lower_closed, math.floor(nxt), True))
    return guards


@dataclass
class IntermediateDFA:
    locations: List[str]
    initial: str
    accepting: frozenset
    alphabet: frozenset  # reset-logical actions (sigma, mu, reset)
    transitions: Dict[Tuple[str, tuple], str]
    representatives: Dict[str, tuple] = field(default_factory=dict)
    rows: Dict[str, tuple] = field(default_factory=dict)
    source_alphabet: tuple = ()


def build_dfa(T: ObservationTable, evidence: bool = True) -> IntermediateDFA:
    if find_defect(T, evidence) is not None:
        raise TableNotPrepared("the table must be prepared first")
    rows = T.rows()
    name_of_row: Dict[tuple, str] = {}
    reps: Dict[str, tuple] = {}
    for i, s in enumerate(T.S):
        name = f"q{i}"
        name_of_row[rows[s]] = name
        reps[name] = s
    accepting = frozenset(name_of_row[rows[s]] for s in T.S if rows[s][0] == "+")

    # (location, sigma, mu) -> (reset, target, chosen prefix); see note on clashes below
    chosen: Dict[tuple, tuple] = {}
    for w in T.prefixes():
        if not w:
            continue
        parent = w[:-1]
        a, mu, b = w[-1]
        src = name_of_row[rows[parent]]
        dst = name_of_row[rows[w]]
        k = (src, a, mu)
        if k not in chosen:
            chosen[k] = (b, dst, parent)
            continue
        ob, odst, oparent = chosen[k]
        if odst != dst:
            raise HypothesisClash(f"{w} and another prefix lead to different rows")
        if ob != b:
            # Equal rows but a different reset: the targets behave alike on E.
            # Keep the transition read off the location's own representative.
            if T.in_s(parent) and not T.in_s(oparent):
                chosen[k] = (b, dst, parent)
            elif not T.in_s(oparent) and T.key(parent) < T.key(oparent):
                chosen[k] = (b, dst, parent)

    transitions = {(src, (a, mu, b)): dst for (src, a, mu), (b, dst, _) in chosen.items()}
    return IntermediateDFA(
        locations=[name_of_row[rows[s]] for s in T.S],
        initial=name_of_row[rows[()]],
        accepting=accepting,
        alphabet=frozenset(sym for _, sym in transitions),
        transitions=transitions,
        representatives=reps,
        rows={n: r for r, n in name_of_row.items()},
        source_alphabet=T.alphabet,
    )


def build_hypothesis(M: IntermediateDFA) -> OTA:
    by_source: Dict[Tuple[str, str], list] = {}
    for (q, (a, mu, b)), dst in M.transitions.items():
        by_source.setdefault((q, a), []).append((mu, b, dst))
    out = []
    for q in M.locations:
        for a in M.source_alphabet:
            edges = sorted(by_source.get((q, a), []))
            if not edges:
                raise PartitionPreconditionViolated(f"no transition for ({q}, {a})")
            guards = partition([mu for mu, _, _ in edges])
            out.extend(Transition(q, a, g, b, dst) for g, (_, b, dst) in zip(guards, edges))
    return OTA(tuple(M.source_alphabet), tuple(M.locations), M.initial, M.accepting, tuple(out))


def hypothesis_from_table(T: ObservationTable, evidence: bool = True) -> OTA:
    return build_hypothesis(build_dfa(T, evidence))
