"""Learning with a teacher that only answers plain membership on delay words.

The learner guesses the missing reset bits and keeps every consistent
alternative as a separate table instance.  Instances wait in a priority
queue ordered by the number of bits guessed so far (FIFO among equals).
"""
from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .automata import InvalidWord, Verdict, normalize_time, project, to_delay
from .hypothesis import HypothesisClash, PartitionPreconditionViolated, TableNotPrepared, hypothesis_from_table
from .smart import LearnResult, learned_stats
from .table import (
    EMPTY,
    ObservationTable,
    closed_defect,
    consistency_defect,
    evidence_defect,
    find_defect,
)


class ResourceLimit(RuntimeError):
    pass


@dataclass
class NormalConfig:
    evidence: bool = False
    max_instances: int = 10**6  # explored (popped) instances
    max_resident: int = 10**6  # instances waiting in the frontier (lazily built)
    max_branching: int = 10**5  # instances produced by one expansion


@dataclass(order=True)
class TableInstance:
    guess_count: int
    insertion_index: int
    table: ObservationTable = field(compare=False)  # a _Bundle while waiting in the frontier


class _Branch:
    """A table under construction plus the bits guessed for it so far."""

    __slots__ = ("table", "bits", "raw", "parent")

    def __init__(self, table, bits=0, raw=(), parent=EMPTY):
        self.table = table
        self.bits = bits
        self.raw = raw
        self.parent = parent


class _Bundle:
    """All fillings of one table: the cross product of its per-cell options.

    Every filling carries the same number of guessed bits, so they sit in
    the frontier as a single entry and are copied out one at a time.
    """

    __slots__ = ("table", "cells", "bits", "size", "_combos", "_left")

    def __init__(self, table, cells, choices, bits):
        self.table = table
        self.cells = cells
        self.bits = bits
        self.size = 1
        for c in choices:
            self.size *= len(c)
        self._combos = itertools.product(*choices)
        self._left = self.size

    @property
    def exhausted(self) -> bool:
        return self._left == 0

    def take(self) -> ObservationTable:
        combo = next(self._combos)
        self._left -= 1
        T = self.table if self._left == 0 else self.table.copy()
        for (p, e), (word, v) in zip(self.cells, combo):
            T.set_cell(p, e, word, v)
        return T


class NormalLearner:
    def __init__(self, oracle, alphabet=None, config: Optional[NormalConfig] = None):
        self.oracle = oracle
        self.alphabet = tuple(alphabet or oracle.alphabet)
        self.config = config or NormalConfig()
        self.trick = getattr(oracle, "trick", True)
        self.frontier: List[TableInstance] = []
        self._counter = itertools.count()
        self.seen: set = set()
        self.member_cache: Dict[tuple, Verdict] = {}
        self.ctx_cache: Dict[tuple, object] = {}
        self.explored = 0
        self.waiting = 0
        self.cache_hits = 0
        self.ctx_cache_hits = 0
        self.discards: Dict[str, int] = {}

    # -- membership ------------------------------------------------------------
    def verdict(self, word) -> Tuple[Verdict, bool]:
        """Verdict for a guessed reset-logical word and whether it is unrealizable.

        A word whose clock would run backwards has no run at all; it gets the
        sink verdict, as the reset-revealing teacher would report.
        """
        try:
            omega = project(to_delay(word))
        except InvalidWord:
            return (Verdict.INVALID if self.trick else Verdict.REJECT), True
        v = self.member_cache.get(omega)
        if v is None:
            v = self.member_cache[omega] = Verdict(self.oracle.membership_normal(omega))
        else:
            self.cache_hits += 1
        return v, False

    def _discard(self, reason: str) -> None:
        self.discards[reason] = self.discards.get(reason, 0) + 1

    # -- rows and cells --------------------------------------------------------
    def row_options(self, T: ObservationTable, parent: tuple, action: tuple) -> list:
        """Ways to extend ``parent`` by ``action``: ``[(word, verdict or None, bits)]``.

        A verdict of None means the prefix is already stored and is reused.
        """
        existing = T.by_projection(project(parent) + (action,))
        if existing is not None:
            return [(existing, None, 0)]
        a, mu = action
        reset_word = parent + ((a, mu, True),)
        v, invalid = self.verdict(reset_word)
        if invalid or v == Verdict.INVALID:
            # transitions into the sink reset the clock
            return [(reset_word, v, 0)]
        return [(parent + ((a, mu, False),), v, 1), (reset_word, v, 1)]

    def cell_options(self, T: ObservationTable, p: tuple, e: tuple) -> Tuple[list, int]:
        """Distinct (word, verdict) outcomes over all guesses of the inner suffix resets."""
        if self.trick and T.f.get((p, EMPTY)) == Verdict.INVALID:
            return [(p + tuple((a, mu, True) for a, mu in e), Verdict.INVALID)], 0
        k = len(e)
        outcomes: Dict[Verdict, tuple] = {}
        for bits in itertools.product((False, True), repeat=k - 1):
            word = p + tuple((a, mu, b) for (a, mu), b in zip(e, bits + (True,)))
            v, _ = self.verdict(word)
            outcomes.setdefault(v, word)
        return [(w, v) for v, w in outcomes.items()], k - 1

    def _add_row(self, branch: _Branch, word, v) -> None:
        T = branch.table
        T.add_row(word)
        T.set_cell(word, EMPTY, word, v)

    def extend(self, branches: List[_Branch], parent_of, action_of) -> List[_Branch]:
        """Extend every branch by one row, forking on guessed resets."""
        out = []
        for br in branches:
            parent = parent_of(br)
            action = action_of(br)
            opts = self.row_options(br.table, parent, action)
            for i, (word, v, bits) in enumerate(opts):
                T = br.table if i == len(opts) - 1 else br.table.copy()
                nb = _Branch(T, br.bits + bits, br.raw, word)
                if v is not None:
                    self._add_row(nb, word, v)
                out.append(nb)
        self._check_branching(len(out))
        return out

    def fill(self, branches: List[_Branch]) -> List[_Bundle]:
        """Work out the cell options of every branch; the combinations stay lazy."""
        out, total = [], 0
        for br in branches:
            T = br.table
            cells = T.missing_cells()
            choices, bits = [], 0
            for p, e in cells:
                opts, b = self.cell_options(T, p, e)
                choices.append(opts)
                bits += b
            bundle = _Bundle(T, cells, choices, br.bits + bits)
            total += bundle.size
            self._check_branching(total)
            out.append(bundle)
        return out

    def _check_branching(self, n: int) -> None:
        if n > self.config.max_branching:
            raise ResourceLimit(f"one expansion produced more than {self.config.max_branching} instances")

    # -- expansions ------------------------------------------------------------
    def seeds(self) -> List[_Bundle]:
        T = ObservationTable(self.alphabet)
        v, _ = self.verdict(EMPTY)
        T.set_cell(EMPTY, EMPTY, EMPTY, v)
        branches = [_Branch(T)]
        for a in self.alphabet:
            branches = self.extend(branches, lambda br: EMPTY, lambda br, a=a: (a, Fraction(0)))
        return self.fill(branches)

    def expand_closed(self, inst: TableInstance, r: tuple) -> List[_Bundle]:
        T = inst.table.copy()
        T.move_to_s(r)
        branches = [_Branch(T)]
        for a in self.alphabet:
            branches = self.extend(branches, lambda br: r, lambda br, a=a: (a, Fraction(0)))
        return self.fill(branches)

    def expand_consistent(self, inst: TableInstance, new_suffix: tuple) -> List[_Bundle]:
        T = inst.table.copy()
        T.add_suffix(new_suffix)
        return self.fill([_Branch(T)])

    def expand_evidence(self, inst: TableInstance) -> List[_Bundle]:
        T = inst.table
        words = []
        for s in T.S:
            for e in T.E:
                w = T.words[(s, e)]
                if any(w[:i] not in T for i in range(1, len(w) + 1)):
                    words.append(w)
        branches = [_Branch(T.copy())]
        for w in words:
            for i in range(len(w)):
                a, mu, b = w[i]
                last = i == len(w) - 1
                nxt = []
                for br in branches:
                    parent = br.parent if i else EMPTY
                    existing = br.table.by_projection(project(parent) + ((a, mu),))
                    if existing is not None or last:
                        nxt.extend(self.extend([br], lambda _b: parent, lambda _b: (a, mu)))
                        continue
                    # inner positions reuse the resets already guessed for the cell
                    word = parent + ((a, mu, b),)
                    v, _ = self.verdict(word)
                    self._add_row(br, word, v)
                    br.parent = word
                    nxt.append(br)
                branches = nxt
            for br in branches:
                br.parent = EMPTY
        return self.fill(branches)

    def expand_counterexample(self, inst: TableInstance, omega: tuple) -> List[_Bundle]:
        T0 = inst.table
        branches = [_Branch(T0.copy())]
        for a, t in omega:
            out = []
            for br in branches:
                action = action_of_raw(br, a, t)
                opts = self.row_options(br.table, br.parent, (action[0], normalize_time(action[1])))
                for i, (word, v, bits) in enumerate(opts):
                    T = br.table if i == len(opts) - 1 else br.table.copy()
                    nb = _Branch(T, br.bits + bits, br.raw + ((a, action[1], word[-1][2]),), word)
                    if v is not None:
                        self._add_row(nb, word, v)
                    out.append(nb)
            self._check_branching(len(out))
            branches = out

        kept = []
        for br in branches:
            if len(br.table.R) > len(T0.R):
                kept.append(br)
                continue
            # nothing new: learn from the suffixes of the counterexample instead
            g = project(br.parent)
            added = [e for e in (g[i:] for i in range(len(g) - 1, 0, -1)) if br.table.add_suffix(e)]
            if added:
                kept.append(br)
            else:
                self._discard("stalled")
        return self.fill(kept)

    # -- frontier --------------------------------------------------------------
    def push(self, base: int, bundles: List[_Bundle]) -> None:
        for b in bundles:
            heapq.heappush(self.frontier, TableInstance(base + b.bits, next(self._counter), b))
            self.waiting += b.size
        if self.waiting > self.config.max_resident:
            raise ResourceLimit(f"more than {self.config.max_resident} waiting instances")

    def pop(self) -> TableInstance:
        """Materialize the next instance in queue order, skipping tables already seen."""
        while self.frontier:
            head = self.frontier[0]
            bundle = head.table
            T = bundle.take()
            self.waiting -= 1
            if bundle.exhausted:
                heapq.heappop(self.frontier)
            fp = T.fingerprint()
            if fp in self.seen:
                self._discard("duplicate")
                continue
            self.seen.add(fp)
            self.explored += 1
            if self.explored > self.config.max_instances:
                raise ResourceLimit(f"explored more than {self.config.max_instances} instances")
            return TableInstance(head.guess_count, head.insertion_index, T)
        raise RuntimeError("no table instance left to explore")

    def equivalence(self, H):
        key = H.structural_key()
        hit = self.ctx_cache.get(key)
        if hit is not None:
            self.ctx_cache_hits += 1
            return hit
        res = self.ctx_cache[key] = self.oracle.equivalence(H)
        return res

    def run(self) -> LearnResult:
        started = time.perf_counter()
        ev = self.config.evidence
        self.push(0, self.seeds())
        cur = self.pop()
        while True:
            while find_defect(cur.table, ev) is not None:
                d = closed_defect(cur.table)
                if d is not None:
                    self.push(cur.guess_count, self.expand_closed(cur, d.row))
                    cur = self.pop()
                d = consistency_defect(cur.table)
                if d is not None:
                    self.push(cur.guess_count, self.expand_consistent(cur, d.new_suffix))
                    cur = self.pop()
                if ev and evidence_defect(cur.table) is not None:
                    self.push(cur.guess_count, self.expand_evidence(cur))
                    cur = self.pop()
            try:
                H = hypothesis_from_table(cur.table, ev)
            except (HypothesisClash, PartitionPreconditionViolated, TableNotPrepared):
                self._discard("hypothesis")
                cur = self.pop()
                continue
            res = self.equivalence(H)
            if res.equivalent:
                stats = learned_stats(H, cur.table, self.oracle, "normal", started)
                stats.update(
                    explored_instances=self.explored,
                    discarded_instances=sum(self.discards.values()),
                    discard_reasons=dict(sorted(self.discards.items())),
                    cache_hits=self.cache_hits,
                    counterexample_cache_hits=self.ctx_cache_hits,
                    guess_count=cur.guess_count,
                )
                stats["wall_time_ms"] = round((time.perf_counter() - started) * 1000, 3)
                return LearnResult(H, stats, cur.table)
            self.push(cur.guess_count, self.expand_counterexample(cur, tuple(res.word)))
            cur = self.pop()


def action_of_raw(br: _Branch, a: str, t: Fraction) -> tuple:
    """Next raw logical value of a counterexample under the branch's resets so far."""
    if br.raw:
        _, pmu, preset = br.raw[-1]
        return (a, t if preset else pmu + t)
    return (a, t)


def learn_normal(oracle, alphabet=None, config: Optional[NormalConfig] = None) -> LearnResult:
    return NormalLearner(oracle, alphabet, config).run()
