"""Timed observation tables over reset-logical words.

Prefixes (``S`` and ``R``) are reset-logical words, suffixes (``E``) are
logical words.  Each cell ``(p, e)`` keeps the verdict of ``p.e`` together
with the full reset-logical word the verdict was obtained for; the latter
is what evidence closure needs.

Membership is supplied as a callable ``member(gamma) -> (gamma_r, verdict)``
on logical words so the same table code serves the live oracle, scripted
replays and the reset-guessing learner.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .automata import Verdict, normalize, project, to_logical

Member = Callable[[tuple], Tuple[tuple, Verdict]]

EMPTY: tuple = ()


class UnknownPrefix(KeyError):
    pass


class InternalInvariantViolation(AssertionError):
    pass


# ---------------------------------------------------------------------------
# defects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NotClosed:
    row: tuple


@dataclass(frozen=True)
class NotConsistent:
    action: tuple  # logical action (sigma, mu)
    suffix: tuple
    first: tuple = ()
    second: tuple = ()

    @property
    def new_suffix(self) -> tuple:
        return (self.action,) + self.suffix


@dataclass(frozen=True)
class NotEvidenceClosed:
    prefix: tuple
    suffix: tuple


@dataclass(frozen=True)
class NotReduced:
    first: tuple
    second: tuple


@dataclass(frozen=True)
class NotPrefixClosed:
    prefix: tuple


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------

class ObservationTable:
    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        self.S: List[tuple] = [EMPTY]
        self.R: List[tuple] = []
        self.E: List[tuple] = [EMPTY]
        self.f: Dict[Tuple[tuple, tuple], Verdict] = {}
        self.words: Dict[Tuple[tuple, tuple], tuple] = {}
        self._in_s = {EMPTY}
        self._in_r: set = set()
        self._proj: Dict[tuple, tuple] = {EMPTY: EMPTY}
        self._index = {a: i for i, a in enumerate(self.alphabet)}

    def copy(self) -> "ObservationTable":
        t = ObservationTable.__new__(ObservationTable)
        t.alphabet = self.alphabet
        t.S, t.R, t.E = list(self.S), list(self.R), list(self.E)
        t.f, t.words = dict(self.f), dict(self.words)
        t._in_s, t._in_r = set(self._in_s), set(self._in_r)
        t._proj = dict(self._proj)
        t._index = self._index
        return t

    # -- membership of prefixes ---------------------------------------------
    def __contains__(self, p) -> bool:
        return p in self._in_s or p in self._in_r

    def in_s(self, p) -> bool:
        return p in self._in_s

    def prefixes(self) -> List[tuple]:
        return self.S + self.R

    def key(self, word) -> tuple:
        idx = self._index
        return (len(word), tuple((idx[a], t, *rest) for a, t, *rest in word))

    # -- mutation ------------------------------------------------------------
    def add_row(self, p: tuple) -> bool:
        """Append ``p`` to R unless already present; True if added."""
        if p in self:
            return False
        self.R.append(p)
        self._in_r.add(p)
        self._proj.setdefault(project(p), p)
        return True

    def by_projection(self, gamma) -> Optional[tuple]:
        """The stored prefix whose actions and times are ``gamma``, if any."""
        return self._proj.get(tuple(gamma))

    def move_to_s(self, p: tuple) -> None:
        if p not in self._in_r:
            raise UnknownPrefix(p)
        self.R.remove(p)
        self._in_r.discard(p)
        self.S.append(p)
        self._in_s.add(p)

    def add_suffix(self, e: tuple) -> bool:
        if e in self.E:
            return False
        self.E.append(e)
        return True

    def set_cell(self, p, e, word, verdict: Verdict) -> None:
        self.f[(p, e)] = Verdict(verdict)
        self.words[(p, e)] = word

    def missing_cells(self) -> List[Tuple[tuple, tuple]]:
        return [(p, e) for p in self.prefixes() for e in self.E if (p, e) not in self.f]

    # -- observations ----------------------------------------------------------
    def row(self, p) -> tuple:
        if p not in self:
            raise UnknownPrefix(p)
        try:
            return tuple(self.f[(p, e)] for e in self.E)
        except KeyError:
            raise InternalInvariantViolation(f"unfilled cell in row {p}") from None

    def rows(self) -> Dict[tuple, tuple]:
        f, E = self.f, self.E
        return {p: tuple(f[(p, e)] for e in E) for p in self.prefixes()}

    def size(self) -> Tuple[int, int, int]:
        return len(self.S), len(self.R), len(self.E)

    def fingerprint(self) -> tuple:
        """Hashable summary of rows, resets and verdicts (order-insensitive)."""
        rows = self.rows()
        return (
            frozenset(self.S),
            frozenset(self.R),
            frozenset(self.E),
            frozenset(rows.items()),
        )

    def dump(self) -> str:
        from .io import serialize_word

        def label(w):
            return serialize_word(w) or "e"

        heads = [label(e) for e in self.E]
        left = [label(p) for p in self.prefixes()]
        w0 = max([len(x) for x in left] + [1])
        widths = [max(len(h), 1) for h in heads]
        lines = [" " * w0 + " | " + "  ".join(h.ljust(w) for h, w in zip(heads, widths))]
        lines.append("-" * len(lines[0]))

        def line(p):
            cells = [str(self.f.get((p, e), "?")).ljust(w) for e, w in zip(self.E, widths)]
            return label(p).ljust(w0) + " | " + "  ".join(cells)

        lines.extend(line(p) for p in self.S)
        lines.append("=" * len(lines[0]))
        lines.extend(line(p) for p in self.R)
        return "\n".join(lines)

    __str__ = dump


# ---------------------------------------------------------------------------
# preparedness checks
# ---------------------------------------------------------------------------

def closed_defect(T: ObservationTable, rows=None) -> Optional[NotClosed]:
    rows = rows or T.rows()
    s_rows = {rows[s] for s in T.S}
    open_rows = [r for r in T.R if rows[r] not in s_rows]
    if not open_rows:
        return None
    return NotClosed(min(open_rows, key=T.key))


def consistency_defect(T: ObservationTable, rows=None) -> Optional[NotConsistent]:
    rows = rows or T.rows()
    groups: Dict[tuple, list] = {}
    for w in T.prefixes():
        if not w:
            continue
        a, mu, _ = w[-1]
        groups.setdefault((rows[w[:-1]], a, mu), []).append(w)
    best = None
    for members in groups.values():
        if len(members) < 2:
            continue
        members.sort(key=T.key)
        w1 = members[0]
        for w2 in members[1:]:
            if rows[w2] != rows[w1]:
                cand = (T.key(w1), T.key(w2), w1, w2)
                if best is None or cand[:2] < best[:2]:
                    best = cand
                break
    if best is None:
        return None
    _, _, w1, w2 = best
    r1, r2 = rows[w1], rows[w2]
    j = next(i for i in range(len(T.E)) if r1[i] != r2[i])
    a, mu, _ = w1[-1]
    return NotConsistent((a, mu), T.E[j], w1, w2)


def evidence_defect(T: ObservationTable) -> Optional[NotEvidenceClosed]:
    for s in sorted(T.S, key=T.key):
        for e in T.E:
            w = T.words[(s, e)]
            if any(w[:i] not in T for i in range(1, len(w) + 1)):
                return NotEvidenceClosed(s, e)
    return None


def reduced_defect(T: ObservationTable, rows=None) -> Optional[NotReduced]:
    rows = rows or T.rows()
    seen: Dict[tuple, tuple] = {}
    for s in T.S:
        if rows[s] in seen:
            return NotReduced(seen[rows[s]], s)
        seen[rows[s]] = s
    return None


def prefix_closed_defect(T: ObservationTable) -> Optional[NotPrefixClosed]:
    for p in T.prefixes():
        if p and p[:-1] not in T:
            return NotPrefixClosed(p)
    return None


def find_defect(T: ObservationTable, evidence: bool = True):
    """First defect in the order closed, consistent, evidence-closed, or None when prepared."""
    rows = T.rows()
    bad = reduced_defect(T, rows) or prefix_closed_defect(T)
    if bad is not None:
        raise InternalInvariantViolation(repr(bad))
    d = closed_defect(T, rows) or consistency_defect(T, rows)
    if d is None and evidence:
        d = evidence_defect(T)
    return d


def is_prepared(T: ObservationTable, evidence: bool = True) -> bool:
    return find_defect(T, evidence) is None


# ---------------------------------------------------------------------------
# repairs
# ---------------------------------------------------------------------------

def fill(T: ObservationTable, member: Member) -> int:
    """Fill every empty cell; returns the number of cells filled."""
    todo = T.missing_cells()
    for p, e in todo:
        word, verdict = member(project(p) + e)
        T.set_cell(p, e, word, verdict)
    return len(todo)


def closing_rows(T: ObservationTable, r: tuple, member: Member) -> List[tuple]:
    """The reset-logical words ``pi(r.(sigma, 0))`` for every action."""
    from fractions import Fraction

    out = []
    for a in T.alphabet:
        word, _ = member(project(r) + ((a, Fraction(0)),))
        out.append(word)
    return out


def make_closed(T: ObservationTable, defect: NotClosed, member: Member) -> ObservationTable:
    r = defect.row
    T.move_to_s(r)
    for w in closing_rows(T, r, member):
        T.add_row(w)
    fill(T, member)
    return T


def make_consistent(T: ObservationTable, defect: NotConsistent, member: Member) -> ObservationTable:
    T.add_suffix(defect.new_suffix)
    fill(T, member)
    return T


def evidence_rows(T: ObservationTable) -> List[tuple]:
    """Prefixes of every ``pi(s.e)`` missing from S and R, in discovery order."""
    out, seen = [], set()
    for s in T.S:
        for e in T.E:
            w = T.words[(s, e)]
            for i in range(1, len(w) + 1):
                p = w[:i]
                if p not in T and p not in seen:
                    seen.add(p)
                    out.append(p)
    return out


def make_evidence_closed(T: ObservationTable, member: Member) -> ObservationTable:
    for p in evidence_rows(T):
        T.add_row(p)
    fill(T, member)
    return T


def counterexample_rows(T: ObservationTable, ctx_word: tuple) -> List[tuple]:
    """Normalized prefixes of a reset-delay counterexample not yet in the table."""
    g = normalize(to_logical(ctx_word))
    return [g[:i] for i in range(1, len(g) + 1) if g[:i] not in T]


def process_counterexample(T: ObservationTable, ctx_word: tuple, member: Member) -> ObservationTable:
    for p in counterexample_rows(T, ctx_word):
        T.add_row(p)
    fill(T, member)
    return T


def initial_table(alphabet, member: Member) -> ObservationTable:
    T = ObservationTable(alphabet)
    for w in closing_rows(T, EMPTY, member):
        T.add_row(w)
    fill(T, member)
    return T


def repair(T: ObservationTable, member: Member, evidence: bool = True, on_step=None) -> ObservationTable:
    """Repair until prepared, one pass per round in the order closed, consistent, evidence-closed.

    Each check in a pass sees the table as left by the previous repair.
    ``on_step(kind, T)`` is called after every repair.
    """
    while not is_prepared(T, evidence):
        d = closed_defect(T)
        if d is not None:
            make_closed(T, d, member)
            if on_step:
                on_step("closed", T)
        d = consistency_defect(T)
        if d is not None:
            make_consistent(T, d, member)
            if on_step:
                on_step("consistent", T)
        if evidence and evidence_defect(T) is not None:
            make_evidence_closed(T, member)
            if on_step:
                on_step("evidence", T)
    return T
