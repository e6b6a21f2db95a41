"""One-clock timed automata, timed words and their simulation.

Times are :class:`fractions.Fraction` everywhere.  Timed words are plain
tuples so they can be hashed, sorted and used as dictionary keys:

* delay / logical word:        ``(("a", Fraction(11, 10)), ("b", Fraction(2)))``
* reset-delay / reset-logical: ``(("a", Fraction(11, 10), False), ...)``
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Tuple

Time = Fraction
TimedWord = Tuple[Tuple[str, Fraction], ...]
ResetWord = Tuple[Tuple[str, Fraction, bool], ...]

# fractional part used by normalize()
THETA = Fraction(1, 10)


class StructuralError(ValueError):
    """An automaton references a location or action it does not declare."""


class NotDeterministic(ValueError):
    pass


class InvalidWord(ValueError):
    pass


class Verdict(str, enum.Enum):
    ACCEPT = "+"
    REJECT = "-"
    INVALID = "x"

    def __str__(self) -> str:
        return self.value


def as_time(value) -> Fraction:
    """Coerce ``value`` to an exact non-negative rational.

    Floats are refused: ``0.1`` has no exact binary representation and
    every floor/equality test downstream must be exact.
    """
    if isinstance(value, float):
        raise TypeError("use Fraction, int or a decimal string, not float")
    t = Fraction(value)
    if t < 0:
        raise ValueError(f"negative time {t}")
    return t


def is_integer(t: Fraction) -> bool:
    return t.denominator == 1


# ---------------------------------------------------------------------------
# guards
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Guard:
    """Interval with natural endpoints; ``upper=None`` means infinity."""

    lower: int
    lower_closed: bool = True
    upper: Optional[int] = None
    upper_closed: bool = False

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < 0):
            raise ValueError("guard endpoints must be natural numbers")
        if self.upper is None:
            if self.upper_closed:
                raise ValueError("an unbounded guard cannot be right-closed")
            return
        if self.lower > self.upper:
            raise ValueError(f"empty guard {self}")
        if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
            raise ValueError(f"empty guard {self}")

    @classmethod
    def full(cls) -> "Guard":
        return cls(0, True, None, False)

    @classmethod
    def point(cls, n: int) -> "Guard":
        return cls(n, True, n, True)

    def __contains__(self, value) -> bool:
        v = Fraction(value)
        if v < self.lower or (v == self.lower and not self.lower_closed):
            return False
        if self.upper is None:
            return True
        return v < self.upper or (v == self.upper and self.upper_closed)

    @property
    def max_constant(self) -> int:
        return self.lower if self.upper is None else self.upper

    def codes(self, kappa: int) -> Tuple[int, int]:
        """Inclusive range of region codes covered, for a clock bounded by ``kappa``.

        Region code ``2n`` is the point ``n`` and ``2n+1`` the open interval
        ``(n, n+1)``; ``2*kappa+1`` stands for ``(kappa, inf)``.
        """
        if self.max_constant > kappa:
            raise ValueError(f"guard {self} exceeds constant {kappa}")
        lo = 2 * self.lower + (0 if self.lower_closed else 1)
        if self.upper is None:
            hi = 2 * kappa + 1
        else:
            hi = 2 * self.upper - (0 if self.upper_closed else 1)
        return lo, hi

    @classmethod
    def from_codes(cls, lo: int, hi: int, kappa: int) -> "Guard":
        lower, lower_closed = (lo // 2, True) if lo % 2 == 0 else ((lo - 1) // 2, False)
        if hi >= 2 * kappa + 1:
            return cls(lower, lower_closed, None, False)
        if hi % 2 == 0:
            return cls(lower, lower_closed, hi // 2, True)
        return cls(lower, lower_closed, (hi + 1) // 2, False)

    def __str__(self) -> str:
        left = "[" if self.lower_closed else "("
        if self.upper is None:
            return f"{left}{self.lower},+)"
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower},{self.upper}{right}"


class Transition(NamedTuple):
    source: str
    action: str
    guard: Guard
    reset: bool
    target: str


class ValidationReport(NamedTuple):
    deterministic: bool
    complete: bool
    max_constant: int


# ---------------------------------------------------------------------------
# automata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OTA:
    alphabet: Tuple[str, ...]
    locations: Tuple[str, ...]
    initial: str
    accepting: frozenset
    transitions: Tuple[Transition, ...]
    sink: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(Transition(*t) for t in self.transitions))

    @cached_property
    def max_constant(self) -> int:
        return max((t.guard.max_constant for t in self.transitions), default=0)

    @cached_property
    def _outgoing(self) -> dict:
        out: dict = {}
        for t in self.transitions:
            out.setdefault((t.source, t.action), []).append(t)
        for ts in out.values():
            ts.sort(key=lambda t: t.guard)
        return out

    def outgoing(self, q: str, action: str) -> Sequence[Transition]:
        return self._outgoing.get((q, action), ())

    def enabled(self, q: str, action: str, value: Fraction) -> Optional[Transition]:
        for t in self.outgoing(q, action):
            if value in t.guard:
                return t
        return None

    def is_accepting(self, q: str) -> bool:
        return q in self.accepting

    def structural_key(self) -> tuple:
        """Hashable identity of the automaton up to transition order."""
        return (
            self.alphabet,
            self.locations,
            self.initial,
            tuple(sorted(self.accepting)),
            tuple(sorted((t.source, t.action, t.guard, t.reset, t.target) for t in self.transitions)),
        )


def validate(A: OTA) -> ValidationReport:
    locs = set(A.locations)
    if A.initial not in locs:
        raise StructuralError(f"initial location {A.initial!r} is not declared")
    if not A.accepting <= locs:
        raise StructuralError(f"undeclared accepting locations {sorted(A.accepting - locs)}")
    if A.sink is not None and A.sink not in locs:
        raise StructuralError(f"undeclared sink {A.sink!r}")
    actions = set(A.alphabet)
    for t in A.transitions:
        if t.source not in locs or t.target not in locs:
            raise StructuralError(f"transition {t} references an undeclared location")
        if t.action not in actions:
            raise StructuralError(f"transition {t} uses undeclared action {t.action!r}")

    kappa = A.max_constant
    top = 2 * kappa + 1
    deterministic = True
    complete = True
    for q in A.locations:
        for a in A.alphabet:
            spans = sorted(t.guard.codes(kappa) for t in A.outgoing(q, a))
            covered = -1
            for lo, hi in spans:
                if lo <= covered:
                    deterministic = False
                if lo > covered + 1:
                    complete = False
                covered = max(covered, hi)
            if covered < top:
                complete = False
    return ValidationReport(deterministic, complete and deterministic, kappa)


def _fresh_name(base: str, taken) -> str:
    name, i = base, 1
    while name in taken:
        name = f"{base}{i}"
        i += 1
    return name


def complete(A: OTA) -> OTA:
    """Return a complete DOTA with the same timed language.

    Uncovered clock values are sent to a fresh non-accepting sink with
    resetting transitions; the sink is only added when something is
    uncovered.
    """
    report = validate(A)
    if not report.deterministic:
        raise NotDeterministic("complete() needs a deterministic automaton")
    if report.complete:
        return A

    kappa = report.max_constant
    top = 2 * kappa + 1
    sink = A.sink if A.sink is not None else _fresh_name("qs", set(A.locations))
    extra = []
    for q in A.locations:
        for a in A.alphabet:
            spans = sorted(t.guard.codes(kappa) for t in A.outgoing(q, a))
            gaps = []
            nxt = 0
            for lo, hi in spans:
                if lo > nxt:
                    gaps.append((nxt, lo - 1))
                nxt = hi + 1
            if nxt <= top:
                gaps.append((nxt, top))
            for lo, hi in gaps:
                extra.append(Transition(q, a, Guard.from_codes(lo, hi, kappa), True, sink))
    locations = A.locations
    if sink not in locations:
        locations = locations + (sink,)
        extra.extend(Transition(sink, a, Guard.full(), True, sink) for a in A.alphabet)
    return replace(A, locations=locations, transitions=A.transitions + tuple(extra), sink=sink)


def without_sink(A: OTA) -> OTA:
    """Drop the declared sink and every transition touching it."""
    if A.sink is None:
        return A
    s = A.sink
    return OTA(
        A.alphabet,
        tuple(q for q in A.locations if q != s),
        A.initial,
        A.accepting - {s},
        tuple(t for t in A.transitions if t.source != s and t.target != s),
    )


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def _verdict(A: OTA, q: str) -> Verdict:
    return Verdict.ACCEPT if q in A.accepting else Verdict.REJECT


def run_delay(A: OTA, word: TimedWord, trick: bool = True) -> Tuple[ResetWord, Verdict]:
    """Simulate a delay-timed word; return it annotated with resets and the verdict.

    A step with no enabled transition (only possible on an incomplete
    automaton) yields ``INVALID`` when ``trick`` is on and ``REJECT``
    otherwise; the rest of the word is annotated with resets.
    """
    q, clock = A.initial, Fraction(0)
    out = []
    for i, (a, t) in enumerate(word):
        value = clock + t
        tr = A.enabled(q, a, value)
        if tr is None:
            out.extend((b, d, True) for b, d in word[i:])
            return tuple(out), Verdict.INVALID if trick else Verdict.REJECT
        out.append((a, t, tr.reset))
        clock = Fraction(0) if tr.reset else value
        q = tr.target
    return tuple(out), _verdict(A, q)


def _walk_logical(A: OTA, word: TimedWord):
    """Yield the fired transitions; stop with ``None`` at the first invalid or blocked step."""
    q, clock = A.initial, Fraction(0)
    for a, mu in word:
        if mu < clock:
            yield None
            return
        tr = A.enabled(q, a, mu)
        if tr is None:
            yield None
            return
        yield tr
        clock = Fraction(0) if tr.reset else mu
        q = tr.target


def run_logical(A: OTA, word: TimedWord, trick: bool = True) -> Tuple[ResetWord, Verdict]:
    """The membership map: annotate a logical-timed word with resets and classify it.

    A logical word whose clock value decreases without an intervening
    reset cannot be produced by any run.  From that position on every
    reset is reported as taken and the verdict is ``INVALID`` (``REJECT``
    with ``trick`` off).
    """
    out = []
    q = A.initial
    for i, tr in enumerate(_walk_logical(A, word)):
        if tr is None:
            out.extend((b, mu, True) for b, mu in word[i:])
            return tuple(out), Verdict.INVALID if trick else Verdict.REJECT
        out.append((tr.action, word[i][1], tr.reset))
        q = tr.target
    return tuple(out), _verdict(A, q)


def fired_transitions(A: OTA, word: TimedWord) -> Tuple[Optional[Transition], ...]:
    """Transitions fired by a logical word; a trailing ``None`` marks the blocking step."""
    return tuple(_walk_logical(A, word))


# ---------------------------------------------------------------------------
# word transformations
# ---------------------------------------------------------------------------

def project(word) -> TimedWord:
    """Drop the reset component."""
    return tuple((a, t) for a, t, *_ in word)


def to_logical(word: ResetWord) -> ResetWord:
    out = []
    prev, reset = Fraction(0), True
    for a, t, b in word:
        mu = t if reset else prev + t
        out.append((a, mu, b))
        prev, reset = mu, b
    return tuple(out)


def to_delay(word: ResetWord) -> ResetWord:
    out = []
    prev, reset = Fraction(0), True
    for i, (a, mu, b) in enumerate(word):
        t = mu if reset else mu - prev
        if t < 0:
            raise InvalidWord(f"clock value decreases without reset at position {i}")
        out.append((a, t, b))
        prev, reset = mu, b
    return tuple(out)


def first_invalid(word: ResetWord) -> Optional[int]:
    """Index where the logical clock decreases without a reset, or None."""
    prev, reset = Fraction(0), True
    for i, (a, mu, b) in enumerate(word):
        if not reset and mu < prev:
            return i
        prev, reset = mu, b
    return None


def region_of(mu: Fraction) -> Tuple[int, int]:
    """``(n, n)`` for the point region ``[n, n]``, ``(n, n+1)`` for the open unit interval."""
    n = math.floor(mu)
    return (n, n) if mu == n else (n, n + 1)


def normalize_time(mu: Fraction) -> Fraction:
    return mu if mu.denominator == 1 else math.floor(mu) + THETA


def normalize(word: ResetWord) -> ResetWord:
    return tuple((a, normalize_time(mu), b) for a, mu, b in word)


# ---------------------------------------------------------------------------
# canonical ordering
# ---------------------------------------------------------------------------

def word_key(word, alphabet: Sequence[str]) -> tuple:
    """Shorter first, then pointwise by (alphabet index, time, reset with False < True)."""
    index = {a: i for i, a in enumerate(alphabet)}
    return (len(word), tuple((index[a], t, *rest) for a, t, *rest in word))


def accepting_locations_reachable(A: OTA) -> frozenset:
    """Locations from which some accepting location is reachable in the transition graph."""
    back: dict = {}
    for t in A.transitions:
        back.setdefault(t.target, set()).add(t.source)
    live = set(A.accepting)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    return frozenset(live)


def live_location_count(A: OTA) -> int:
    """Number of locations that are not dead, i.e. can still reach acceptance."""
    return len(accepting_locations_reachable(A))
