"""Text and JSON formats: guards, timed words, automata and run statistics."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .automata import OTA, Guard, Transition

KINDS = ("delay", "logical", "reset-delay", "reset-logical")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class KindMismatch(ParseError):
    pass


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def offset(self) -> int:
        return len(self.text[: self.i].encode("utf-8"))

    def fail(self, msg: str, cls=ParseError):
        raise cls(msg, self.offset())

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, chars: str) -> str:
        self.skip_ws()
        c = self.peek()
        if not c or c not in chars:
            self.fail(f"expected one of {chars!r}, got {c!r}" if c else f"expected one of {chars!r}, got end of input")
        self.i += 1
        return c

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip_ws()
        m = pattern.match(self.text, self.i)
        if not m:
            self.fail(f"expected {what}")
        self.i = m.end()
        return m.group(0)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.i >= len(self.text)


_NAT = re.compile(r"\d+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
# plain decimals, plus p/q for values with no finite decimal expansion
_TIME = re.compile(r"\d+(?:\.\d+)?(?:/\d+)?")


# ---------------------------------------------------------------------------
# guards
# ---------------------------------------------------------------------------

def parse_guard(text: str) -> Guard:
    cur = _Cursor(text)
    left = cur.expect("[(")
    lower = int(cur.match(_NAT, "natural number"))
    cur.expect(",")
    cur.skip_ws()
    if cur.peek() == "+":
        cur.i += 1
        upper = None
    else:
        upper = int(cur.match(_NAT, "natural number or '+'"))
    pos = cur.offset()
    right = cur.expect("])")
    if upper is None and right == "]":
        raise ParseError("an unbounded guard must end with ')'", pos)
    if not cur.at_end():
        cur.fail("trailing characters")
    try:
        return Guard(lower, left == "[", upper, right == "]")
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def serialize_guard(g: Guard) -> str:
    return str(g)


# ---------------------------------------------------------------------------
# timed words
# ---------------------------------------------------------------------------

def parse_time(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if "." in den:
            raise ValueError("denominator must be a natural number")
        return Fraction(num) / int(den)
    return Fraction(text)


def format_time(t: Fraction) -> str:
    """Finite decimal when one exists, ``p/q`` otherwise."""
    t = Fraction(t)
    if t.denominator == 1:
        return str(t.numerator)
    d = t.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{t.numerator}/{t.denominator}"
    digits = max(twos, fives)
    scaled = t * 10**digits
    whole, frac = divmod(scaled.numerator, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


def parse_word(text: str, kind: str = "delay") -> tuple:
    if kind not in KINDS:
        raise ValueError(f"unknown word kind {kind!r}")
    with_reset = kind.startswith("reset")
    cur = _Cursor(text)
    out = []
    while not cur.at_end():
        cur.expect("(")
        action = cur.match(_IDENT, "action name")
        cur.expect(",")
        pos = cur.offset()
        raw = cur.match(_TIME, "time value")
        try:
            t = parse_time(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad time value {raw!r}", pos) from None
        sep = cur.expect(",)")
        if sep == ",":
            if not with_reset:
                cur.fail(f"reset field not allowed in a {kind} word", KindMismatch)
            flag = cur.expect("RN")
            cur.expect(")")
            out.append((action, t, flag == "R"))
        else:
            if with_reset:
                cur.fail(f"missing reset field in a {kind} word", KindMismatch)
            out.append((action, t))
    return tuple(out)


def serialize_word(word) -> str:
    parts = []
    for a, t, *rest in word:
        if rest:
            parts.append(f"({a},{format_time(t)},{'R' if rest[0] else 'N'})")
        else:
            parts.append(f"({a},{format_time(t)})")
    return "".join(parts)


# ---------------------------------------------------------------------------
# automata
# ---------------------------------------------------------------------------

def automaton_to_dict(A: OTA) -> dict:
    doc = {
        "alphabet": list(A.alphabet),
        "locations": list(A.locations),
        "initial": A.initial,
        "accepting": [q for q in A.locations if q in A.accepting],
        "transitions": [
            {
                "source": t.source,
                "action": t.action,
                "guard": serialize_guard(t.guard),
                "reset": t.reset,
                "target": t.target,
            }
            for t in A.transitions
        ],
    }
    if A.sink is not None:
        doc["sink"] = A.sink
    return doc


def automaton_from_dict(doc: dict) -> OTA:
    try:
        transitions = tuple(
            Transition(t["source"], t["action"], parse_guard(t["guard"]), bool(t["reset"]), t["target"])
            for t in doc["transitions"]
        )
        return OTA(
            tuple(doc["alphabet"]),
            tuple(doc["locations"]),
            doc["initial"],
            frozenset(doc["accepting"]),
            transitions,
            doc.get("sink"),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed automaton document: {exc!r}", 0) from None


def dumps_automaton(A: OTA) -> str:
    return json.dumps(automaton_to_dict(A), indent=2) + "\n"


def loads_automaton(text: str) -> OTA:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    return automaton_from_dict(doc)


def load_automaton(path) -> OTA:
    return loads_automaton(Path(path).read_text(encoding="utf-8"))


def save_automaton(A: OTA, path) -> None:
    Path(path).write_text(dumps_automaton(A), encoding="utf-8")


def load_fixture(name: str) -> OTA:
    """Bundled example automata: ``"running_example"`` and ``"tcp"``."""
    from importlib.resources import files

    return loads_automaton(files("otalearn.data").joinpath(f"{name}.json").read_text(encoding="utf-8"))


STATS_FIELDS = (
    "mode",
    "membership_count",
    "equivalence_count",
    "locations_learned",
    "locations_non_sink",
    "table_rows",
    "table_columns",
    "explored_instances",
    "discarded_instances",
    "cache_hits",
    "wall_time_ms",
)


def stats_document(stats: dict) -> dict:
    """Order the known fields first; optional ones are dropped when absent."""
    doc = {k: stats[k] for k in STATS_FIELDS if stats.get(k) is not None}
    for k, v in stats.items():
        if k not in doc and v is not None:
            doc[k] = v
    return doc


def dumps_stats(stats: dict) -> str:
    return json.dumps(stats_document(stats), indent=2) + "\n"


def read_json(path) -> Optional[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
