"""Shared builders for the tests."""
from otalearn.automata import Verdict
from otalearn.io import parse_word
from otalearn.smart import learn_smart
from otalearn.teacher import ScriptedOracle


def W(text, kind="reset-logical"):
    return parse_word(text, kind)


def L(text):
    return parse_word(text, "logical")


def D(text):
    return parse_word(text, "delay")


# counterexamples of the documented learning run on the running example
SCRIPT = [
    ("(a,1.1,N)", "+"),
    ("(a,1.1,N)(b,0.9,R)", "+"),
    ("(a,3,R)", "-"),
    ("(a,0,R)(a,1.3,R)", "-"),
    ("(a,1.1,N)(b,2.9,R)", "-"),
]

# expected tables T1..T10: (event, S rows, R rows, E); each row is (prefix, verdicts)
_E1 = ["e"]
_E2 = ["e", "(a,1.1)"]
_T3_S = [("e", "-"), ("(a,1.1,N)", "+")]
_T3_R = [("(a,0,R)", "-"), ("(a,1.1,N)(a,0,R)", "-"), ("(b,0,R)", "-"), ("(a,1.1,N)(b,0,R)", "-")]
_T7_S = [("e", "-+"), ("(a,1.1,N)", "+-")]
_T7_R = [
    ("(a,0,R)", "--"),
    ("(b,0,R)", "-+"),
    ("(a,1.1,N)(a,0,R)", "--"),
    ("(a,1.1,N)(b,0,R)", "--"),
    ("(a,1.1,N)(b,2,R)", "+-"),
    ("(a,3,R)", "--"),
    ("(a,0,R)(a,1.1,R)", "--"),
]
GOLDEN = [
    ("init", [("e", "-")], [("(a,0,R)", "-"), ("(b,0,R)", "-")], _E1),
    ("counterexample", [("e", "-")], [("(a,0,R)", "-"), ("(b,0,R)", "-"), ("(a,1.1,N)", "+")], _E1),
    ("closed", _T3_S, _T3_R, _E1),
    ("counterexample", _T3_S, _T3_R + [("(a,1.1,N)(b,2,R)", "+")], _E1),
    ("counterexample", _T3_S, _T3_R + [("(a,1.1,N)(b,2,R)", "+"), ("(a,3,R)", "-")], _E1),
    (
        "counterexample",
        _T3_S,
        _T3_R + [("(a,1.1,N)(b,2,R)", "+"), ("(a,3,R)", "-"), ("(a,0,R)(a,1.1,R)", "-")],
        _E1,
    ),
    ("consistent", _T7_S, _T7_R, _E2),
    ("evidence", _T7_S, _T7_R + [("(a,1.1,N)(a,1.1,R)", "--")], _E2),
    (
        "closed",
        _T7_S + [("(a,0,R)", "--")],
        _T7_R[1:] + [("(a,1.1,N)(a,1.1,R)", "--"), ("(a,0,R)(a,0,R)", "--"), ("(a,0,R)(b,0,R)", "--")],
        _E2,
    ),
    (
        "counterexample",
        _T7_S + [("(a,0,R)", "--")],
        _T7_R[1:]
        + [
            ("(a,1.1,N)(a,1.1,R)", "--"),
            ("(a,0,R)(a,0,R)", "--"),
            ("(a,0,R)(b,0,R)", "--"),
            ("(a,1.1,N)(b,4,R)", "--"),
        ],
        _E2,
    ),
]


def parse_rows(rows):
    out = {}
    for text, verdicts in rows:
        out[() if text == "e" else W(text)] = tuple(Verdict(v) for v in verdicts)
    return out


def parse_suffixes(es):
    return [() if e == "e" else L(e) for e in es]


def golden_run(target):
    """Replay the scripted counterexamples; returns (result, [(event, table copy)], oracle)."""
    script = [(W(w, "reset-delay"), s) for w, s in SCRIPT]
    oracle = ScriptedOracle(target, script, trick=False)
    snaps = []
    res = learn_smart(oracle, on_snapshot=lambda ev, T: snaps.append((ev, T.copy())))
    return res, snaps, oracle


def table_matches(T, expected):
    """Compare a table with an expected (event, S, R, E) entry, cell for cell."""
    _, s_rows, r_rows, es = expected
    E = parse_suffixes(es)
    if T.E != E:
        return False
    S, R = parse_rows(s_rows), parse_rows(r_rows)
    if set(T.S) != set(S) or set(T.R) != set(R):
        return False
    if T.S != list(S):
        return False
    rows = T.rows()
    return all(rows[p] == v for p, v in {**S, **R}.items())
