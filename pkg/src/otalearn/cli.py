"""Command-line entry point: ``otalearn learn|equiv|member|generate|bench``."""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from .automata import StructuralError, Verdict, project, run_delay, run_logical, to_logical, validate
from .equivalence import find_witness
from .generator import GenSpec, generate_batch
from .io import ParseError, dumps_automaton, dumps_stats, load_automaton, parse_word, serialize_word
from .normal import NormalConfig, ResourceLimit, learn_normal
from .sampling import sample_disagreements
from .smart import learn_smart
from .teacher import Oracle

EXIT_OK, EXIT_DIFFERENT, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


def _learn(target, mode, trick=True, evidence=False, max_instances=10**6):
    oracle = Oracle(target, mode, trick)
    if mode == "smart":
        return learn_smart(oracle)
    return learn_normal(oracle, config=NormalConfig(evidence=evidence, max_instances=max_instances))


def cmd_learn(args) -> int:
    target = load_automaton(args.target)
    res = _learn(target, args.mode, not args.no_trick, args.evidence_closed, args.max_instances)
    stats = dict(res.stats)
    if args.seed is not None:
        bad = sample_disagreements(res.hypothesis, target, 1000, seed=args.seed)
        stats["sample_seed"] = args.seed
        stats["sample_disagreements"] = len(bad)
    text = dumps_automaton(res.hypothesis)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.stats:
        Path(args.stats).write_text(dumps_stats(stats), encoding="utf-8")
    print(
        f"learned {stats['locations_learned']} locations "
        f"({stats['locations_non_sink']} non-sink) with {stats['membership_count']} membership "
        f"and {stats['equivalence_count']} equivalence queries",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_equiv(args) -> int:
    A, B = load_automaton(args.first), load_automaton(args.second)
    for X in (A, B):
        if not validate(X).deterministic:
            raise StructuralError("both automata must be deterministic")
    w = find_witness(A, B)
    if w is None:
        print("equivalent")
        return EXIT_OK
    print(serialize_word(w.word))
    if args.witness:
        print(f"{args.first}: {run_delay(A, w.word, trick=False)[1]}")
        print(f"{args.second}: {run_delay(B, w.word, trick=False)[1]}")
    return EXIT_DIFFERENT


def cmd_member(args) -> int:
    A = load_automaton(args.file)
    trick = not args.no_trick
    word = parse_word(args.word, args.kind)
    if args.kind == "delay":
        v = run_delay(A, word, trick)[1]
    elif args.kind == "logical":
        v = run_logical(A, word, trick)[1]
    else:
        logical = word if args.kind == "reset-logical" else to_logical(word)
        annotated, v = run_logical(A, project(logical), trick)
        if annotated != logical:
            # the resets given disagree with the automaton's run
            v = Verdict.REJECT
    print(v.value)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = GenSpec(args.locations, args.alphabet, args.kappa, args.seed, args.density)
    for p in generate_batch(spec, args.count, args.out):
        print(p)
    return EXIT_OK


def cmd_bench(args) -> int:
    files = sorted(p for p in Path(args.dir).glob("*.json") if p.name != "manifest.json")
    runs = []
    for p in files:
        target = load_automaton(p)
        res = _learn(target, args.mode, not args.no_trick, False, args.max_instances)
        ok = find_witness(res.hypothesis, target) is None
        runs.append({"file": p.name, "equivalent": ok, "transitions": len(target.transitions), **res.stats})
        print(f"{p.name}: {'ok' if ok else 'WRONG'} mq={res.stats['membership_count']}", file=sys.stderr)
    summary = {"mode": args.mode, "count": len(runs), "learned": sum(r["equivalent"] for r in runs)}
    for k in ("membership_count", "equivalence_count", "locations_learned", "transitions", "explored_instances"):
        vals = [r[k] for r in runs if k in r]
        if vals:
            summary[f"{k}_mean"] = round(statistics.mean(vals), 3)
    Path(args.stats).write_text(json.dumps({"summary": summary, "runs": runs}, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(summary))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="otalearn", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a target automaton through the built-in teacher")
    p.add_argument("--mode", choices=("smart", "normal"), default="smart")
    p.add_argument("--target", required=True)
    p.add_argument("--no-trick", action="store_true", help="report sink words as '-' instead of 'x'")
    p.add_argument("--evidence-closed", action="store_true", help="check evidence closure in normal mode")
    p.add_argument("--out")
    p.add_argument("--stats")
    p.add_argument("--seed", type=int, help="seed for a 1000-word agreement sample recorded in the stats")
    p.add_argument("--max-instances", type=int, default=10**6)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("equiv", help="decide timed-language equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--witness", action="store_true", help="also print both verdicts on the witness")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("member", help="classify one timed word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--kind", choices=("delay", "logical", "reset-delay", "reset-logical"), default="delay")
    p.add_argument("--no-trick", action="store_true")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("generate", help="write random automata and a manifest")
    p.add_argument("--locations", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--density", type=float, default=1.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="learn every automaton in a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--mode", choices=("smart", "normal"), default="smart")
    p.add_argument("--no-trick", action="store_true")
    p.add_argument("--max-instances", type=int, default=10**6)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, StructuralError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
