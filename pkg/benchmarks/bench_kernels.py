"""Time the region-graph search compiled with numba against the pure-Python fallback.

Each variant runs in its own interpreter because the choice is made at
import time through OTALEARN_DISABLE_NUMBA.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit


def workload():
    from dataclasses import replace

    from otalearn.automata import complete, validate
    from otalearn.generator import GenSpec, generate
    from otalearn.io import load_fixture
    from otalearn.regions import encode, product_search, state_bound

    pairs = []
    tcp = load_fixture("tcp")
    pairs.append(("tcp/tcp", tcp, tcp))
    # two unrelated automata with no accepting location are trivially
    # equivalent, so the search has to exhaust their reachable product
    for n, m, k in ((7, 2, 10), (10, 3, 20)):
        a = replace(generate(GenSpec(n, m, k, seed=1, density=2.0)), accepting=frozenset())
        b = replace(generate(GenSpec(n, m, k, seed=2, density=2.0)), accepting=frozenset())
        pairs.append((f"{n}_{m}_{k} empty-language pair", a, b))
    prepared = []
    for name, h, a in pairs:
        hc, ac = complete(h), complete(a)
        kx, ky = validate(hc).max_constant, validate(ac).max_constant
        th, rh, ah, qh = encode(hc, ac.alphabet, kx)
        ta, ra, aa, qa = encode(ac, ac.alphabet, ky)
        cap = state_bound(len(hc.locations), len(ac.locations), kx, ky)
        prepared.append((name, (th, rh, ah, qh, ta, ra, aa, qa, kx, ky, cap)))
    return product_search, prepared


def worker(repeat: int) -> None:
    from otalearn._jit import USE_NUMBA

    kernel, prepared = workload()
    for _, args in prepared:  # compile / warm up
        kernel(*args)
    out = {"numba": USE_NUMBA, "timings": {}}
    for name, args in prepared:
        t = min(timeit.repeat(lambda: kernel(*args), number=1, repeat=repeat))
        out["timings"][name] = t
    print(json.dumps(out))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true")
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat)
        return
    results = {}
    for label, flag in (("numba", "0"), ("pure", "1")):
        env = dict(os.environ, OTALEARN_DISABLE_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True,
        )
        results[label] = json.loads(proc.stdout)["timings"]
    print(f"{'workload':32s} {'numba [s]':>10s} {'pure [s]':>10s} {'speedup':>8s}")
    for name in results["numba"]:
        a, b = results["numba"][name], results["pure"][name]
        print(f"{name:32s} {a:10.4f} {b:10.4f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
