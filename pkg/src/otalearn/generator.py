"""Seeded random DOTAs in n_m_k families (n locations, m actions, max constant k)."""
from __future__ import annotations

import json
import string
from dataclasses import asdict, dataclass
from pathlib import Path

from .automata import OTA, Guard, Transition
from .io import automaton_to_dict

MASK64 = (1 << 64) - 1


class XorShift64Star:
    """xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).

    The seed is scrambled with one splitmix64 step so that small or zero
    seeds still give a well-mixed nonzero state.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = MASK64 - (MASK64 + 1) % n
        while True:
            v = self.next()
            if v <= limit:
                return v % n

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def sample(self, population, k: int) -> list:
        pool = list(population)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.below(len(pool))))
        return out


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    kappa: int
    seed: int = 0
    density: float = 1.1  # expected transitions per (location, action)

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.kappa < 0:
            raise ValueError(f"invalid generator settings {self}")
        if not 0 <= self.density <= 3:
            raise ValueError("density must lie in [0, 3]")

    @property
    def name(self) -> str:
        return f"{self.n}_{self.m}_{self.kappa}"


def action_names(m: int) -> tuple:
    letters = string.ascii_lowercase
    if m <= len(letters):
        return tuple(letters[:m])
    return tuple(f"a{i}" for i in range(m))


def _cells(rng: XorShift64Star, kappa: int, wanted: int) -> list:
    """A random partition of the region codes 0..2k+1 into contiguous runs."""
    codes = 2 * kappa + 2
    extra = rng.below(3)
    count = min(codes, wanted + extra)
    cuts = sorted(rng.sample(range(1, codes), count - 1))
    bounds = [0] + cuts + [codes]
    return [(bounds[i], bounds[i + 1] - 1) for i in range(len(bounds) - 1)]


def generate(spec: GenSpec) -> OTA:
    rng = XorShift64Star(spec.seed)
    locs = tuple(f"q{i}" for i in range(spec.n))
    alphabet = action_names(spec.m)
    # number of transitions per (q, sigma): binomial(3, density / 3), in thousandths
    p = round(spec.density / 3 * 1000)
    transitions = []

    def add(q, a, k):
        cells = _cells(rng, spec.kappa, k)
        for lo, hi in sorted(rng.sample(cells, min(k, len(cells)))):
            g = Guard.from_codes(lo, hi, spec.kappa)
            transitions.append(Transition(q, a, g, rng.chance(1, 2), locs[rng.below(spec.n)]))

    for q in locs:
        for a in alphabet:
            k = sum(rng.chance(p, 1000) for _ in range(3))
            if k:
                add(q, a, k)
    if not any(t.source == locs[0] for t in transitions):
        add(locs[0], alphabet[rng.below(spec.m)], 1)
    accepting = [q for q in locs if rng.chance(1, 2)]
    if not accepting:
        accepting = [locs[rng.below(spec.n)]]
    return OTA(alphabet, locs, locs[0], frozenset(accepting), tuple(transitions))


def generate_batch(spec: GenSpec, count: int, out_dir) -> list:
    """Write ``count`` automata with seeds ``spec.seed + i`` and a manifest; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries, paths = [], []
    for i in range(count):
        s = GenSpec(spec.n, spec.m, spec.kappa, spec.seed + i, spec.density)
        path = out / f"{s.name}-{i + 1}.json"
        path.write_text(json.dumps(automaton_to_dict(generate(s)), indent=2) + "\n", encoding="utf-8")
        entries.append({"file": path.name, **asdict(s)})
        paths.append(path)
    (out / "manifest.json").write_text(json.dumps({"automata": entries}, indent=2) + "\n", encoding="utf-8")
    return paths
