"""Synthetic contact sets with reproducible randomness.

The generator is a self-contained xorshift64* so the same seed yields
the same graph on any platform or Python build; nothing here depends on
the stdlib RNG. Graphs come from a preferential-attachment process (new
vertices attach to m distinct earlier ones, picked proportionally to
degree), then every edge receives its contacts from a duration
distribution, either overlapping freely or laid out disjointly.

Two presets approximate familiar dataset shapes: a dense communication
network with short contacts, and a sparse power-law graph with one
contact per edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import ContactSet

_MASK = (1 << 64) - 1


class XorShift64Star:
    """xorshift64* with splitmix64 seed whitening."""

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & _MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        z ^= z >> 31
        self.state = z or 0x2545F4914F6CDD1D

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 2685821657736338717) & _MASK

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b], both ends included."""
        if a > b:
            raise ValueError(f"empty range [{a}, {b}]")
        return a + self.next_u64() % (b - a + 1)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def pareto(self, alpha: float) -> float:
        """Pareto variate with scale 1 via the inverse CDF."""
        u = 1.0 - self.random()
        return u ** (-1.0 / alpha)


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one synthetic graph."""

    nu: int
    m: int
    lifetime: int
    dist: str = "uniform"
    dist_param: float = 1.0
    overlap: str = "allow"
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.nu <= self.m:
            raise ValueError("need at least m preferential targets, so nu > m >= 1")
        if self.lifetime < 2:
            raise ValueError("a lifetime below 2 leaves no room for an interval")
        if self.dist not in ("uniform", "pareto"):
            raise ValueError(f"unknown duration distribution {self.dist!r}")
        if self.dist == "uniform" and int(self.dist_param) < 1:
            raise ValueError("uniform contact count must be at least 1")
        if self.dist == "pareto" and self.dist_param <= 1.0:
            raise ValueError("pareto shape must exceed 1 for a finite mean")
        if self.overlap not in ("allow", "forbid"):
            raise ValueError(f"unknown overlap mode {self.overlap!r}")


def _ba_edges(nu: int, m: int, rng: XorShift64Star) -> list[tuple[int, int]]:
    """Preferential-attachment edge list: exactly m*(nu-m) distinct pairs.

    Vertices 2..m+1 form a star around vertex 1; every later vertex picks
    m distinct targets from a pool holding each endpoint once per edge,
    which makes the pick degree-proportional.
    """
    edges = []
    pool = []
    for w in range(2, m + 2):
        edges.append((w, 1))
        pool += [w, 1]
    for w in range(m + 2, nu + 1):
        seen = set()
        while len(seen) < m:
            seen.add(pool[rng.randint(0, len(pool) - 1)])
        for t in sorted(seen):
            edges.append((w, t))
            pool += [w, t]
    return edges


def _contact_count(spec: GenSpec, rng: XorShift64Star) -> int:
    if spec.dist == "uniform":
        return int(spec.dist_param)
    mean = spec.dist_param / (spec.dist_param - 1.0)
    cap = max(1, math.ceil(10.0 * mean))
    return min(math.ceil(rng.pareto(spec.dist_param)), cap)


def _disjoint_intervals(rng: XorShift64Star, k: int,
                        lifetime: int) -> list[tuple[int, int]]:
    """k pairwise disjoint, non-touching half-open intervals in [1, lifetime]."""
    if 2 * k > lifetime:
        raise ValueError(
            f"cannot place {k} disjoint intervals in a lifetime of {lifetime}")
    picks = set()
    while len(picks) < 2 * k:
        picks.add(rng.randint(1, lifetime))
    cuts = sorted(picks)
    return [(cuts[2 * i], cuts[2 * i + 1]) for i in range(k)]


def generate(spec: GenSpec) -> ContactSet:
    """A full synthetic contact set for the given parameters."""
    rng = XorShift64Star(spec.seed)
    rows = []
    for u, v in _ba_edges(spec.nu, spec.m, rng):
        k = _contact_count(spec, rng)
        if spec.overlap == "forbid":
            for ts, te in _disjoint_intervals(rng, k, spec.lifetime):
                rows.append((u, v, ts, te))
        else:
            for _ in range(k):
                ts = rng.randint(1, spec.lifetime - 1)
                rows.append((u, v, ts, rng.randint(ts + 1, spec.lifetime)))
    return ContactSet(rows, arity=4, nu=spec.nu, tau=spec.lifetime)


def preset_icomm(nu: int = 100, lifetime: int | None = None,
                 seed: int = 0) -> ContactSet:
    """Communication-network profile: ~15.9 edges per vertex, 1.2 contacts
    per edge, contact durations of 1 to 3 steps."""
    tau = nu if lifetime is None else lifetime
    if tau < 4:
        raise ValueError("the communication profile needs a lifetime of at least 4")
    e_target = round(15.941 * nu)
    if e_target > nu * (nu - 1):
        raise ValueError(f"{nu} vertices cannot carry {e_target} distinct edges")
    c_target = round(1.2 * e_target)
    rng = XorShift64Star(seed)
    seen = set()
    pairs = []
    while len(pairs) < e_target:
        u = rng.randint(1, nu)
        v = rng.randint(1, nu)
        if u != v and (u, v) not in seen:
            seen.add((u, v))
            pairs.append((u, v))
    rows = []

    def stamp(u, v):
        d = rng.randint(1, 3)
        ts = rng.randint(1, tau - d)
        rows.append((u, v, ts, ts + d))

    for u, v in pairs:
        stamp(u, v)
    for _ in range(c_target - e_target):
        u, v = pairs[rng.randint(0, e_target - 1)]
        stamp(u, v)
    return ContactSet(rows, arity=4, nu=nu, tau=tau)


def preset_powerlaw(nu: int = 1000, seed: int = 0) -> ContactSet:
    """Power-law profile: heavy preferential attachment, one short contact
    per edge, lifetime a tenth of the vertex count."""
    if nu <= 33:
        raise ValueError("the power-law profile needs more than 33 vertices")
    spec = GenSpec(nu=nu, m=33, lifetime=max(2, nu // 10),
                   dist="uniform", dist_param=1, overlap="allow", seed=seed)
    return generate(spec)


def dataset_stats(cs: ContactSet) -> dict:
    """Shape and naive-size summary of a contact set.

    size_u32_bits is the flat four-int (or three-int) encoding;
    size_b_bits packs every term into its minimal fixed width.
    """
    def width(x):
        return (x - 1).bit_length()

    n = len(cs)
    e = cs.distinct_edges()
    per_contact = 2 * width(cs.nu) + (2 if cs.arity == 4 else 1) * width(cs.tau)
    return {
        "nu": cs.nu,
        "edges": e,
        "tau": cs.tau,
        "contacts": n,
        "contacts_per_vertex": n / cs.nu if cs.nu else 0.0,
        "edges_per_vertex": e / cs.nu if cs.nu else 0.0,
        "contacts_per_edge": n / e if e else 0.0,
        "size_u32_bits": n * cs.arity * 32,
        "size_b_bits": n * per_contact,
    }
