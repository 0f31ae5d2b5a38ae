"""Deterministic generators and the dataset summary."""

import math

import pytest

from tgcsa.baseline import EdgeLogIndex
from tgcsa.corpus import ContactSet
from tgcsa.synth import (GenSpec, XorShift64Star, dataset_stats, generate,
                         preset_icomm, preset_powerlaw)
from conftest import G5_CONTACTS


def test_prng_is_reproducible():
    a = XorShift64Star(7)
    b = XorShift64Star(7)
    seq = [a.next_u64() for _ in range(200)]
    assert seq == [b.next_u64() for _ in range(200)]
    assert all(0 < x < 2**64 for x in seq)
    assert len(set(seq)) == 200


def test_consecutive_seeds_give_unrelated_streams():
    flat = []
    for s in range(10):
        r = XorShift64Star(s)
        flat += [r.next_u64() for _ in range(4)]
    assert len(set(flat)) == len(flat)


def test_seed_zero_is_usable():
    r = XorShift64Star(0)
    assert r.next_u64() != 0
    assert r.next_u64() != r.next_u64()


def test_randint_is_inclusive_and_bounded():
    r = XorShift64Star(3)
    seen = set()
    for _ in range(2000):
        x = r.randint(2, 5)
        assert 2 <= x <= 5
        seen.add(x)
    assert seen == {2, 3, 4, 5}
    assert XorShift64Star(1).randint(7, 7) == 7


def test_random_unit_interval():
    r = XorShift64Star(9)
    xs = [r.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert 0.4 < sum(xs) / len(xs) < 0.6


def test_genspec_validation():
    ok = dict(nu=20, m=2, lifetime=10, dist="uniform", dist_param=1,
              overlap="allow", seed=0)
    GenSpec(**ok)
    for field, bad in (("nu", 2), ("m", 0), ("lifetime", 1),
                       ("dist", "zipf"), ("overlap", "maybe")):
        with pytest.raises(ValueError):
            GenSpec(**{**ok, field: bad})
    with pytest.raises(ValueError):
        GenSpec(**{**ok, "m": 25})          # m must stay below nu
    with pytest.raises(ValueError):
        GenSpec(**{**ok, "dist": "pareto", "dist_param": 1.0})


def test_attachment_edge_count_is_exact():
    for nu, m in ((100, 10), (50, 3), (20, 1)):
        cs = generate(GenSpec(nu=nu, m=m, lifetime=12, dist="uniform",
                              dist_param=1, overlap="allow", seed=4))
        st = dataset_stats(cs)
        assert st["edges"] == m * (nu - m)
    # the desk-scale profile lands near the reference count of 941
    assert abs(10 * (100 - 10) - 941) / 941 < 0.10


def test_generation_is_deterministic():
    spec = GenSpec(nu=40, m=4, lifetime=30, dist="pareto", dist_param=1.5,
                   overlap="allow", seed=77)
    assert generate(spec).tuples() == generate(spec).tuples()
    other = GenSpec(nu=40, m=4, lifetime=30, dist="pareto", dist_param=1.5,
                    overlap="allow", seed=78)
    assert generate(other).tuples() != generate(spec).tuples()


def test_uniform_contact_count_per_edge():
    cs = generate(GenSpec(nu=30, m=2, lifetime=20, dist="uniform",
                          dist_param=5, overlap="allow", seed=1))
    st = dataset_stats(cs)
    assert st["contacts"] == st["edges"] * 5
    assert st["contacts_per_edge"] == 5


def test_pareto_contact_counts_vary_and_respect_cap():
    alpha = 1.5
    cap = math.ceil(10 * alpha / (alpha - 1))
    cs = generate(GenSpec(nu=60, m=3, lifetime=40, dist="pareto",
                          dist_param=alpha, overlap="allow", seed=12))
    per_edge = {}
    for u, v, *_ in cs.tuples():
        per_edge[(u, v)] = per_edge.get((u, v), 0) + 1
    counts = sorted(per_edge.values())
    assert counts[0] >= 1
    assert counts[-1] <= cap
    assert counts[0] != counts[-1]      # a heavy tail, not a constant


def test_forbid_overlap_feeds_the_log_baseline():
    cs = generate(GenSpec(nu=40, m=3, lifetime=50, dist="uniform",
                          dist_param=4, overlap="forbid", seed=6))
    EdgeLogIndex.build(cs)              # raises on any overlap or touch
    # per-edge intervals must be strictly separated
    seen = {}
    for u, v, ts, te in cs.tuples():
        seen.setdefault((u, v), []).append((ts, te))
    for spans in seen.values():
        spans.sort()
        for (a, b), (c, d) in zip(spans, spans[1:]):
            assert b < c


def test_forbid_overlap_needs_room():
    with pytest.raises(ValueError, match="disjoint intervals"):
        generate(GenSpec(nu=20, m=2, lifetime=5, dist="uniform",
                         dist_param=4, overlap="forbid", seed=2))


def test_icomm_preset_shape():
    cs = preset_icomm(nu=100, seed=0)
    st = dataset_stats(cs)
    assert st["nu"] == 100
    assert st["tau"] == 100
    assert st["edges"] == round(15.941 * 100)
    assert st["contacts"] == round(1.2 * st["edges"])
    assert 1.15 < st["contacts_per_edge"] < 1.25
    assert all(1 <= te - ts <= 3 for _, _, ts, te in cs.tuples())
    assert preset_icomm(nu=100, seed=0).tuples() == cs.tuples()


def test_powerlaw_preset_shape():
    cs = preset_powerlaw(nu=200, seed=0)
    st = dataset_stats(cs)
    assert st["edges"] == 33 * (200 - 33)
    assert st["contacts"] == st["edges"]
    assert st["tau"] == 20
    assert all(1 <= ts < te <= 20 for _, _, ts, te in cs.tuples())
    with pytest.raises(ValueError):
        preset_powerlaw(nu=33)


def test_dataset_stats_frozen_for_g5():
    st = dataset_stats(ContactSet(G5_CONTACTS))
    assert st["size_b_bits"] == 60
    assert st["size_u32_bits"] == 640
    assert st["contacts"] == 5
    assert st["edges"] == 5
    assert st["contacts_per_vertex"] == 1.0
    assert st["contacts_per_edge"] == 1.0


def test_dataset_stats_empty():
    st = dataset_stats(ContactSet([], nu=3, tau=4))
    assert st["contacts"] == 0
    assert st["edges"] == 0
    assert st["contacts_per_edge"] == 0.0
