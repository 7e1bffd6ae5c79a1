"""Max-flow capacity functions against the exhaustive cut-enumeration oracle."""

import random
from fractions import Fraction

import pytest

from netmatch import fixtures
from netmatch.errors import LimitError
from netmatch.graph import Edge, Network, cut_value, normalize_with_renaming
from netmatch.mincut import (
    capacity_profile,
    enumerate_min_cut,
    max_flow,
    rho_n,
    rho_t,
)
from netmatch.scalars import INF
from netmatch.setfunc import is_polymatroid

from conftest import random_network


def test_butterfly_per_sink_values():
    net = fixtures.butterfly_network()
    expected = {
        ("t1", frozenset({"s2"})): 1,
        ("t2", frozenset({"s1"})): 1,
        ("t1", frozenset({"s1"})): 2,
        ("t2", frozenset({"s2"})): 2,
        ("t1", frozenset({"s1", "s2"})): 2,
        ("t2", frozenset({"s1", "s2"})): 2,
    }
    for (t, S), value in expected.items():
        assert rho_t(net, S, t) == Fraction(value)


def test_butterfly_network_wide_values():
    net = fixtures.butterfly_network()
    assert rho_n(net, {"s1"}) == 1
    assert rho_n(net, {"s2"}) == 1
    assert rho_n(net, {"s1", "s2"}) == 2


def test_single_edge():
    net = Network(("s", "t"), (Edge("s", "t", Fraction(3)),), ("s",), ("t",))
    value, members = max_flow(net, {"s"}, "t")
    assert value == 3
    assert members == frozenset({"s"})


def test_max_flow_matches_enumeration_on_random_dags():
    rng = random.Random(4242)
    for _ in range(50):
        net = random_network(rng)
        for t in net.sinks:
            for S in _nonempty_subsets(net.sources):
                value, members = max_flow(net, S, t)
                oracle_value, _ = enumerate_min_cut(net, S, t)
                assert value == oracle_value
                assert S <= members and t not in members


def _nonempty_subsets(names):
    names = list(names)
    out = []
    for mask in range(1, 1 << len(names)):
        out.append(frozenset(n for k, n in enumerate(names) if mask >> k & 1))
    return out


def test_flow_cut_duality_is_exact():
    rng = random.Random(5)
    for _ in range(40):
        net = random_network(rng)
        t = net.sinks[-1]
        value, members = max_flow(net, net.sources, t)
        assert cut_value(net, members) == value


def test_subdividing_an_edge_preserves_max_flow():
    rng = random.Random(6)
    for _ in range(25):
        net = random_network(rng, max_nodes=6)
        t = net.sinks[0]
        base, _ = max_flow(net, net.sources, t)
        k = rng.randrange(len(net.edges))
        e = net.edges[k]
        mid = "mid"
        edges = list(net.edges)
        edges[k:k + 1] = [Edge(e.tail, mid, e.capacity), Edge(mid, e.head, e.capacity)]
        position = net.nodes.index(e.head)
        nodes = net.nodes[:position] + (mid,) + net.nodes[position:]
        subdivided = Network(nodes, tuple(edges), net.sources, net.sinks)
        again, _ = max_flow(subdivided, subdivided.sources, t)
        assert again == base


def test_rho_n_is_min_over_sinks_with_equality():
    rng = random.Random(7)
    for _ in range(25):
        net = random_network(rng)
        S = frozenset(net.sources)
        per_sink = [rho_t(net, S, t) for t in net.sinks]
        assert rho_n(net, S) == min(per_sink)
        assert min(per_sink) in per_sink


def test_rho_t_is_polymatroid_on_random_networks():
    rng = random.Random(8)
    for _ in range(25):
        net = random_network(rng)
        profile = capacity_profile(net)
        for t in net.sinks:
            report = is_polymatroid(profile.rho_t_function(t), tol=0)
            assert report.holds, report


def test_capacity_profile_butterfly():
    profile = capacity_profile(fixtures.butterfly_network())
    assert profile.network_wide[frozenset({"s1"})] == 1
    assert profile.network_wide[frozenset({"s1", "s2"})] == 2
    assert len(profile.per_sink["t1"]) == 3
    assert profile.binding_sink(frozenset({"s1"})) == "t2"
    assert profile.cuts[("t2", frozenset({"s1"}))]  # a member set was recorded


def test_capacity_profile_single_source():
    net = Network(("s", "t"), (Edge("s", "t", Fraction(1, 2)),), ("s",), ("t",))
    profile = capacity_profile(net)
    assert profile.network_wide == {frozenset({"s"}): Fraction(1, 2)}


def test_capacity_profile_subset_bound():
    names = tuple(f"s{k}" for k in range(17)) + ("t",)
    net = Network(
        nodes=names,
        edges=(Edge("s0", "t", Fraction(1)),),
        sources=names[:-1],
        sinks=("t",),
    )
    with pytest.raises(LimitError, match="subset enumeration bound"):
        capacity_profile(net)


def test_argument_validation():
    net = fixtures.butterfly_network()
    with pytest.raises(ValueError, match="inside the source set"):
        max_flow(net, {"s1", "t1"}, "t1")
    with pytest.raises(ValueError, match="nonempty"):
        rho_t(net, set(), "t1")
    with pytest.raises(ValueError, match="not a sink"):
        rho_t(net, {"s1"}, "u")
    with pytest.raises(ValueError, match="not a subset of the source nodes"):
        rho_t(net, {"u"}, "t1")


def test_normalization_edge_never_binds():
    # A source that is also a sink gets split through an infinite edge; the
    # capacity function toward the *other* sink is unchanged, and toward
    # itself it is infinite.
    net = Network(
        nodes=("k", "t"),
        edges=(Edge("k", "t", Fraction(2)),),
        sources=("k",),
        sinks=("k", "t"),
    )
    normalized, renaming = normalize_with_renaming(net)
    s = renaming["k"]
    assert rho_t(normalized, {s}, "t") == 2
    assert rho_t(normalized, {s}, "k") == INF


def test_max_flow_infinite_value():
    net = Network(
        nodes=("s", "m", "t"),
        edges=(Edge("s", "m", INF), Edge("m", "t", INF)),
        sources=("s",),
        sinks=("t",),
    )
    value, members = max_flow(net, {"s"}, "t")
    assert value == INF
    assert cut_value(net, members) == INF
