"""Capacity functions of a network: minimum cuts separating source subsets
from sinks.

``rho_t(S)`` is the smallest cut value over bipartitions keeping the
source subset S on one side and sink t on the other; ``rho_n(S)`` is its
minimum over all sinks (the network-wide capacity function).  Max-flow
computes these in exact rational arithmetic so that boundary instances
are decided bit-exactly; :func:`enumerate_min_cut` is the brute-force
reference used to cross-check it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import LimitError
from .graph import Network, cut_value
from .scalars import INF, is_inf
from .setfunc import SetFunction, iter_nonempty_subsets

#: Hard default on the number of sources whose subsets get enumerated.
DEFAULT_MAX_SOURCES = 16

#: Node-count guard for exhaustive cut enumeration.
MAX_ENUMERATION_NODES = 24


def max_flow(net: Network, source_set: Iterable[str], sink: str):
    """Maximum flow from a set of sources to one sink, with a minimum cut.

    Returns ``(value, member_set)`` where ``member_set`` is the source
    side of a minimum cut (it contains every node of ``source_set`` and
    not ``sink``), and ``cut_value(net, member_set) == value`` exactly.
    The source set is contracted through a virtual super-source attached
    by infinite-capacity arcs, so node identities survive in the cut.
    """
    sources = list(dict.fromkeys(source_set))
    if not sources:
        raise ValueError("source_set must be nonempty")
    for name in sources + [sink]:
        if not net.has_node(name):
            raise ValueError(f"unknown node {name!r}")
    if sink in sources:
        raise ValueError(f"sink {sink!r} is inside the source set")

    index = {name: k for k, name in enumerate(net.nodes)}
    n = len(net.nodes) + 1
    super_source = n - 1

    # Adjacency with paired residual arcs: arcs[k] = [to, cap, pair_index]
    arcs: list[list] = []
    adj: list[list[int]] = [[] for _ in range(n)]

    def add_arc(u: int, v: int, cap):
        adj[u].append(len(arcs))
        arcs.append([v, cap, None])
        adj[v].append(len(arcs))
        arcs.append([u, Fraction(0), None])
        arcs[-2][2] = len(arcs) - 1
        arcs[-1][2] = len(arcs) - 2

    for e in net.edges:
        add_arc(index[e.tail], index[e.head], e.capacity)
    for s in sources:
        add_arc(super_source, index[s], INF)

    t = index[sink]
    value = Fraction(0)

    while True:
        parent_arc = [-1] * n
        parent_arc[super_source] = -2
        queue = deque([super_source])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for a in adj[u]:
                to, cap, _ = arcs[a]
                if parent_arc[to] == -1 and cap > 0:
                    parent_arc[to] = a
                    queue.append(to)
        if parent_arc[t] == -1:
            break
        # Bottleneck along the augmenting path.
        bottleneck = INF
        v = t
        while v != super_source:
            a = parent_arc[v]
            bottleneck = min(bottleneck, arcs[a][1])
            v = arcs[arcs[a][2]][0]
        if is_inf(bottleneck):
            # An all-infinite path exists, so every admissible cut is
            # infinite; any member set works as a witness.
            return INF, frozenset(net.nodes) - {sink}
        v = t
        while v != super_source:
            a = parent_arc[v]
            arcs[a][1] -= bottleneck
            arcs[arcs[a][2]][1] += bottleneck
            v = arcs[arcs[a][2]][0]
        value += bottleneck

    # Source side of the minimum cut: nodes reachable in the residual graph.
    reach = [False] * n
    reach[super_source] = True
    queue = deque([super_source])
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            to, cap, _ = arcs[a]
            if not reach[to] and cap > 0:
                reach[to] = True
                queue.append(to)
    members = frozenset(name for name, k in index.items() if reach[k])
    return value, members


def rho_t(net: Network, subset: Iterable[str], sink: str):
    """Capacity separating the source subset from one sink (min cut value)."""
    S = frozenset(subset)
    if not S:
        raise ValueError("source subset must be nonempty")
    if not S <= net.source_set:
        raise ValueError(f"{sorted(S)} is not a subset of the source nodes")
    if sink not in net.sink_set:
        raise ValueError(f"{sink!r} is not a sink node")
    return max_flow(net, sorted(S, key=net.nodes.index), sink)[0]


def rho_n(net: Network, subset: Iterable[str]):
    """Network-wide capacity function: min over sinks of :func:`rho_t`."""
    S = frozenset(subset)
    return min(rho_t(net, S, t) for t in net.sinks)


@dataclass(frozen=True)
class CapacityProfile:
    """All rho values of a network, over every nonempty source subset.

    ``per_sink[t][S]`` is rho_t(S); ``network_wide[S]`` is their minimum
    over sinks; ``cuts[(t, S)]`` is the member set of one minimum cut,
    kept for diagnostics.
    """

    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    per_sink: dict
    network_wide: dict
    cuts: dict

    def rho_t_function(self, sink: str) -> SetFunction:
        return SetFunction(ground=self.sources, values=dict(self.per_sink[sink]))

    def rho_n_function(self) -> SetFunction:
        return SetFunction(ground=self.sources, values=dict(self.network_wide))

    def binding_sink(self, subset: frozenset) -> str:
        """First sink (in sink order) attaining the network-wide minimum."""
        value = self.network_wide[subset]
        for t in self.sinks:
            if self.per_sink[t][subset] == value:
                return t
        raise KeyError(subset)


def capacity_profile(net: Network, *, max_sources: int = DEFAULT_MAX_SOURCES) -> CapacityProfile:
    """Evaluate rho_t and rho_n for all nonempty source subsets and sinks.

    Subset enumeration is exponential in the number of sources by design;
    raises :class:`LimitError` past ``max_sources``.
    """
    if len(net.sources) > max_sources:
        raise LimitError(
            f"{len(net.sources)} sources exceed the subset enumeration bound {max_sources}"
        )
    subsets = iter_nonempty_subsets(net.sources)
    per_sink: dict = {t: {} for t in net.sinks}
    cuts: dict = {}
    for t in net.sinks:
        for S in subsets:
            value, members = max_flow(net, sorted(S, key=net.nodes.index), t)
            per_sink[t][S] = value
            cuts[(t, S)] = members
    network_wide = {S: min(per_sink[t][S] for t in net.sinks) for S in subsets}
    return CapacityProfile(
        sources=tuple(net.sources),
        sinks=tuple(net.sinks),
        per_sink=per_sink,
        network_wide=network_wide,
        cuts=cuts,
    )


def enumerate_min_cut(net: Network, subset: Iterable[str], sink: str):
    """Exhaustive minimum cut: brute force over all admissible member sets.

    Independent of the max-flow path; used as its testing oracle.  Returns
    ``(value, member_set)`` with deterministic tie-breaking (first minimum
    in enumeration order).
    """
    S = frozenset(subset)
    if not S:
        raise ValueError("source subset must be nonempty")
    if sink in S:
        raise ValueError(f"sink {sink!r} is inside the source subset")
    if len(net.nodes) > MAX_ENUMERATION_NODES:
        raise LimitError(f"cut enumeration limited to {MAX_ENUMERATION_NODES} nodes")
    free = [v for v in net.nodes if v not in S and v != sink]
    best_value = None
    best_members = None
    for r in range(len(free) + 1):
        for extra in combinations(free, r):
            members = S | frozenset(extra)
            value = cut_value(net, members)
            if best_value is None or value < best_value:
                best_value = value
                best_members = members
    return best_value, best_members
