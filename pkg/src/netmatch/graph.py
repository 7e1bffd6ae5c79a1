"""Capacitated acyclic networks: representation, validation, normalization.

A network is a finite digraph without self-loops, a nonnegative capacity
(bits per symbol) on every edge, a set of source nodes and a set of sink
nodes.  A *normalized* network additionally has disjoint source/sink sets
and no edge entering a source; :func:`normalize` rewrites any valid
network into that form without changing what is transmissible over it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import CycleError, DocumentError
from .scalars import INF, is_inf, parse_scalar


class Edge(NamedTuple):
    tail: str
    head: str
    capacity: object  # Fraction, or INF


@dataclass(frozen=True)
class Network:
    """Immutable capacitated digraph with designated sources and sinks.

    Parallel edges are allowed and kept distinct; their capacities add up
    in every cut.  Construction validates local shape only (endpoints,
    self-loops, capacity signs); acyclicity and normalization are separate
    checks because several operations accept un-normalized input.
    """

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    _node_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        node_set = frozenset(self.nodes)
        if len(node_set) != len(self.nodes):
            raise DocumentError("duplicate node identifiers")
        if not self.sources:
            raise DocumentError("at least one source node is required")
        if not self.sinks:
            raise DocumentError("at least one sink node is required")
        for group, names in (("source", self.sources), ("sink", self.sinks)):
            for name in names:
                if name not in node_set:
                    raise DocumentError(f"unknown {group} node {name!r}")
        if len(set(self.sources)) != len(self.sources):
            raise DocumentError("duplicate source node")
        if len(set(self.sinks)) != len(self.sinks):
            raise DocumentError("duplicate sink node")
        for edge in self.edges:
            if edge.tail not in node_set or edge.head not in node_set:
                raise DocumentError(f"edge ({edge.tail!r}, {edge.head!r}) uses an unknown node")
            if edge.tail == edge.head:
                raise DocumentError(f"self-loop edge at node {edge.tail!r}")
            cap = edge.capacity
            if is_inf(cap):
                continue
            if not isinstance(cap, Fraction):
                raise DocumentError(
                    f"capacity of edge ({edge.tail!r}, {edge.head!r}) must be a Fraction or inf"
                )
            if cap < 0:
                raise DocumentError(f"negative capacity on edge ({edge.tail!r}, {edge.head!r})")
        object.__setattr__(self, "_node_set", node_set)

    @property
    def source_set(self) -> frozenset:
        return frozenset(self.sources)

    @property
    def sink_set(self) -> frozenset:
        return frozenset(self.sinks)

    def has_node(self, name: str) -> bool:
        return name in self._node_set

    def in_edges(self, node: str) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.head == node]

    def out_edges(self, node: str) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.tail == node]


@dataclass(frozen=True)
class Cut:
    """A node bipartition (member_set, rest) with its crossing capacity."""

    member_set: frozenset
    value: object


def parse_network(text: str) -> Network:
    """Parse a network document (JSON) into a validated Network.

    Document shape::

        {"nodes": ["s1", ...],
         "edges": [{"from": "s1", "to": "u", "capacity": "1"}, ...],
         "sources": ["s1", ...],
         "sinks": ["t1", ...]}

    Capacities are rational strings (``"1"``, ``"3/2"``), integers, or
    ``"inf"``.  Node order is preserved from the input.  A repeated
    (from, to) pair is rejected as a duplicate edge; to model parallel
    capacity in a document, sum it into one edge (cut values add either
    way).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"network document is not valid JSON: {exc}") from exc
    return network_from_document(doc)


def network_from_document(doc) -> Network:
    if not isinstance(doc, dict):
        raise DocumentError("network document must be a JSON object")
    for key in ("nodes", "edges", "sources", "sinks"):
        if key not in doc:
            raise DocumentError(f"network document is missing {key!r}")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise DocumentError("'nodes' must be a list of strings")
    edges = []
    seen_pairs = set()
    if not isinstance(doc["edges"], list):
        raise DocumentError("'edges' must be a list")
    for entry in doc["edges"]:
        if not isinstance(entry, dict) or not {"from", "to", "capacity"} <= entry.keys():
            raise DocumentError(f"malformed edge entry: {entry!r}")
        tail, head = entry["from"], entry["to"]
        if (tail, head) in seen_pairs:
            raise DocumentError(f"duplicate edge ({tail!r}, {head!r})")
        seen_pairs.add((tail, head))
        try:
            cap = parse_scalar(entry["capacity"])
        except ValueError as exc:
            raise DocumentError(f"edge ({tail!r}, {head!r}): {exc}") from exc
        edges.append(Edge(tail, head, cap))
    for key in ("sources", "sinks"):
        if not isinstance(doc[key], list) or not all(isinstance(n, str) for n in doc[key]):
            raise DocumentError(f"'{key}' must be a list of strings")
    return Network(
        nodes=tuple(nodes),
        edges=tuple(edges),
        sources=tuple(doc["sources"]),
        sinks=tuple(doc["sinks"]),
    )


def network_to_document(net: Network) -> dict:
    """Inverse of :func:`network_from_document` (capacities as strings)."""
    from .scalars import format_scalar

    return {
        "nodes": list(net.nodes),
        "edges": [
            {"from": e.tail, "to": e.head, "capacity": format_scalar(e.capacity)}
            for e in net.edges
        ],
        "sources": list(net.sources),
        "sinks": list(net.sinks),
    }


def validate_acyclic(net: Network) -> tuple[str, ...]:
    """Return a topological order of the nodes, or raise :class:`CycleError`.

    Every edge goes from an earlier to a later node in the returned order;
    ties are broken by input node order, so the result is deterministic.
    This order is also the coding order used by the simulator.
    """
    index = {name: k for k, name in enumerate(net.nodes)}
    indegree = {name: 0 for name in net.nodes}
    succs: dict[str, list[str]] = {name: [] for name in net.nodes}
    for e in net.edges:
        indegree[e.head] += 1
        succs[e.tail].append(e.head)

    ready = sorted((name for name, d in indegree.items() if d == 0), key=index.get)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        changed = False
        for nxt in succs[node]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
                changed = True
        if changed:
            ready.sort(key=index.get)
    if len(order) == len(net.nodes):
        return tuple(order)

    # Extract one concrete cycle: shrink the unresolved remainder to nodes
    # that still have a successor inside it, then walk until a repeat.
    remaining = {name for name, d in indegree.items() if d > 0}
    while True:
        stuck = {n for n in remaining if not any(h in remaining for h in succs[n])}
        if not stuck:
            break
        remaining -= stuck
    node = min(remaining, key=index.get)
    seen: list[str] = []
    while node not in seen:
        seen.append(node)
        node = next(h for h in succs[node] if h in remaining)
    cycle = seen[seen.index(node):]
    raise CycleError(cycle)


def is_normalized(net: Network) -> bool:
    """True iff sources and sinks are disjoint and no edge enters a source."""
    src = net.source_set
    if src & net.sink_set:
        return False
    return all(e.head not in src for e in net.edges)


def _fresh_name(base: str, taken: set) -> str:
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def normalize(net: Network) -> Network:
    """Split every source that is also a sink or has incoming edges.

    Each offending source ``k`` gets a fresh node ``k'`` feeding it through
    an infinite-capacity edge ``(k', k)``; ``k'`` replaces ``k`` in the
    source set.  Transmissibility semantics are unchanged: the infinite
    edge never participates in a finite cut.  Idempotent; already-normalized
    networks are returned unchanged.
    """
    if is_normalized(net):
        return net
    renamed = normalize_with_renaming(net)[0]
    return renamed


def normalize_with_renaming(net: Network) -> tuple[Network, dict[str, str]]:
    """Like :func:`normalize` but also return {original source: new source}."""
    nodes = list(net.nodes)
    edges = list(net.edges)
    sources = list(net.sources)
    sinks = net.sink_set
    taken = set(nodes)
    renaming: dict[str, str] = {s: s for s in net.sources}

    heads_into = {e.head for e in edges}
    for pos, k in enumerate(list(sources)):
        if k in sinks or k in heads_into:
            fresh = _fresh_name(k, taken)
            taken.add(fresh)
            nodes.insert(nodes.index(k), fresh)
            edges.append(Edge(fresh, k, INF))
            sources[pos] = fresh
            renaming[k] = fresh
    result = Network(tuple(nodes), tuple(edges), tuple(sources), tuple(net.sinks))
    return result, renaming


def cut_value(net: Network, member_set: Iterable[str]):
    """Total capacity of edges leaving ``member_set`` (Fraction, or inf)."""
    members = frozenset(member_set)
    for name in members:
        if not net.has_node(name):
            raise DocumentError(f"unknown node {name!r}")
    total = Fraction(0)
    for e in net.edges:
        if e.tail in members and e.head not in members:
            total = total + e.capacity
    return total


def make_cut(net: Network, member_set: Iterable[str]) -> Cut:
    members = frozenset(member_set)
    return Cut(member_set=members, value=cut_value(net, members))
