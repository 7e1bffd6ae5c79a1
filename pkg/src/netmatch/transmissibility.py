"""The headline check: can the correlated sources be multicast at all?

The matching condition compares, for every nonempty subset S of sources,
the conditional entropy rate of S given the rest against the network-wide
capacity function rho_n(S).  The sources are transmissible exactly when no
subset's entropy exceeds its capacity.  The flagship instances sit exactly
on the boundary, so each row carries a three-valued status (pass / tight /
fail) instead of a bare boolean, and the overall verdict distinguishes
"boundary" (every subset tight) from plain "transmissible".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .entropy import SourceModel
from .graph import Edge, Network
from .mincut import DEFAULT_MAX_SOURCES
from .regions import DEFAULT_TOLERANCE, prepare_profiles
from .scalars import format_scalar, is_inf
from .setfunc import iter_nonempty_subsets, subset_label


@dataclass(frozen=True)
class SubsetRow:
    """One subset's entropy/capacity comparison.

    ``margin`` is rho_n(S) minus the conditional entropy of S; the status
    is "fail" below -tolerance, "tight" within it, "pass" above.
    ``binding_sink`` attains the minimum over sinks, and ``cut_members`` /
    ``cut_edges`` describe one minimum cut for that sink, kept so that
    diagnostics can point at concrete edges.
    """

    subset: frozenset
    label: str
    sigma: float
    rho: object  # Fraction or inf
    margin: float
    status: str
    binding_sink: str
    cut_members: frozenset
    cut_edges: tuple[Edge, ...]


@dataclass(frozen=True)
class TransmissibilityReport:
    rows: tuple[SubsetRow, ...]
    verdict: str  # "transmissible" | "not-transmissible" | "boundary"
    tolerance: float
    sources: tuple[str, ...]
    sinks: tuple[str, ...]

    @property
    def min_margin(self) -> float:
        return min(row.margin for row in self.rows)

    @property
    def worst_row(self) -> SubsetRow:
        return min(self.rows, key=lambda row: row.margin)

    @property
    def transmissible(self) -> bool:
        return self.verdict != "not-transmissible"


def check(
    net: Network,
    m: SourceModel,
    tol: float = DEFAULT_TOLERANCE,
    *,
    max_sources: int = DEFAULT_MAX_SOURCES,
) -> TransmissibilityReport:
    """Evaluate the matching condition with per-subset diagnostics.

    The network is normalized first (a no-op when already normalized);
    report rows are labeled with the model's original source names in
    deterministic order (subsets by size, then lexicographically by
    source position).
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    nnet, profile, sigma, ep, renaming = prepare_profiles(net, m, max_sources)
    original = {renaming[s]: s for s in renaming}

    rows = []
    for S in iter_nonempty_subsets(profile.sources):
        rho = profile.network_wide[S]
        h = sigma(S)
        margin = float("inf") if is_inf(rho) else float(rho) - h
        if margin < -tol:
            status = "fail"
        elif margin <= tol:
            status = "tight"
        else:
            status = "pass"
        sink = profile.binding_sink(S)
        members = profile.cuts[(sink, S)]
        cut_edges = tuple(
            e for e in nnet.edges if e.tail in members and e.head not in members
        )
        user_subset = frozenset(original[s] for s in S)
        rows.append(
            SubsetRow(
                subset=user_subset,
                label=subset_label(user_subset, m.sources),
                sigma=h,
                rho=rho,
                margin=margin,
                status=status,
                binding_sink=sink,
                cut_members=members,
                cut_edges=cut_edges,
            )
        )

    if any(row.status == "fail" for row in rows):
        verdict = "not-transmissible"
    elif all(row.status == "tight" for row in rows):
        verdict = "boundary"
    else:
        verdict = "transmissible"
    return TransmissibilityReport(
        rows=tuple(rows),
        verdict=verdict,
        tolerance=tol,
        sources=tuple(m.sources),
        sinks=profile.sinks,
    )


def diagnose(report: TransmissibilityReport) -> str:
    """Human-readable summary: tightest subsets, binding sinks, and the
    smallest total capacity increase that could restore a failing check."""
    lines = [f"verdict: {report.verdict} (tolerance {report.tolerance:g})"]
    tight = [row for row in report.rows if row.status == "tight"]
    failing = [row for row in report.rows if row.status == "fail"]

    if failing:
        worst = report.worst_row
        delta = -worst.margin
        lines.append(
            f"violated on {len(failing)} subset(s); worst is {{{worst.label}}} "
            f"with margin {worst.margin:.9g} at sink {worst.binding_sink}"
        )
        edges = ", ".join(
            f"({e.tail}->{e.head}, {format_scalar(e.capacity)})" for e in worst.cut_edges
        )
        lines.append(
            f"any fix must add at least {delta:.9g} bits/symbol of capacity "
            f"across the minimum cut of {{{worst.label}}}: edges {edges}"
        )
    else:
        worst = report.worst_row
        lines.append(
            f"transmissible with minimum margin {worst.margin:.9g} "
            f"on subset {{{worst.label}}}"
        )
    for row in tight:
        lines.append(f"tight subset {{{row.label}}}: binding sink {row.binding_sink}")
    return "\n".join(lines)
