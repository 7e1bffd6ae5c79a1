"""Rate-region polyhedra and their intersections.

For each sink t the cut-set polyhedron bounds subset rate sums above by
rho_t; the Slepian-Wolf polyhedron bounds them below by conditional
entropies.  The transmissibility condition is equivalent to every per-sink
intersection being nonempty, and the separation condition asks for one
rate point inside all of them at once.  Feasibility runs on an exact
rational phase-1 simplex; float entropy bounds are snapped to rationals at
1e-12 first, so both routes of the equivalence see identical data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import simplex
from .entropy import EntropyProfile, SourceModel, entropy_profile
from .errors import DocumentError
from .graph import Network, normalize_with_renaming, validate_acyclic
from .mincut import DEFAULT_MAX_SOURCES, CapacityProfile, capacity_profile
from .scalars import is_inf, snap_to_rational
from .setfunc import (
    AxiomReport,
    RatePoint,
    SetFunction,
    is_polymatroid,
    iter_nonempty_subsets,
    subset_label,
)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ConstraintSet:
    """Subset-sum constraints over a fixed variable order, plus R >= 0.

    Each constraint reads sum_{i in S} R_i <sense> bound with an exact
    rational bound; infinite upper bounds are omitted as vacuous when the
    set is built from a capacity profile.
    """

    name: str
    variables: tuple[str, ...]
    constraints: tuple  # of (frozenset, "<=" | ">=", Fraction)

    def describe(self) -> list[str]:
        out = []
        for subset, sense, bound in self.constraints:
            label = " + ".join(f"R[{s}]" for s in sorted(subset, key=self.variables.index))
            out.append(f"{label} {sense} {bound}")
        return out


def cutset_polyhedron(net: Network, sink: str, profile: CapacityProfile) -> ConstraintSet:
    """Upper-bound constraints sum_{i in S} R_i <= rho_t(S) for one sink."""
    if sink not in net.sink_set:
        raise ValueError(f"{sink!r} is not a sink node")
    return _cutset_constraints(profile, sink)


def sw_polyhedron(ep: EntropyProfile) -> ConstraintSet:
    """Lower-bound constraints sum_{i in S} R_i >= H(X_S | X_rest)."""
    return _sw_constraints(ep.sigma)


def _cutset_constraints(profile: CapacityProfile, sink: str) -> ConstraintSet:
    rows = []
    for S in iter_nonempty_subsets(profile.sources):
        bound = profile.per_sink[sink][S]
        if is_inf(bound):
            continue
        rows.append((S, "<=", Fraction(bound)))
    return ConstraintSet(name=f"cut[{sink}]", variables=profile.sources, constraints=tuple(rows))


def _sw_constraints(sigma: SetFunction) -> ConstraintSet:
    rows = [(S, ">=", snap_to_rational(sigma(S))) for S in sigma.subsets]
    return ConstraintSet(name="slepian-wolf", variables=sigma.ground, constraints=tuple(rows))


@dataclass(frozen=True)
class InfeasibilityWitness:
    """An irreducible subsystem whose bounds contradict each other."""

    constraints: tuple  # of (set_name, frozenset, sense, Fraction)

    def describe(self, variables: Sequence[str]) -> list[str]:
        out = []
        for set_name, subset, sense, bound in self.constraints:
            label = "+".join(sorted(subset, key=list(variables).index))
            out.append(f"{set_name}: R[{label}] {sense} {bound}")
        return out


@dataclass(frozen=True)
class FeasibilityResult:
    point: Optional[RatePoint]
    witness: Optional[InfeasibilityWitness] = None

    def __bool__(self) -> bool:
        return self.point is not None


def feasible(constraint_sets: Sequence[ConstraintSet]) -> FeasibilityResult:
    """Find a rate point inside every given polyhedron, or certify failure.

    All sets must share the same variable order.  On failure the witness
    is an irreducible infeasible subsystem found by deletion filtering, so
    every listed constraint is necessary for the contradiction.
    """
    if not constraint_sets:
        raise ValueError("at least one constraint set is required")
    variables = constraint_sets[0].variables
    for cs in constraint_sets[1:]:
        if cs.variables != variables:
            raise ValueError(
                f"variable order mismatch: {cs.variables} vs {variables}"
            )
    flat = []
    origin = []
    for cs in constraint_sets:
        for subset, sense, bound in cs.constraints:
            flat.append((subset, sense, bound))
            origin.append(cs.name)
    point = simplex.solve_feasibility(variables, flat)
    if point is not None:
        return FeasibilityResult(RatePoint(point))
    core = simplex.irreducible_infeasible_subset(variables, flat)
    witness = tuple(
        (origin[k], flat[k][0], flat[k][1], flat[k][2]) for k in core
    )
    return FeasibilityResult(None, InfeasibilityWitness(witness))


def prepare_profiles(net: Network, m: SourceModel, max_sources: int = DEFAULT_MAX_SOURCES):
    """Normalize, validate, and compute both profiles with aligned names.

    Shared plumbing for the top-level checks.  The model's source names
    must equal the network's (pre-normalization) sources as a set; the
    returned sigma is re-keyed to the normalized network's source names.
    Returns (normalized net, capacity profile, sigma, entropy profile,
    renaming original->network).
    """
    if set(m.sources) != set(net.sources):
        raise DocumentError(
            f"source model names {sorted(m.sources)} do not match "
            f"network sources {sorted(net.sources)}"
        )
    nnet, renaming = normalize_with_renaming(net)
    validate_acyclic(nnet)
    profile = capacity_profile(nnet, max_sources=max_sources)
    ep = entropy_profile(m, max_sources=max_sources)
    mapped = {
        frozenset(renaming[s] for s in S): ep.sigma(S) for S in ep.sigma.subsets
    }
    sigma = SetFunction(ground=profile.sources, values=mapped)
    return nnet, profile, sigma, ep, renaming


@dataclass(frozen=True)
class EquivalenceReport:
    """Both faces of the matching condition, evaluated independently.

    ``condition_holds``: pointwise sigma(S) <= rho_n(S) on 1e-12-snapped
    entropies (exact comparison).  ``regions_nonempty``: every per-sink
    intersection of the Slepian-Wolf and cut-set polyhedra is nonempty by
    LP.  The two must agree; ``agreement`` is "boundary" when they agree
    only thanks to the tolerance band around a tight instance, and
    "inconsistent" marks an internal-consistency failure.
    """

    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    condition_holds: bool
    min_margin: float
    worst_subset: frozenset
    regions_nonempty: bool
    per_sink: dict  # sink -> FeasibilityResult
    tolerance: float
    agreement: str  # "agree" | "boundary" | "inconsistent"


def equivalence_check(
    net: Network,
    m: SourceModel,
    tol: float = DEFAULT_TOLERANCE,
    *,
    max_sources: int = DEFAULT_MAX_SOURCES,
) -> EquivalenceReport:
    """Evaluate the matching condition and the per-sink region test."""
    _, profile, sigma, ep, _ = prepare_profiles(net, m, max_sources)

    min_margin = None
    worst = None
    holds = True
    for S in sigma.subsets:
        rho = profile.network_wide[S]
        margin = float("inf") if is_inf(rho) else float(rho - snap_to_rational(sigma(S)))
        if snap_to_rational(sigma(S)) > rho:
            holds = False
        if min_margin is None or margin < min_margin:
            min_margin = margin
            worst = S

    sw = _sw_constraints(sigma)
    per_sink = {}
    nonempty = True
    for t in profile.sinks:
        result = feasible([sw, _cutset_constraints(profile, t)])
        per_sink[t] = result
        if not result:
            nonempty = False

    if holds == nonempty:
        agreement = "boundary" if abs(min_margin) <= tol else "agree"
    else:
        agreement = "boundary" if abs(min_margin) <= tol else "inconsistent"
    return EquivalenceReport(
        sources=profile.sources,
        sinks=profile.sinks,
        condition_holds=holds,
        min_margin=min_margin,
        worst_subset=worst,
        regions_nonempty=nonempty,
        per_sink=per_sink,
        tolerance=tol,
        agreement=agreement,
    )


@dataclass(frozen=True)
class SeparationReport:
    """Separability of distributed source coding from network coding.

    Separation holds iff one rate point lies in the Slepian-Wolf region
    and every sink's cut-set region simultaneously: the sources can then
    be compressed to independent rates first and routed as plain flows.
    ``rho_n_polymatroid`` reports the sufficient-condition route (when the
    network-wide capacity function is a polymatroid, the sandwich property
    already yields such a point).
    """

    separable: bool
    witness: Optional[RatePoint]
    infeasibility: Optional[InfeasibilityWitness]
    rho_n_polymatroid: AxiomReport
    sources: tuple[str, ...]
    sinks: tuple[str, ...]


def separation_check(
    net: Network,
    m: SourceModel,
    tol: float = DEFAULT_TOLERANCE,
    *,
    max_sources: int = DEFAULT_MAX_SOURCES,
) -> SeparationReport:
    """Decide feasibility of the all-sinks intersection with the SW region."""
    _, profile, sigma, ep, _ = prepare_profiles(net, m, max_sources)
    sw = _sw_constraints(sigma)
    sets = [sw] + [_cutset_constraints(profile, t) for t in profile.sinks]
    result = feasible(sets)
    axiom_report = is_polymatroid(profile.rho_n_function())
    return SeparationReport(
        separable=bool(result),
        witness=result.point,
        infeasibility=result.witness,
        rho_n_polymatroid=axiom_report,
        sources=profile.sources,
        sinks=profile.sinks,
    )
