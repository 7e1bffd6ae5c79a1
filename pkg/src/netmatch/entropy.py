"""Finite i.i.d. source models and their joint/conditional entropy rates.

A model fixes a finite alphabet per source node and one joint pmf for a
single symbol time; the process is its i.i.d. extension, so every entropy
rate is a single-letter Shannon entropy in bits per symbol.  Entropies of
rational pmfs are generally irrational, hence computed in floating point;
downstream comparisons against exact capacities go through tolerances or
rational snapping.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DocumentError, LimitError
from .scalars import parse_probability
from .setfunc import SetFunction, iter_nonempty_subsets

PMF_TOLERANCE = 1e-12
DEFAULT_MAX_SOURCES = 16


@dataclass(frozen=True)
class SourceModel:
    """Joint pmf of one symbol time over the named source nodes.

    ``pmf`` maps symbol tuples (aligned with ``sources``) to probabilities;
    omitted tuples carry probability zero.  Probabilities may be exact
    rationals or floats; rational pmfs are validated exactly.
    """

    sources: tuple[str, ...]
    alphabet_sizes: tuple[int, ...]
    pmf: Mapping[tuple, object]

    def alphabet_of(self, source: str) -> int:
        return self.alphabet_sizes[self.sources.index(source)]

    def is_rational(self) -> bool:
        return all(isinstance(p, (Fraction, int)) for p in self.pmf.values())


def validate_model(m: SourceModel) -> None:
    """Check arity, symbol ranges and normalization; raise DocumentError."""
    if not m.sources:
        raise DocumentError("source model needs at least one source")
    if len(m.alphabet_sizes) != len(m.sources):
        raise DocumentError("one alphabet size per source is required")
    for size in m.alphabet_sizes:
        if not isinstance(size, int) or size < 1:
            raise DocumentError(f"alphabet sizes must be positive integers, got {size!r}")
    for tup, p in m.pmf.items():
        if len(tup) != len(m.sources):
            raise DocumentError(f"symbol tuple {tup!r} has wrong arity")
        for sym, size in zip(tup, m.alphabet_sizes):
            if not isinstance(sym, int) or not 0 <= sym < size:
                raise DocumentError(f"symbol {sym!r} outside alphabet of size {size}")
        if p < 0:
            raise DocumentError(f"negative probability for {tup!r}")
    total = sum(m.pmf.values(), Fraction(0))
    if m.is_rational():
        if total != 1:
            raise DocumentError(f"pmf sums to {total}, not 1")
    elif abs(float(total) - 1.0) > PMF_TOLERANCE:
        raise DocumentError(f"pmf sums to {float(total)!r}, not 1 within {PMF_TOLERANCE}")


def parse_source_model(text: str) -> SourceModel:
    """Parse a source document (JSON) into a validated model.

    Document shape::

        {"sources": ["s1", "s2"],
         "alphabets": [2, 2],
         "pmf": [{"symbols": [0, 0], "p": "1/4"}, ...]}

    The source order fixes tuple coordinates.  ``p`` is a JSON number or
    an exact rational string.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"source document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("source document must be a JSON object")
    for key in ("sources", "alphabets", "pmf"):
        if key not in doc:
            raise DocumentError(f"source document is missing {key!r}")
    sources = doc["sources"]
    if not isinstance(sources, list) or not all(isinstance(s, str) for s in sources):
        raise DocumentError("'sources' must be a list of strings")
    if len(set(sources)) != len(sources):
        raise DocumentError("duplicate source name")
    alphabets = doc["alphabets"]
    if not isinstance(alphabets, list):
        raise DocumentError("'alphabets' must be a list of integers")
    pmf = {}
    if not isinstance(doc["pmf"], list):
        raise DocumentError("'pmf' must be a list of {symbols, p} entries")
    for entry in doc["pmf"]:
        if not isinstance(entry, dict) or not {"symbols", "p"} <= entry.keys():
            raise DocumentError(f"malformed pmf entry: {entry!r}")
        symbols = entry["symbols"]
        if not isinstance(symbols, list):
            raise DocumentError(f"pmf entry symbols must be a list: {entry!r}")
        tup = tuple(symbols)
        if tup in pmf:
            raise DocumentError(f"duplicate pmf entry for {tup!r}")
        try:
            pmf[tup] = parse_probability(entry["p"])
        except ValueError as exc:
            raise DocumentError(f"pmf entry {tup!r}: {exc}") from exc
    model = SourceModel(
        sources=tuple(sources),
        alphabet_sizes=tuple(alphabets),
        pmf=pmf,
    )
    validate_model(model)
    return model


def source_model_to_document(m: SourceModel) -> dict:
    from .scalars import format_scalar

    entries = []
    for tup in sorted(m.pmf):
        p = m.pmf[tup]
        rendered = format_scalar(p) if isinstance(p, (Fraction, int)) else float(p)
        entries.append({"symbols": list(tup), "p": rendered})
    return {
        "sources": list(m.sources),
        "alphabets": list(m.alphabet_sizes),
        "pmf": entries,
    }


def marginal_pmf(m: SourceModel, subset: Iterable[str]) -> dict:
    """Marginal distribution over the given sources (exact when the pmf is)."""
    S = frozenset(subset)
    positions = [k for k, s in enumerate(m.sources) if s in S]
    if len(positions) != len(S):
        unknown = S - set(m.sources)
        raise ValueError(f"unknown sources {sorted(unknown)}")
    out: dict = {}
    for tup, p in m.pmf.items():
        key = tuple(tup[k] for k in positions)
        out[key] = out.get(key, Fraction(0)) + p
    return out


def _shannon_bits(probabilities: Iterable) -> float:
    total = 0.0
    for p in probabilities:
        p = float(p)
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def joint_entropy(m: SourceModel, subset: Iterable[str]) -> float:
    """Shannon entropy of the subset's marginal, in bits per symbol."""
    S = frozenset(subset)
    if not S:
        raise ValueError("subset must be nonempty")
    return _shannon_bits(marginal_pmf(m, S).values())


def conditional_entropy(m: SourceModel, subset: Iterable[str]) -> float:
    """H of the subset given the complementary sources: H(all) - H(rest)."""
    S = frozenset(subset)
    if not S:
        raise ValueError("subset must be nonempty")
    rest = frozenset(m.sources) - S
    if not rest:
        return joint_entropy(m, S)
    return joint_entropy(m, m.sources) - joint_entropy(m, rest)


@dataclass(frozen=True)
class EntropyProfile:
    """Per-subset conditional and joint entropies as set functions.

    ``sigma(S)`` is the conditional entropy of S given its complement;
    ``joint(S)`` is the plain joint entropy; both in bits per symbol.
    """

    sigma: SetFunction
    joint: SetFunction


def entropy_profile(m: SourceModel, *, max_sources: int = DEFAULT_MAX_SOURCES) -> EntropyProfile:
    if len(m.sources) > max_sources:
        raise LimitError(
            f"{len(m.sources)} sources exceed the subset enumeration bound {max_sources}"
        )
    validate_model(m)
    subsets = iter_nonempty_subsets(m.sources)
    joint_values = {S: joint_entropy(m, S) for S in subsets}
    full = joint_values[frozenset(m.sources)]
    sigma_values = {}
    for S in subsets:
        rest = frozenset(m.sources) - S
        sigma_values[S] = full - joint_values[rest] if rest else full
    # Conditioning can only reduce entropy; clip the float dust at zero so
    # set-function nonnegativity holds exactly.
    sigma_values = {S: max(0.0, v) for S, v in sigma_values.items()}
    return EntropyProfile(
        sigma=SetFunction(ground=tuple(m.sources), values=sigma_values),
        joint=SetFunction(ground=tuple(m.sources), values=joint_values),
    )


def binary_entropy(p) -> float:
    """Entropy of a Bernoulli(p) bit, with the 0 log 0 = 0 convention."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)
