"""Categories whose arrows are partial identities between finite sets.

Each object is a state with a finite set of element ids.  An arrow
``s -> t`` records the set of elements kept by the update; everything else
in ``s`` is deleted and everything else in ``t`` is inserted.  Composition
intersects the kept sets, so it is relational composition of the partial
identities.  The caller decides which kept sets are admissible for each pair
of states; admissible sets must be closed under intersection along
composable pairs (``validate_category`` checks this).
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import chain, combinations

from .errors import BoundExceeded, PreconditionError
from .fincat import FinCategory, LazyComposition


def subsets(items: Iterable[str]) -> list[frozenset[str]]:
    """All subsets of ``items`` in a deterministic order."""
    base = sorted(set(items))
    return [frozenset(c) for c in chain.from_iterable(
        combinations(base, k) for k in range(len(base) + 1))]


def delta_name(source: str, target: str, kept: Iterable[str]) -> str:
    return f"{source}=>{target}~keep{{{';'.join(sorted(kept))}}}"


@dataclass(frozen=True)
class Delta:
    source: str
    target: str
    kept: frozenset[str]

    @property
    def name(self) -> str:
        return delta_name(self.source, self.target, self.kept)


@dataclass(frozen=True, eq=False)
class DeltaCategory:
    category: FinCategory
    elements: Mapping[str, frozenset[str]]
    deltas: Mapping[str, Delta]

    @cached_property
    def _by_parts(self) -> dict[tuple[str, str, frozenset[str]], str]:
        return {(d.source, d.target, d.kept): a for a, d in self.deltas.items()}

    def arrow(self, source: str, target: str, kept: Iterable[str]) -> str:
        """Name of the arrow ``source -> target`` keeping ``kept``."""
        key = (source, target, frozenset(kept))
        try:
            return self._by_parts[key]
        except KeyError:
            raise PreconditionError(
                f"no such arrow: {delta_name(*key)}") from None

    def arrow_exists(self, source: str, target: str, kept: Iterable[str]) -> bool:
        return (source, target, frozenset(kept)) in self._by_parts

    def delta(self, arrow: str) -> Delta:
        try:
            return self.deltas[arrow]
        except KeyError:
            raise PreconditionError(f"no such arrow: {arrow}") from None

    def inserted(self, arrow: str) -> frozenset[str]:
        d = self.delta(arrow)
        return self.elements[d.target] - d.kept

    def deleted(self, arrow: str) -> frozenset[str]:
        d = self.delta(arrow)
        return self.elements[d.source] - d.kept


def delta_category(states: Mapping[str, Iterable[str]],
                   kept_options: Callable[[str, str], Iterable[Iterable[str]]] | None = None,
                   name: str = "", max_arrows: int | None = None) -> DeltaCategory:
    """Build the category of admissible partial identities between ``states``.

    ``kept_options(s, t)`` yields the admissible kept sets for arrows
    ``s -> t``; by default every subset of the common elements is allowed.
    The full kept set of a state must be admissible on its endomorphisms,
    since it is the identity.
    """
    elements = {s: frozenset(e) for s, e in states.items()}
    if kept_options is None:
        def kept_options(s, t):
            return subsets(elements[s] & elements[t])
    arrows: dict[str, tuple[str, str]] = {}
    deltas: dict[str, Delta] = {}
    by_parts: dict[tuple[str, str, frozenset[str]], str] = {}
    for s in elements:
        for t in elements:
            common = elements[s] & elements[t]
            for kept in kept_options(s, t):
                kept = frozenset(kept)
                if not kept <= common:
                    raise PreconditionError(f"kept set of {s} -> {t} is not shared by both states")
                d = Delta(s, t, kept)
                a = d.name
                arrows[a] = (s, t)
                deltas[a] = d
                by_parts[(s, t, kept)] = a
                if max_arrows is not None and len(arrows) > max_arrows:
                    raise BoundExceeded(f"category {name} exceeds {max_arrows} arrows")
    identities = {}
    for s, els in elements.items():
        ident = by_parts.get((s, s, els))
        if ident is None:
            raise PreconditionError(f"state {s} has no identity delta")
        identities[s] = ident

    def rule(g: str, f: str) -> str:
        dg, df = deltas[g], deltas[f]
        kept = dg.kept & df.kept
        # an inadmissible intersection names no arrow; validation reports it
        return by_parts.get((df.source, dg.target, kept), delta_name(df.source, dg.target, kept))

    cat = FinCategory(tuple(elements), arrows, identities, LazyComposition(arrows, rule), name)
    dc = DeltaCategory(cat, elements, deltas)
    dc.__dict__["_by_parts"] = by_parts
    return dc
