"""Asymmetric delta lenses as commutative triangles of functors.

A lens ``S -> V`` is an apex category with two legs: ``view_leg: apex -> V``,
a discrete opfibration, and ``source_leg: apex -> S``, bijective on objects,
together with a Get functor ``S -> V`` making the triangle commute.  Put is
read off the triangle: lift the view delta along ``view_leg`` at the unique
apex object over the source state, then push the lift down ``source_leg``.
"""
from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cached_property

from .errors import BoundExceeded, FootMismatch, NotFunctorial, PreconditionError
from .fincat import (
    FinCategory,
    Functor,
    LazyComposition,
    Violation,
    WideSpan,
    identity_functor,
    is_bijective_on_objects,
    is_discrete_opfibration,
    pullback,
    validate_functor,
)


@dataclass(frozen=True, eq=False)
class AsymmetricLens:
    source: FinCategory
    view: FinCategory
    apex: FinCategory
    view_leg: Functor
    source_leg: Functor
    get: Functor
    name: str = ""

    def __repr__(self):
        return f"<AsymmetricLens {self.name or '?'}: {self.source!r} -> {self.view!r}>"

    @cached_property
    def _apex_over(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for lam, s in self.source_leg.on_objects.items():
            out.setdefault(s, lam)
        return out

    @cached_property
    def _lifts(self) -> dict[str, dict[str, str]]:
        lifts: dict[str, dict[str, str]] = {}
        for a, (lam, _) in self.apex.arrows.items():
            lifts.setdefault(lam, {}).setdefault(self.view_leg.on_arrows[a], a)
        return lifts

    def lift(self, s: str, alpha: str) -> str:
        """The apex arrow over ``alpha`` at the apex object above ``s``."""
        try:
            lam = self._apex_over[s]
        except KeyError:
            raise PreconditionError(f"no such object: {s}") from None
        if alpha not in self.view.arrows:
            raise PreconditionError(f"no such arrow: {alpha}")
        image = self.get.on_objects[s]
        if self.view.arrows[alpha][0] != image:
            raise PreconditionError(f"arrow {alpha} does not start at the view {image} of {s}")
        try:
            return self._lifts[lam][alpha]
        except KeyError:
            raise PreconditionError(f"arrow {alpha} has no lift at {s}") from None


def put(l: AsymmetricLens, s: str, alpha: str) -> str:
    """The source delta at ``s`` over the view delta ``alpha``."""
    return l.source_leg.on_arrows[l.lift(s, alpha)]


def get_object(l: AsymmetricLens, x: str) -> str:
    return l.get.obj(x)


def get_arrow(l: AsymmetricLens, a: str) -> str:
    return l.get.arr(a)


def validate_lens(l: AsymmetricLens, deep: bool = False) -> list[Violation]:
    """Check wiring, commutativity of the triangle and the two leg conditions.

    With ``deep`` the three functors are also checked against the functor
    laws, which is exhaustive over composable pairs of the apex.
    """
    out: list[Violation] = []
    wiring = [
        (l.view_leg.domain, l.apex, "view leg does not start at the apex"),
        (l.source_leg.domain, l.apex, "source leg does not start at the apex"),
        (l.view_leg.codomain, l.view, "view leg does not end at the view"),
        (l.source_leg.codomain, l.source, "source leg does not end at the source"),
        (l.get.domain, l.source, "Get does not start at the source"),
        (l.get.codomain, l.view, "Get does not end at the view"),
    ]
    for have, want, msg in wiring:
        if have != want:
            out.append(Violation("wiring", (l.name,), msg))
    if out:
        return out
    if deep:
        for fn in (l.view_leg, l.source_leg, l.get):
            out.extend(validate_functor(fn))
        if out:
            return out
    for lam in l.apex.objects:
        via = l.get.on_objects.get(l.source_leg.on_objects.get(lam))
        if via != l.view_leg.on_objects.get(lam):
            out.append(Violation("triangle does not commute", (lam,),
                                 f"object {lam}: G(P) = {via} but F = {l.view_leg.on_objects.get(lam)}"))
    for a in l.apex.arrows:
        via = l.get.on_arrows.get(l.source_leg.on_arrows.get(a))
        if via != l.view_leg.on_arrows.get(a):
            out.append(Violation("triangle does not commute", (a,),
                                 f"arrow {a}: G(P) = {via} but F = {l.view_leg.on_arrows.get(a)}"))
    ok, witness = is_discrete_opfibration(l.view_leg)
    if not ok:
        lam, e, lifts = witness
        out.append(Violation("not a discrete opfibration", (lam, e) + lifts,
                             f"{len(lifts)} lifts of {e} at {lam}"))
    ok, witness = is_bijective_on_objects(l.source_leg)
    if not ok:
        s, pre = witness
        out.append(Violation("not bijective on objects", (s,) + pre,
                             f"source object {s} has {len(pre)} apex objects over it"))
    return out


def identity_lens(c: FinCategory) -> AsymmetricLens:
    ident = identity_functor(c)
    return AsymmetricLens(c, c, c, ident, ident, ident, f"id_{c.name}" if c.name else "id")


def lens_from_put(source: FinCategory, view: FinCategory, get: Functor,
                  put_rule: Callable[[str, str], str], name: str = "",
                  check: bool = True) -> AsymmetricLens:
    """Materialise the triangle of a lens given operationally by Get and Put.

    The apex has the objects of ``source`` and one arrow ``(s|alpha)`` for
    every source state ``s`` and view delta ``alpha`` at ``G(s)``.  PutGet is
    always checked since the triangle depends on it.  With ``check`` the rule
    is also checked to preserve identities and composites, which makes the
    source leg a functor; failures raise :class:`NotFunctorial`.
    """
    if get.domain != source or get.codomain != view:
        raise FootMismatch("Get must run from the source to the view")
    arrows: dict[str, tuple[str, str]] = {}
    on_view: dict[str, str] = {}
    on_source: dict[str, str] = {}
    index: dict[tuple[str, str], str] = {}
    for s in source.objects:
        for alpha in view.out_arrows(get.on_objects[s]):
            result = put_rule(s, alpha)
            if result not in source.arrows or source.arrows[result][0] != s:
                raise NotFunctorial(f"put rule not functorial: put({s}, {alpha}) = {result} "
                                    f"is not an arrow out of {s}")
            if get.on_arrows[result] != alpha:
                raise NotFunctorial(f"put rule not functorial: PutGet fails at ({s}, {alpha}), "
                                    f"Get of {result} is {get.on_arrows[result]}")
            a = f"({s}|{alpha})"
            arrows[a] = (s, source.arrows[result][1])
            on_view[a] = alpha
            on_source[a] = result
            index[(s, alpha)] = a
    identities = {s: index[(s, view.identities[get.on_objects[s]])] for s in source.objects}

    def rule(b: str, a: str) -> str:
        return index[(arrows[a][0], view.compose[(on_view[b], on_view[a])])]

    apex = FinCategory(source.objects, arrows, identities, LazyComposition(arrows, rule),
                       f"Lambda_{name}" if name else "Lambda")
    objs = {s: s for s in source.objects}
    view_leg = Functor(apex, view, {s: get.on_objects[s] for s in source.objects}, on_view, "F")
    source_leg = Functor(apex, source, objs, on_source, "P")
    lens = AsymmetricLens(source, view, apex, view_leg, source_leg, get, name)
    if check:
        bad = next(iter(put_law_violations(lens)), None)
        if bad is not None:
            raise NotFunctorial(f"put rule not functorial: {bad.message}")
    return lens


def compose_asymmetric(l1: AsymmetricLens, l2: AsymmetricLens, name: str = "") -> AsymmetricLens:
    """The lens ``S -> B`` from ``l1: S -> A`` and ``l2: A -> B``.

    Gets compose; the apex is the pullback of ``l2``'s source leg along
    ``l1``'s view leg.
    """
    if l1.view != l2.source:
        raise FootMismatch("the view of the first lens is not the source of the second")
    pb = pullback(l1.view_leg, l2.source_leg)
    return AsymmetricLens(
        l1.source, l2.view, pb.category,
        pb.right.then(l2.view_leg, "F"),
        pb.left.then(l1.source_leg, "P"),
        l1.get.then(l2.get, "G"),
        name or (f"{l2.name}.{l1.name}" if l1.name and l2.name else ""),
    )


def put_inputs(l: AsymmetricLens) -> Iterator[tuple[str, str]]:
    """Every ``(s, alpha)`` at which Put is defined."""
    for s in l.source.objects:
        for alpha in l.view.out_arrows(l.get.on_objects[s]):
            yield s, alpha


def count_law_checks(l: AsymmetricLens) -> int:
    """Number of composition checks :func:`put_law_violations` performs."""
    v = l.view
    per_view = {x: sum(len(v.out_arrows(v.arrows[a][1])) for a in v.out_arrows(x))
                for x in v.objects}
    return sum(per_view[l.get.on_objects[s]] for s in l.source.objects)


def put_law_violations(l: AsymmetricLens, bound: int | None = None) -> Iterator[Violation]:
    """Exhaustively check PutGet and the identity and composition laws of Put."""
    if bound is not None and count_law_checks(l) > bound:
        raise BoundExceeded(f"lens {l.name} needs {count_law_checks(l)} composition checks (bound {bound})")
    s_cat, v_cat = l.source, l.view
    for s in s_cat.objects:
        x = l.get.on_objects[s]
        ident = put(l, s, v_cat.identities[x])
        if ident != s_cat.identities[s]:
            yield Violation("put identity", (s,), f"put at {s} of the identity is {ident}")
        for alpha in v_cat.out_arrows(x):
            a = put(l, s, alpha)
            if s_cat.arrows[a][0] != s or l.get.on_arrows[a] != alpha:
                yield Violation("PutGet", (s, alpha), f"put({s}, {alpha}) = {a} does not lie over {alpha}")
                continue
            s2 = s_cat.arrows[a][1]
            for beta in v_cat.out_arrows(v_cat.arrows[alpha][1]):
                whole = put(l, s, v_cat.compose[(beta, alpha)])
                parts = s_cat.compose[(put(l, s2, beta), a)]
                if whole != parts:
                    yield Violation("put composition", (s, alpha, beta),
                                    f"put({s}, {beta} . {alpha}) = {whole} but composing puts gives {parts}")


def lens_as_span(l: AsymmetricLens) -> WideSpan:
    """The triangle read as the span ``S <- apex -> V``."""
    return WideSpan(l.apex, (l.source_leg, l.view_leg))


def lenses_equal(l1: AsymmetricLens, l2: AsymmetricLens) -> bool:
    """Identical Gets arrow-wise and identical Puts at every input."""
    return not lens_differences(l1, l2, limit=1)


def lens_differences(l1: AsymmetricLens, l2: AsymmetricLens, limit: int | None = None) -> list[str]:
    diffs: list[str] = []
    if l1.source != l2.source or l1.view != l2.view:
        return ["source or view categories differ"]
    for o in l1.source.objects:
        if l1.get.on_objects[o] != l2.get.on_objects[o]:
            diffs.append(f"Get differs on object {o}")
    for a in l1.source.arrows:
        if l1.get.on_arrows[a] != l2.get.on_arrows[a]:
            diffs.append(f"Get differs on arrow {a}")
            if limit and len(diffs) >= limit:
                return diffs
    if diffs:
        return diffs
    for s, alpha in put_inputs(l1):
        p1, p2 = put(l1, s, alpha), put(l2, s, alpha)
        if p1 != p2:
            diffs.append(f"put({s}, {alpha}) is {p1} versus {p2}")
            if limit and len(diffs) >= limit:
                break
    return diffs
