"""Explicit finite categories and functors.

A :class:`FinCategory` is stored extensionally: a tuple of object ids, a map
from arrow id to ``(source, target)``, an identity per object and a
composition table keyed by ``(g, f)`` meaning "g after f".  Constructed
categories (pullbacks, lens apexes, scenario state spaces) use a
:class:`LazyComposition` table, which is still a total mapping over the
composable pairs but computes each entry on first lookup.
"""
from __future__ import annotations

from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import BoundExceeded, PreconditionError

Arrow = str
Obj = str


def pair_name(a: str, b: str) -> str:
    """Deterministic name of a pair object or arrow in a constructed category."""
    return f"({a},{b})"


class LazyComposition(Mapping):
    """Composition table computed on demand from ``rule(g, f)``.

    Only composable pairs are keys.  Results are cached, so a lookup costs
    the rule once.
    """

    def __init__(self, arrows: Mapping[Arrow, tuple[Obj, Obj]],
                 rule: Callable[[Arrow, Arrow], Arrow]):
        self._arrows = arrows
        self._rule = rule
        self._cache: dict[tuple[Arrow, Arrow], Arrow] = {}

    @cached_property
    def _out(self) -> dict[Obj, list[Arrow]]:
        out: dict[Obj, list[Arrow]] = defaultdict(list)
        for a, (s, _) in self._arrows.items():
            out[s].append(a)
        return out

    def _composable(self, key) -> bool:
        try:
            g, f = key
            return self._arrows[f][1] == self._arrows[g][0]
        except (KeyError, TypeError, ValueError):
            return False

    def __getitem__(self, key: tuple[Arrow, Arrow]) -> Arrow:
        try:
            return self._cache[key]
        except KeyError:
            pass
        if not self._composable(key):
            raise KeyError(key)
        h = self._rule(*key)
        self._cache[key] = h
        return h

    def __contains__(self, key) -> bool:
        return self._composable(key)

    def __iter__(self) -> Iterator[tuple[Arrow, Arrow]]:
        out = self._out
        for f, (_, t) in self._arrows.items():
            for g in out.get(t, ()):
                yield (g, f)

    def __len__(self) -> int:
        out = self._out
        return sum(len(out.get(t, ())) for _, t in self._arrows.values())


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple[Obj, ...]
    arrows: Mapping[Arrow, tuple[Obj, Obj]]
    identities: Mapping[Obj, Arrow]
    compose: Mapping[tuple[Arrow, Arrow], Arrow]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.object_set == other.object_set
                and dict(self.arrows) == dict(other.arrows)
                and dict(self.identities) == dict(other.identities)
                and dict(self.compose.items()) == dict(other.compose.items()))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    @cached_property
    def object_set(self) -> frozenset[Obj]:
        return frozenset(self.objects)

    @cached_property
    def _out(self) -> dict[Obj, tuple[Arrow, ...]]:
        out: dict[Obj, list[Arrow]] = {o: [] for o in self.objects}
        for a, (s, _) in self.arrows.items():
            out.setdefault(s, []).append(a)
        return {o: tuple(v) for o, v in out.items()}

    def src(self, a: Arrow) -> Obj:
        return self.arrows[a][0]

    def tgt(self, a: Arrow) -> Obj:
        return self.arrows[a][1]

    def identity(self, o: Obj) -> Arrow:
        return self.identities[o]

    def comp(self, g: Arrow, f: Arrow) -> Arrow:
        """``g`` after ``f``."""
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise PreconditionError(f"{g} . {f} is not defined in {self!r}") from None

    def out_arrows(self, o: Obj) -> tuple[Arrow, ...]:
        return self._out.get(o, ())

    def hom(self, a: Obj, b: Obj) -> list[Arrow]:
        return [f for f in self.out_arrows(a) if self.arrows[f][1] == b]

    def is_identity(self, a: Arrow) -> bool:
        s, t = self.arrows[a]
        return s == t and self.identities.get(s) == a

    def composable_pairs(self) -> Iterator[tuple[Arrow, Arrow]]:
        """Every ``(g, f)`` with ``tgt f == src g``, as ``g`` after ``f``."""
        for f, (_, t) in self.arrows.items():
            for g in self.out_arrows(t):
                yield g, f

    def count_composable_pairs(self) -> int:
        return sum(len(self.out_arrows(t)) for _, t in self.arrows.values())


def category(objects: Iterable[Obj], arrows: Mapping[Arrow, tuple[Obj, Obj]],
             compose: Mapping[tuple[Arrow, Arrow], Arrow] = (),
             identities: Mapping[Obj, Arrow] | None = None,
             name: str = "") -> FinCategory:
    """Build a category from its non-trivial data.

    Identity arrows ``1_o`` are created for objects missing from
    ``identities``, and every composite involving an identity is filled in.
    Composites of two non-identity arrows must be listed in ``compose``;
    anything missing is left missing (``validate_category`` reports it).
    """
    objects = tuple(objects)
    arrows = dict(arrows)
    ids = dict(identities or {})
    for o in objects:
        if o not in ids:
            ident = f"1_{o}"
            if ident in arrows and arrows[ident] != (o, o):
                raise PreconditionError(f"cannot create identity {ident}: name in use")
            ids[o] = ident
        arrows.setdefault(ids[o], (o, o))
    table = dict(compose)
    for f, (s, t) in arrows.items():
        if t in ids:
            table.setdefault((ids[t], f), f)
        if s in ids:
            table.setdefault((f, ids[s]), f)
    return FinCategory(objects, arrows, ids, table, name)


def terminal_category(name: str = "1") -> FinCategory:
    return category(["*"], {}, name=name)


def discrete_category(objects: Sequence[Obj], name: str = "") -> FinCategory:
    return category(objects, {}, name=name)


def walking_arrow(a: Obj = "a", b: Obj = "b", arrow: Arrow = "u",
                  name: str = "2") -> FinCategory:
    return category([a, b], {arrow: (a, b)}, name=name)


def cyclic_group(n: int, name: str = "") -> FinCategory:
    """The group Z/n as a one-object category with arrows ``g0 .. g{n-1}``."""
    arrows = {f"g{k}": ("*", "*") for k in range(n)}
    table = {(f"g{i}", f"g{j}"): f"g{(i + j) % n}" for i in range(n) for j in range(n)}
    return FinCategory(("*",), arrows, {"*": "g0"}, table, name or f"Z{n}")


# -- functors ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Functor:
    domain: FinCategory
    codomain: FinCategory
    on_objects: Mapping[Obj, Obj]
    on_arrows: Mapping[Arrow, Arrow]
    name: str = ""

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and dict(self.on_objects) == dict(other.on_objects)
                and dict(self.on_arrows) == dict(other.on_arrows))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"<Functor {self.name or '?'}: {self.domain!r} -> {self.codomain!r}>"

    def obj(self, x: Obj) -> Obj:
        try:
            return self.on_objects[x]
        except KeyError:
            raise PreconditionError(f"no such object: {x}") from None

    def arr(self, a: Arrow) -> Arrow:
        try:
            return self.on_arrows[a]
        except KeyError:
            raise PreconditionError(f"no such arrow: {a}") from None

    def then(self, other: Functor, name: str = "") -> Functor:
        """``other`` after ``self``."""
        if self.codomain != other.domain:
            raise PreconditionError("functors are not composable")
        return Functor(
            self.domain, other.codomain,
            {x: other.on_objects[y] for x, y in self.on_objects.items()},
            {a: other.on_arrows[b] for a, b in self.on_arrows.items()},
            name,
        )


def identity_functor(c: FinCategory) -> Functor:
    return Functor(c, c, {o: o for o in c.objects}, {a: a for a in c.arrows},
                   f"id_{c.name}" if c.name else "id")


def functor_to_terminal(c: FinCategory, one: FinCategory) -> Functor:
    (star,) = one.objects
    return Functor(c, one, {o: star for o in c.objects},
                   {a: one.identity(star) for a in c.arrows})


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    subjects: tuple[str, ...]
    message: str = ""

    def __str__(self):
        where = ", ".join(self.subjects)
        return f"{self.kind}: {self.message or where}"


def validate_category(c: FinCategory) -> list[Violation]:
    """Exhaustively check identities, totality of composition, and associativity."""
    out: list[Violation] = []
    objs = c.object_set
    for a, (s, t) in c.arrows.items():
        if s not in objs or t not in objs:
            out.append(Violation("unknown object", (a,), f"arrow {a} has endpoints {s} -> {t}"))
    for o in c.objects:
        i = c.identities.get(o)
        if i is None:
            out.append(Violation("missing identity", (o,), f"object {o} has no identity"))
        elif c.arrows.get(i) != (o, o):
            out.append(Violation("identity", (o, i), f"identity {i} of {o} is not an arrow {o} -> {o}"))
    if isinstance(c.compose, dict):
        for key in c.compose:
            g, f = key
            if f not in c.arrows or g not in c.arrows or c.arrows[f][1] != c.arrows[g][0]:
                out.append(Violation("spurious composite", key, f"{g} . {f} is listed but not composable"))
    pairs_ok: dict[tuple[str, str], str] = {}
    for g, f in c.composable_pairs():
        try:
            h = c.compose[(g, f)]
        except KeyError:
            out.append(Violation("missing composite", (g, f), f"{g} . {f} has no composite"))
            continue
        if h not in c.arrows:
            out.append(Violation("unknown arrow", (g, f, h), f"{g} . {f} = {h} is not an arrow"))
            continue
        if c.arrows[h] != (c.arrows[f][0], c.arrows[g][1]):
            out.append(Violation("composite endpoints", (g, f, h),
                                 f"{g} . {f} = {h} has endpoints {c.arrows[h]}"))
            continue
        pairs_ok[(g, f)] = h
    for f, (s, t) in c.arrows.items():
        it, is_ = c.identities.get(t), c.identities.get(s)
        if it is not None and pairs_ok.get((it, f), f) != f:
            out.append(Violation("left identity", (f,), f"{it} . {f} != {f}"))
        if is_ is not None and pairs_ok.get((f, is_), f) != f:
            out.append(Violation("right identity", (f,), f"{f} . {is_} != {f}"))
    for (g, f), gf in pairs_ok.items():
        for h in c.out_arrows(c.arrows[g][1]):
            hg = pairs_ok.get((h, g))
            if hg is None:
                continue
            left = pairs_ok.get((hg, f))
            right = pairs_ok.get((h, gf))
            if left is not None and right is not None and left != right:
                out.append(Violation("associativity", (h, g, f),
                                     f"({h} . {g}) . {f} = {left} but {h} . ({g} . {f}) = {right}"))
    return out


def validate_functor(fn: Functor) -> list[Violation]:
    """Check totality, endpoint, identity and composition preservation."""
    out: list[Violation] = []
    d, c = fn.domain, fn.codomain
    for o in d.objects:
        img = fn.on_objects.get(o)
        if img is None:
            out.append(Violation("missing object", (o,), f"object {o} is not mapped"))
        elif img not in c.object_set:
            out.append(Violation("unknown image", (o, img), f"{o} maps to unknown object {img}"))
    for a, (s, t) in d.arrows.items():
        img = fn.on_arrows.get(a)
        if img is None:
            out.append(Violation("missing arrow", (a,), f"arrow {a} is not mapped"))
            continue
        if img not in c.arrows:
            out.append(Violation("unknown image", (a, img), f"{a} maps to unknown arrow {img}"))
            continue
        if c.arrows[img] != (fn.on_objects.get(s), fn.on_objects.get(t)):
            out.append(Violation("source/target preservation", (a, img),
                                 f"{a}: {s} -> {t} maps to {img}: {c.arrows[img][0]} -> {c.arrows[img][1]}"))
    if out:
        return out
    for o in d.objects:
        img = fn.on_arrows[d.identities[o]]
        if img != c.identities.get(fn.on_objects[o]):
            out.append(Violation("identity preservation", (o, img),
                                 f"identity of {o} maps to {img}, not an identity"))
    for g, f in d.composable_pairs():
        h = d.compose.get((g, f))
        if h is None:
            continue
        fg = c.compose.get((fn.on_arrows[g], fn.on_arrows[f]))
        if fg != fn.on_arrows[h]:
            out.append(Violation("composition preservation", (g, f),
                                 f"F({g} . {f}) = {fn.on_arrows[h]} but F({g}) . F({f}) = {fg}"))
    return out


def is_discrete_opfibration(fn: Functor):
    """Unique lifting of codomain arrows at every domain object.

    Returns ``(True, None)`` or ``(False, (obj, arrow, lifts))`` where
    ``lifts`` lists the domain arrows over ``arrow`` at ``obj`` (zero or
    at least two of them).
    """
    d, c = fn.domain, fn.codomain
    for lam in d.objects:
        by_image: dict[Arrow, list[Arrow]] = defaultdict(list)
        for a in d.out_arrows(lam):
            by_image[fn.on_arrows[a]].append(a)
        for e in c.out_arrows(fn.on_objects[lam]):
            lifts = by_image.get(e, [])
            if len(lifts) != 1:
                return False, (lam, e, tuple(lifts))
    return True, None


def is_bijective_on_objects(fn: Functor):
    """Returns ``(True, None)`` or ``(False, (codomain_object, preimages))``."""
    pre: dict[Obj, list[Obj]] = {o: [] for o in fn.codomain.objects}
    for x in fn.domain.objects:
        pre.setdefault(fn.on_objects[x], []).append(x)
    for o in sorted(pre):
        if len(pre[o]) != 1:
            return False, (o, tuple(pre[o]))
    return True, None


# -- pullbacks ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PullbackResult:
    category: FinCategory
    left: Functor
    right: Functor
    # pair decoding, kept so constructions over the pullback can stay lazy
    object_pairs: Mapping[Obj, tuple[Obj, Obj]]
    arrow_pairs: Mapping[Arrow, tuple[Arrow, Arrow]]


def pullback(f: Functor, g: Functor, name: str = "") -> PullbackResult:
    """Pullback in Cat of the cospan ``f: A -> C <- B :g``.

    Objects are the pairs ``(a,b)`` with ``f(a) == g(b)``, arrows the pairs
    of arrows with ``f(u) == g(v)``, composed componentwise.
    """
    if f.codomain != g.codomain:
        raise PreconditionError("pullback needs a common codomain")
    a_cat, b_cat = f.domain, g.domain
    over_obj: dict[Obj, list[Obj]] = defaultdict(list)
    for b in b_cat.objects:
        over_obj[g.on_objects[b]].append(b)
    over_arr: dict[Arrow, list[Arrow]] = defaultdict(list)
    for v in b_cat.arrows:
        over_arr[g.on_arrows[v]].append(v)

    object_pairs: dict[Obj, tuple[Obj, Obj]] = {}
    for a in a_cat.objects:
        for b in over_obj.get(f.on_objects[a], ()):
            object_pairs[pair_name(a, b)] = (a, b)
    arrow_pairs: dict[Arrow, tuple[Arrow, Arrow]] = {}
    arrows: dict[Arrow, tuple[Obj, Obj]] = {}
    for u, (us, ut) in a_cat.arrows.items():
        for v in over_arr.get(f.on_arrows[u], ()):
            vs, vt = b_cat.arrows[v]
            n = pair_name(u, v)
            arrow_pairs[n] = (u, v)
            arrows[n] = (pair_name(us, vs), pair_name(ut, vt))
    n_obj = sum(len(over_obj.get(f.on_objects[a], ())) for a in a_cat.objects)
    n_arr = sum(len(over_arr.get(f.on_arrows[u], ())) for u in a_cat.arrows)
    if len(object_pairs) != n_obj or len(arrow_pairs) != n_arr:
        raise PreconditionError("pair names collide; component ids must not contain top-level commas")
    identities = {n: pair_name(a_cat.identities[a], b_cat.identities[b])
                  for n, (a, b) in object_pairs.items()}

    def rule(q: Arrow, p: Arrow) -> Arrow:
        q1, q2 = arrow_pairs[q]
        p1, p2 = arrow_pairs[p]
        return pair_name(a_cat.compose[(q1, p1)], b_cat.compose[(q2, p2)])

    t = FinCategory(tuple(object_pairs), arrows, identities, LazyComposition(arrows, rule),
                    name or f"({a_cat.name}x{b_cat.name})")
    left = Functor(t, a_cat, {n: p[0] for n, p in object_pairs.items()},
                   {n: p[0] for n, p in arrow_pairs.items()}, "left")
    right = Functor(t, b_cat, {n: p[1] for n, p in object_pairs.items()},
                    {n: p[1] for n, p in arrow_pairs.items()}, "right")
    return PullbackResult(t, left, right, object_pairs, arrow_pairs)


def product(c: FinCategory, d: FinCategory, name: str = "") -> PullbackResult:
    """Product as the pullback over the terminal category."""
    one = terminal_category()
    return pullback(functor_to_terminal(c, one), functor_to_terminal(d, one), name)


# -- spans and span isomorphism ------------------------------------------------

@dataclass(frozen=True, eq=False)
class WideSpan:
    """A peak with an ordered, non-empty list of functors out of it.

    A span is the two-legged case.
    """
    peak: FinCategory
    legs: tuple[Functor, ...]

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise PreconditionError("a span needs at least one leg")
        for leg in self.legs:
            if leg.domain != self.peak:
                raise PreconditionError("every leg must start at the peak")

    @property
    def feet(self) -> tuple[FinCategory, ...]:
        return tuple(leg.codomain for leg in self.legs)


@dataclass(frozen=True, eq=False)
class Cospan:
    trough: FinCategory
    legs: tuple[Functor, ...]

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise PreconditionError("a cospan needs at least one leg")
        for leg in self.legs:
            if leg.codomain != self.trough:
                raise PreconditionError("every leg must end at the trough")


def find_span_isomorphism(s1: WideSpan, s2: WideSpan, bound: int = 10) -> Functor | None:
    """Search for an isomorphism of peaks commuting with all legs.

    Exhaustive backtracking over object bijections, pruned by leg images and
    degree signatures, then over arrow bijections checked against
    composition.  Raises :class:`BoundExceeded` when a peak has more than
    ``bound`` objects.
    """
    if len(s1.legs) != len(s2.legs):
        raise PreconditionError("spans have different numbers of legs")
    for l1, l2 in zip(s1.legs, s2.legs):
        if l1.codomain != l2.codomain:
            raise PreconditionError("corresponding feet differ")
    p1, p2 = s1.peak, s2.peak
    if len(p1.objects) != len(p2.objects) or len(p1.arrows) != len(p2.arrows):
        return None
    if len(p1.objects) > bound:
        raise BoundExceeded(f"search bound exceeded: peak has {len(p1.objects)} objects (bound {bound})")

    def obj_sig(p: FinCategory, legs, o):
        ins = sum(1 for _, t in p.arrows.values() if t == o)
        endo = len(p.hom(o, o))
        return (tuple(l.on_objects[o] for l in legs), len(p.out_arrows(o)), ins, endo)

    def arr_sig(legs, a):
        return tuple(l.on_arrows[a] for l in legs)

    sig2: dict[tuple, list[Obj]] = defaultdict(list)
    for o in p2.objects:
        sig2[obj_sig(p2, s2.legs, o)].append(o)
    cands = {o: sig2.get(obj_sig(p1, s1.legs, o), []) for o in p1.objects}
    order = sorted(p1.objects, key=lambda o: (len(cands[o]), o))
    if any(not cands[o] for o in order):
        return None

    arrows1 = sorted(p1.arrows)
    asig2: dict[tuple, list[Arrow]] = defaultdict(list)
    for a in p2.arrows:
        s, t = p2.arrows[a]
        asig2[(s, t, arr_sig(s2.legs, a))].append(a)

    def match_arrows(omap: dict[Obj, Obj]) -> dict[Arrow, Arrow] | None:
        acands = {}
        for a in arrows1:
            s, t = p1.arrows[a]
            acands[a] = asig2.get((omap[s], omap[t], arr_sig(s1.legs, a)), [])
            if not acands[a]:
                return None
        aorder = sorted(arrows1, key=lambda a: (len(acands[a]), a))
        amap: dict[Arrow, Arrow] = {}
        used: set[Arrow] = set()

        def consistent(a: Arrow) -> bool:
            s, t = p1.arrows[a]
            if p1.identities[s] == a and amap[a] != p2.identities[omap[s]]:
                return False
            # every composite whose three arrows are mapped must be preserved
            for g in p1.out_arrows(t):
                if g in amap:
                    h = p1.compose[(g, a)]
                    if h in amap and p2.compose[(amap[g], amap[a])] != amap[h]:
                        return False
            for f in p1.arrows:
                if f in amap and p1.arrows[f][1] == s:
                    h = p1.compose[(a, f)]
                    if h in amap and p2.compose[(amap[a], amap[f])] != amap[h]:
                        return False
            return True

        def go(i: int) -> bool:
            if i == len(aorder):
                return all(p2.compose[(amap[g], amap[f])] == amap[p1.compose[(g, f)]]
                           for g, f in p1.composable_pairs())
            a = aorder[i]
            for b in acands[a]:
                if b in used:
                    continue
                amap[a] = b
                used.add(b)
                if consistent(a) and go(i + 1):
                    return True
                used.discard(b)
                del amap[a]
            return False

        return dict(amap) if go(0) else None

    omap: dict[Obj, Obj] = {}
    taken: set[Obj] = set()

    def search(i: int) -> dict[Arrow, Arrow] | None:
        if i == len(order):
            return match_arrows(omap)
        o = order[i]
        for cand in cands[o]:
            if cand in taken:
                continue
            omap[o] = cand
            taken.add(cand)
            found = search(i + 1)
            if found is not None:
                return found
            taken.discard(cand)
            del omap[o]
        return None

    amap = search(0)
    if amap is None:
        return None
    return Functor(p1, p2, dict(omap), amap, "iso")


def spans_isomorphic(s1: WideSpan, s2: WideSpan, bound: int = 10) -> bool:
    return find_span_isomorphism(s1, s2, bound) is not None
