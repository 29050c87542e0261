"""Small categories, lenses and multilenses for tests and law suites.

Every lens here is built with :func:`lens_from_put` from a direct put rule,
so fixtures never depend on composition or pullback code.
"""
from __future__ import annotations

import random
from collections.abc import Sequence
from itertools import product as cartesian

from .deltas import DeltaCategory, delta_category, subsets
from .fincat import FinCategory, Functor, category, cyclic_group, walking_arrow
from .lens import AsymmetricLens, identity_lens, lens_from_put, put
from .multilens import LensCospan, Multilens


def idempotent_monoid(name: str = "E") -> FinCategory:
    """The monoid {1, e} with e.e = e."""
    return category(["*"], {"e": ("*", "*")}, {("e", "e"): "e"}, {"*": "1"}, name)


def chain_poset(n: int, name: str = "") -> FinCategory:
    """The total order 0 < 1 < ... < n-1."""
    objs = [f"p{i}" for i in range(n)]
    arrows = {f"p{i}<p{j}": (objs[i], objs[j]) for i in range(n) for j in range(i + 1, n)}
    comp = {(f"p{j}<p{k}", f"p{i}<p{j}"): f"p{i}<p{k}"
            for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)}
    return category(objs, arrows, comp, name=name or f"Ch{n}")


def powerset_category(elements: Sequence[str], name: str = "") -> DeltaCategory:
    """All subsets of ``elements`` with every partial identity between them."""
    states = {"{" + ";".join(sorted(s)) + "}": s for s in subsets(elements)}
    return delta_category(states, name=name or "P" + "".join(elements))


def random_poset(rng: random.Random, n: int, name: str = "") -> FinCategory:
    """A random partial order on ``n`` objects, as a thin category."""
    objs = [f"q{i}" for i in range(n)]
    less = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5}
    changed = True
    while changed:
        changed = False
        for (i, j) in list(less):
            for (k, l) in list(less):
                if j == k and (i, l) not in less:
                    less.add((i, l))
                    changed = True
    arrows = {f"q{i}<q{j}": (objs[i], objs[j]) for i, j in less}
    comp = {(f"q{j}<q{k}", f"q{i}<q{j}"): f"q{i}<q{k}"
            for i, j in less for (j2, k) in less if j2 == j}
    return category(objs, arrows, comp, name=name or f"Q{n}")


def base_categories() -> list[FinCategory]:
    """Small categories used as views and factors."""
    return [
        walking_arrow(name="2"),
        cyclic_group(2),
        cyclic_group(3),
        idempotent_monoid(),
        chain_poset(3),
        powerset_category(["a"]).category,
    ]


def random_category(rng: random.Random, max_objects: int = 2) -> FinCategory:
    pool = [c for c in base_categories() if len(c.objects) <= max_objects]
    if max_objects >= 2 and rng.random() < 0.3:
        pool.append(random_poset(rng, 2))
    return rng.choice(pool)


# -- product lenses ------------------------------------------------------------

def _tuple_name(parts: Sequence[str]) -> str:
    return "<" + ";".join(parts) + ">"


class ProductCategory:
    """Explicit product of factors, with names ``<a;b;...>``."""

    def __init__(self, factors: Sequence[FinCategory], name: str = ""):
        self.factors = tuple(factors)
        objs = list(cartesian(*(f.objects for f in factors)))
        arr_tuples = list(cartesian(*(list(f.arrows) for f in factors)))
        self.obj_parts = {_tuple_name(o): o for o in objs}
        self.arr_parts = {_tuple_name(a): a for a in arr_tuples}
        arrows = {n: (_tuple_name([f.arrows[x][0] for f, x in zip(factors, a)]),
                      _tuple_name([f.arrows[x][1] for f, x in zip(factors, a)]))
                  for n, a in self.arr_parts.items()}
        ids = {n: _tuple_name([f.identities[x] for f, x in zip(factors, o)])
               for n, o in self.obj_parts.items()}
        comp = {}
        for g, (gs, _) in arrows.items():
            for f, (_, ft) in arrows.items():
                if ft == gs:
                    comp[(g, f)] = _tuple_name([c.compose[(x, y)] for c, x, y in
                                                zip(factors, self.arr_parts[g], self.arr_parts[f])])
        self.category = FinCategory(tuple(self.obj_parts), arrows, ids, comp,
                                    name or "x".join(f.name or "?" for f in factors))


def product_category(factors: Sequence[FinCategory], name: str = "") -> ProductCategory:
    return ProductCategory(factors, name)


def factor_lens(prod: ProductCategory, i: int, through: AsymmetricLens | None = None,
                name: str = "") -> AsymmetricLens:
    """Lens from a product to factor ``i``, optionally followed by ``through``.

    Put replaces component ``i`` by the (inner) put and keeps the other
    components fixed.
    """
    s_cat = prod.category
    factor = prod.factors[i]
    view = through.view if through is not None else factor
    get_obj = {n: o[i] for n, o in prod.obj_parts.items()}
    get_arr = {n: a[i] for n, a in prod.arr_parts.items()}
    if through is not None:
        get_obj = {n: through.get.on_objects[x] for n, x in get_obj.items()}
        get_arr = {n: through.get.on_arrows[x] for n, x in get_arr.items()}
    get = Functor(s_cat, view, get_obj, get_arr, "G")

    def rule(s: str, alpha: str) -> str:
        parts = prod.obj_parts[s]
        inner = alpha if through is None else put(through, parts[i], alpha)
        comps = [prod.factors[k].identities[parts[k]] for k in range(len(parts))]
        comps[i] = inner
        return _tuple_name(comps)

    return lens_from_put(s_cat, view, get, rule, name or f"pi{i + 1}")


def cascade_lens(view: DeltaCategory, marks: Sequence[str], name: str = "") -> AsymmetricLens:
    """States ``(v, m)`` with ``m`` a set of marked elements of ``v``.

    Get forgets the marks; Put keeps the marks of surviving elements and
    drops the marks of deleted ones.
    """
    marks = frozenset(marks)
    states: dict[str, frozenset[str]] = {}
    parts: dict[str, tuple[str, frozenset[str]]] = {}
    for v, els in view.elements.items():
        for m in subsets(els & marks):
            n = f"{v}+[{';'.join(sorted(m))}]"
            states[n] = els | {f"!{x}" for x in m}
            parts[n] = (v, m)

    def kept_options(s, t):
        (v, m), (w, m2) = parts[s], parts[t]
        out = []
        for k in subsets(view.elements[v] & view.elements[w]):
            if view.arrow_exists(v, w, k):
                for km in subsets(k & m & m2):
                    out.append(k | {f"!{x}" for x in km})
        return out

    src = delta_category(states, kept_options, name=f"M{view.category.name}")
    on_obj = {n: p[0] for n, p in parts.items()}
    on_arr = {}
    for a, d in src.deltas.items():
        plain = frozenset(x for x in d.kept if not x.startswith("!"))
        on_arr[a] = view.arrow(on_obj[d.source], on_obj[d.target], plain)
    get = Functor(src.category, view.category, on_obj, on_arr, "G")

    def rule(s: str, alpha: str) -> str:
        v, m = parts[s]
        d = view.delta(alpha)
        m2 = m & d.kept
        t = f"{d.target}+[{';'.join(sorted(m2))}]"
        return src.arrow(s, t, d.kept | {f"!{x}" for x in m2})

    return lens_from_put(src.category, view.category, get, rule, name or "cascade")


# -- random lenses and multilenses ---------------------------------------------

def random_lens_into(rng: random.Random, view: FinCategory, max_objects: int = 4) -> AsymmetricLens:
    """A random lens with the given view and at most ``max_objects`` source states."""
    while True:
        kind = rng.choice(["identity", "product", "product", "product2"])
        if kind == "identity":
            return identity_lens(view)
        extra = random_category(rng, max_objects=max(1, max_objects // max(1, len(view.objects))))
        factors = [view, extra] if rng.random() < 0.5 else [extra, view]
        if kind == "product2":
            factors.append(rng.choice([cyclic_group(2), idempotent_monoid()]))
        prod = product_category(factors)
        if len(prod.category.objects) > max_objects:
            continue
        return factor_lens(prod, factors.index(view))


def random_cospan(rng: random.Random, max_peak: int = 8) -> LensCospan:
    """A random lens cospan whose pulled-back peak has at most ``max_peak`` objects."""
    while True:
        choice = rng.random()
        if choice < 0.25:
            pc = powerset_category(["a"] if rng.random() < 0.6 else ["a", "b"])
            view = pc.category
            left = cascade_lens(pc, ["a"]) if rng.random() < 0.7 else identity_lens(view)
            right = random_lens_into(rng, view) if rng.random() < 0.5 else cascade_lens(pc, ["a"])
        else:
            view = random_category(rng)
            left = random_lens_into(rng, view)
            right = random_lens_into(rng, view)
        peak = sum(1 for s in left.source.objects for t in right.source.objects
                   if left.get.on_objects[s] == right.get.on_objects[t])
        if peak <= max_peak:
            return LensCospan(left, right)


def random_multilens(rng: random.Random, n_legs: int, first_foot: FinCategory | None = None,
                     max_objects: int = 4) -> Multilens:
    """A multilens whose peak is a product with one factor per leg.

    Leg ``i`` projects onto factor ``i``; with ``first_foot`` the first
    factor is that category.
    """
    while True:
        factors = [first_foot if (i == 0 and first_foot is not None) else random_category(rng)
                   for i in range(n_legs)]
        size = 1
        for f in factors:
            size *= len(f.objects)
        if size <= max_objects:
            break
    prod = product_category(factors)
    legs = tuple(factor_lens(prod, i, name=f"leg{i + 1}") for i in range(n_legs))
    return Multilens(prod.category, legs)


def reversed_multilens(ml: Multilens) -> Multilens:
    return Multilens(ml.peak, tuple(reversed(ml.legs)))


def random_fusable_pair(rng: random.Random, m: int, n: int, max_objects: int = 4):
    """A pair whose shared foot is the last foot of the first multilens."""
    second = random_multilens(rng, n, max_objects=max_objects)
    shared = second.feet[0]
    first = reversed_multilens(random_multilens(rng, m, first_foot=shared, max_objects=max_objects))
    return first, second
