"""Brute-force reference computations, written independently of the package.

They work on plain Python data (sets, dicts, tuples) and use the most direct
enumeration available, so they are slow but easy to trust.
"""
from __future__ import annotations

from itertools import permutations, product


def composable_triples(c):
    arrows = dict(c.arrows)
    for f, (_, b) in arrows.items():
        for g, (g_src, c2) in arrows.items():
            if g_src != b:
                continue
            for h, (h_src, _) in arrows.items():
                if h_src == c2:
                    yield h, g, f


def is_associative(c) -> bool:
    comp = dict(c.compose.items())
    return all(comp[(comp[(h, g)], f)] == comp[(h, comp[(g, f)])] for h, g, f in composable_triples(c))


def pullback_pairs(f, g):
    """Objects and arrows of the pullback as sets of plain pairs."""
    objs = {(a, b) for a in f.domain.objects for b in g.domain.objects
            if f.on_objects[a] == g.on_objects[b]}
    arrs = {(u, v) for u in f.domain.arrows for v in g.domain.arrows
            if f.on_arrows[u] == g.on_arrows[v]}
    return objs, arrs


def lift_counts(fn):
    """Map (domain object, codomain arrow out of its image) to the number of lifts."""
    counts = {}
    for lam in fn.domain.objects:
        for e, (src, _) in fn.codomain.arrows.items():
            if src != fn.on_objects[lam]:
                continue
            counts[(lam, e)] = sum(1 for a, (s, _) in fn.domain.arrows.items()
                                   if s == lam and fn.on_arrows[a] == e)
    return counts


def spans_isomorphic_bruteforce(s1, s2) -> bool:
    """Try every object bijection and every arrow bijection."""
    p1, p2 = s1.peak, s2.peak
    if len(p1.objects) != len(p2.objects) or len(p1.arrows) != len(p2.arrows):
        return False
    o1, a1 = list(p1.objects), sorted(p1.arrows)
    for perm in permutations(p2.objects):
        om = dict(zip(o1, perm))
        if any(l1.on_objects[o] != l2.on_objects[om[o]] for o in o1 for l1, l2 in zip(s1.legs, s2.legs)):
            continue
        for aperm in permutations(sorted(p2.arrows)):
            am = dict(zip(a1, aperm))
            if any(p2.arrows[am[a]] != (om[p1.arrows[a][0]], om[p1.arrows[a][1]]) for a in a1):
                continue
            if any(l1.on_arrows[a] != l2.on_arrows[am[a]] for a in a1 for l1, l2 in zip(s1.legs, s2.legs)):
                continue
            if any(p2.compose[(am[g], am[f])] != am[h] for (g, f), h in p1.compose.items()):
                continue
            return True
    return False


def location_filter(records, warehouse):
    """The frames of an ABC state stored at the warehouse."""
    return {frame for frame, loc in records if loc == warehouse}


def monic_order_sets(frames, ys, zs):
    """All order sets over frames x ys x zs whose three projections are injective."""
    triples = list(product(sorted(frames), ys, zs))
    out = []
    for mask in range(2 ** len(triples)):
        chosen = [t for i, t in enumerate(triples) if mask >> i & 1]
        if all(len({t[k] for t in chosen}) == len(chosen) for k in range(3)):
            out.append(frozenset(chosen))
    return out
