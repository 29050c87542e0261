from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from deltalens.errors import FootMismatch, PreconditionError
from deltalens.fincat import (
    Functor,
    WideSpan,
    cyclic_group,
    identity_functor,
    pullback,
    spans_isomorphic,
    terminal_category,
    walking_arrow,
)
from deltalens.fixtures import (
    factor_lens,
    product_category,
    random_category,
    random_cospan,
    random_fusable_pair,
    random_lens_into,
    random_multilens,
)
from deltalens.lens import (
    compose_asymmetric,
    identity_lens,
    lens_differences,
    lenses_equal,
    put,
    put_inputs,
    put_law_violations,
    validate_lens,
)
from deltalens.multilens import (
    LensCospan,
    Multilens,
    compose_multilens,
    compose_symmetric,
    consistency_lens,
    cospan_3lens,
    embed_as_2lens,
    fuse,
    fuse_zigzag,
    lens_pullback,
    make_multilens,
    one_lens,
    validate_multilens,
)
from deltalens.propagate import forward_span

from oracles import pullback_pairs

seeds = st.integers(min_value=0, max_value=10 ** 6)


def gets(ml: Multilens) -> WideSpan:
    return ml.as_span()


def iterated_limit(c1: LensCospan, c2: LensCospan, left_first: bool) -> WideSpan:
    """The zig-zag limit with legs to the three outer systems, in two stages."""
    if left_first:
        t1 = pullback(c1.left.get, c1.right.get)
        t = pullback(t1.right.then(c2.left.get), c2.right.get)
        return WideSpan(t.category, (t.left.then(t1.left), t.left.then(t1.right), t.right))
    t2 = pullback(c2.left.get, c2.right.get)
    t = pullback(c1.left.get, t2.left.then(c1.right.get))
    return WideSpan(t.category, (t.left, t.right.then(t2.left), t.right.then(t2.right)))


def random_zigzag(rng: random.Random):
    """Two cospans sharing a middle system that is a product of both troughs."""
    c, d = random_category(rng, 1), random_category(rng, 1)
    middle = product_category([c, d])
    return (LensCospan(random_lens_into(rng, c, 2), factor_lens(middle, 0)),
            LensCospan(factor_lens(middle, 1), random_lens_into(rng, d, 2)))


# -- make_multilens --------------------------------------------------------------

def test_single_identity_leg():
    c = walking_arrow()
    ml = make_multilens(c, [identity_lens(c)])
    assert len(ml) == 1 and ml.feet == (c,)


def test_legs_with_different_sources_rejected():
    with pytest.raises(PreconditionError):
        make_multilens(walking_arrow(), [identity_lens(walking_arrow()), identity_lens(terminal_category())])


def test_no_legs_rejected():
    with pytest.raises(PreconditionError):
        make_multilens(walking_arrow(), [])


def test_validate_multilens_reports_by_leg():
    c = walking_arrow()
    a = identity_lens(c)
    bent = Functor(c, c, {"a": "a", "b": "b"}, {"u": "1_a", "1_a": "1_a", "1_b": "1_b"})
    broken = type(a)(c, c, c, bent, a.source_leg, a.get, "bent")
    report = validate_multilens(Multilens(c, (a, broken)))
    assert [leg for leg, _ in report] == [2]


# -- lens_pullback ---------------------------------------------------------------

@given(seeds)
def test_identity_leg_degenerates(seed):
    rng = random.Random(seed)
    l = random_lens_into(rng, random_category(rng))
    sq = lens_pullback(LensCospan(identity_lens(l.view), l))
    assert spans_isomorphic(WideSpan(sq.peak, (sq.left_projection.get, sq.right_projection.get)),
                            WideSpan(l.source, (l.get, identity_functor(l.source))))
    h = sq.left_projection
    for t, alpha in put_inputs(h):
        _, s = sq.pullback.object_pairs[t]
        assert sq.pullback.arrow_pairs[put(h, t, alpha)] == (alpha, put(l, s, alpha))


@given(seeds)
def test_square_is_a_pullback_of_gets(seed):
    c = random_cospan(random.Random(seed))
    sq = lens_pullback(c)
    objs, arrs = pullback_pairs(c.left.get, c.right.get)
    assert set(sq.pullback.object_pairs.values()) == objs
    assert set(sq.pullback.arrow_pairs.values()) == arrs
    assert sq.left_projection.get == sq.pullback.left
    assert sq.right_projection.get == sq.pullback.right


@given(seeds)
def test_square_commutes_as_lenses(seed):
    c = random_cospan(random.Random(seed))
    sq = lens_pullback(c)
    around_left = compose_asymmetric(sq.left_projection, c.left)
    around_right = compose_asymmetric(sq.right_projection, c.right)
    assert lens_differences(around_left, around_right) == []


@given(seeds)
def test_pulled_back_legs_are_lenses(seed):
    c = random_cospan(random.Random(seed))
    sq = lens_pullback(c)
    for leg in (sq.left_projection, sq.right_projection):
        assert validate_lens(leg, deep=True) == []
        assert list(put_law_violations(leg)) == []


# -- fusion ----------------------------------------------------------------------

@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 2), (2, 3), (1, 3), (3, 1)])
def test_leg_count(m, n):
    rng = random.Random(m * 10 + n)
    for _ in range(3):
        a, b = random_fusable_pair(rng, m, n)
        assert len(fuse(a, b)) == m + n - 1
        if m >= 2 and n >= 2:
            assert len(compose_multilens(a, b)) == m + n - 2


@given(seeds)
def test_fused_feet(seed):
    a, b = random_fusable_pair(random.Random(seed), 2, 3)
    f = fuse(a, b)
    assert f.feet == a.feet + b.feet[1:]
    assert validate_multilens(f) == []


@given(seeds)
def test_middle_leg_well_defined(seed):
    a, b = random_fusable_pair(random.Random(seed), 2, 2)
    sq = lens_pullback(LensCospan(a.legs[-1], b.legs[0]))
    via_left = compose_asymmetric(sq.left_projection, a.legs[-1])
    via_right = compose_asymmetric(sq.right_projection, b.legs[0])
    assert lens_differences(via_left, via_right) == []
    assert lenses_equal(fuse(a, b).legs[1], via_right)


def test_fuse_foot_mismatch():
    a = one_lens(identity_lens(walking_arrow()))
    b = one_lens(identity_lens(cyclic_group(2)))
    with pytest.raises(FootMismatch):
        fuse(a, b)


def test_compose_needs_two_legs():
    a = one_lens(identity_lens(walking_arrow()))
    with pytest.raises(PreconditionError):
        compose_multilens(a, a)


@given(seeds, st.sampled_from([1, 2, 3]))
def test_identity_one_lens_is_unit(seed, n):
    ml = random_multilens(random.Random(seed), n)
    left_unit = fuse(one_lens(identity_lens(ml.feet[0])), ml)
    right_unit = fuse(ml, one_lens(identity_lens(ml.feet[-1])))
    assert spans_isomorphic(gets(left_unit), gets(ml))
    assert spans_isomorphic(gets(right_unit), gets(ml))


@given(seeds)
def test_fuse_associative(seed):
    rng = random.Random(seed)
    a, b = random_fusable_pair(rng, 2, 2, max_objects=2)
    c = random_multilens(rng, 2, first_foot=b.feet[-1], max_objects=2)
    left = fuse(fuse(a, b), c)
    right = fuse(a, fuse(b, c))
    assert spans_isomorphic(gets(left), gets(right))


@given(seeds)
def test_compose_symmetric_with_identity(seed):
    ml = random_multilens(random.Random(seed), 2)
    ident = Multilens(ml.feet[1], (identity_lens(ml.feet[1]),) * 2)
    composed = compose_symmetric(ml, ident)
    assert len(composed) == 2
    assert spans_isomorphic(gets(composed), gets(ml))


@given(seeds)
def test_composite_forward_is_iterated_forward(seed):
    a, b = random_fusable_pair(random.Random(seed), 2, 2, max_objects=3)
    c = compose_symmetric(a, b)
    pb = lens_pullback(LensCospan(a.legs[-1], b.legs[0])).pullback
    for t in c.peak.objects:
        s, s2 = pb.object_pairs[t]
        for alpha in a.feet[0].out_arrows(a.legs[0].get.on_objects[s]):
            once = forward_span(a, s, alpha)
            twice = forward_span(b, s2, once.output_delta)
            assert forward_span(c, t, alpha).output_delta == twice.output_delta


@given(seeds)
def test_compose_multilens_matches_symmetric(seed):
    a, b = random_fusable_pair(random.Random(seed), 2, 2, max_objects=3)
    assert spans_isomorphic(gets(compose_multilens(a, b)), gets(compose_symmetric(a, b)))
    fused = fuse(a, b)
    assert [l.get for l in compose_multilens(a, b).legs] == [fused.legs[0].get, fused.legs[2].get]


# -- embedding and consistency ---------------------------------------------------

def test_embed_identity_either_side():
    c = cyclic_group(2)
    for side in ("left", "right"):
        ml = embed_as_2lens(identity_lens(c), side)
        assert len(ml) == 2
        assert all(lenses_equal(l, identity_lens(c)) for l in ml.legs)


@given(seeds)
def test_embed_sides(seed):
    l = random_lens_into(random.Random(seed), random_category(random.Random(seed)))
    assert embed_as_2lens(l, "left").legs[1] is l
    assert embed_as_2lens(l, "right").legs[0] is l
    with pytest.raises(PreconditionError):
        embed_as_2lens(l, "middle")


@given(seeds)
def test_three_lens_from_cospan(seed):
    c = random_cospan(random.Random(seed))
    three = cospan_3lens(c)
    sq = lens_pullback(c)
    assert len(three) == 3
    assert lenses_equal(three.legs[0], sq.left_projection)
    assert lenses_equal(three.legs[1], consistency_lens(c))
    assert lenses_equal(three.legs[2], sq.right_projection)


def test_consistency_of_identities_is_identity():
    c = walking_arrow()
    cons = consistency_lens(LensCospan(identity_lens(c), identity_lens(c)))
    assert validate_lens(cons) == []
    assert spans_isomorphic(WideSpan(cons.source, (cons.get,)), WideSpan(c, (identity_functor(c),)))


@given(seeds)
def test_consistency_peak_is_synchronized_pairs(seed):
    c = random_cospan(random.Random(seed))
    cons = consistency_lens(c)
    synced = {(s, t) for s in c.left.source.objects for t in c.right.source.objects
              if c.left.get.on_objects[s] == c.right.get.on_objects[t]}
    assert len(cons.source.objects) == len(synced)
    assert cons.view == c.trough
    assert validate_lens(cons) == []


# -- zig-zags --------------------------------------------------------------------

@given(seeds)
def test_single_cospan_zigzag(seed):
    c = random_cospan(random.Random(seed))
    z = fuse_zigzag([c])
    assert len(z) == 3
    assert all(lenses_equal(a, b) for a, b in zip(z.legs, cospan_3lens(c).legs))


@given(seeds)
def test_two_cospan_zigzag(seed):
    c1, c2 = random_zigzag(random.Random(seed))
    z = fuse_zigzag([c1, c2])
    assert len(z) == 5
    assert validate_multilens(z) == []
    outer = WideSpan(z.peak, (z.legs[0].get, z.legs[2].get, z.legs[4].get))
    for left_first in (True, False):
        assert spans_isomorphic(outer, iterated_limit(c1, c2, left_first), bound=16)


def test_zigzag_mismatch_and_empty():
    a = identity_lens(walking_arrow())
    b = identity_lens(cyclic_group(2))
    with pytest.raises(FootMismatch):
        fuse_zigzag([LensCospan(a, a), LensCospan(b, b)])
    with pytest.raises(PreconditionError):
        fuse_zigzag([])
