from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from deltalens.errors import BoundExceeded, PreconditionError
from deltalens.fincat import walking_arrow
from deltalens.fixtures import random_cospan
from deltalens.lens import identity_lens
from deltalens.multilens import LensCospan, lens_pullback, one_lens
from deltalens.propagate import (
    SyncPair,
    backward_cospan,
    backward_span,
    forward_cospan,
    forward_span,
    propagations_agree,
    synchronized_cospan,
)

seeds = st.integers(min_value=0, max_value=10 ** 6)


def synced_pairs(c: LensCospan):
    for s in c.left.source.objects:
        for t in c.right.source.objects:
            if c.left.get.on_objects[s] == c.right.get.on_objects[t]:
                yield SyncPair(s, t)


def test_identity_cospan_synchronization():
    a = walking_arrow()
    c = LensCospan(identity_lens(a), identity_lens(a))
    assert synchronized_cospan(c, "a", "a")
    assert not synchronized_cospan(c, "a", "b")
    assert propagations_agree(c)[0]


def test_forward_on_identity_cospan():
    a = walking_arrow()
    c = LensCospan(identity_lens(a), identity_lens(a))
    tr = forward_cospan(c, SyncPair("a", "a"), "u")
    assert (tr.intermediate, tr.output_delta, tr.result) == ("u", "u", SyncPair("b", "b"))


def test_unsynchronized_pair_rejected():
    a = walking_arrow()
    c = LensCospan(identity_lens(a), identity_lens(a))
    with pytest.raises(PreconditionError, match="not synchronised"):
        forward_cospan(c, SyncPair("a", "b"), "u")
    with pytest.raises(PreconditionError, match="does not start"):
        forward_cospan(c, SyncPair("b", "b"), "u")
    with pytest.raises(PreconditionError, match="no such arrow"):
        backward_cospan(c, SyncPair("a", "a"), "zz")


@given(seeds)
def test_identity_preserved_and_pair_fixed(seed):
    c = random_cospan(random.Random(seed))
    for pair in synced_pairs(c):
        fw = forward_cospan(c, pair, c.left.source.identities[pair.left])
        assert fw.output_delta == c.right.source.identities[pair.right] and fw.result == pair
        bw = backward_cospan(c, pair, c.right.source.identities[pair.right])
        assert bw.output_delta == c.left.source.identities[pair.left] and bw.result == pair


@given(seeds)
def test_restoration(seed):
    c = random_cospan(random.Random(seed))
    for pair in synced_pairs(c):
        for alpha in c.left.source.out_arrows(pair.left):
            r = forward_cospan(c, pair, alpha).result
            assert synchronized_cospan(c, r.left, r.right)
        for alpha in c.right.source.out_arrows(pair.right):
            r = backward_cospan(c, pair, alpha).result
            assert synchronized_cospan(c, r.left, r.right)


@given(seeds)
def test_composition_preserved(seed):
    c = random_cospan(random.Random(seed))
    s_cat, s2_cat = c.left.source, c.right.source
    for pair in synced_pairs(c):
        for alpha in s_cat.out_arrows(pair.left):
            first = forward_cospan(c, pair, alpha)
            for beta in s_cat.out_arrows(s_cat.arrows[alpha][1]):
                second = forward_cospan(c, first.result, beta)
                whole = forward_cospan(c, pair, s_cat.compose[(beta, alpha)])
                assert whole.output_delta == s2_cat.compose[(second.output_delta, first.output_delta)]


@given(seeds)
def test_backward_is_forward_on_swapped(seed):
    c = random_cospan(random.Random(seed))
    swapped = c.swapped()
    for pair in synced_pairs(c):
        for alpha in c.right.source.out_arrows(pair.right):
            bw = backward_cospan(c, pair, alpha)
            fw = forward_cospan(swapped, SyncPair(pair.right, pair.left), alpha)
            assert bw.output_delta == fw.output_delta
            assert (bw.result.left, bw.result.right) == (fw.result.right, fw.result.left)


@given(seeds)
def test_span_propagation_laws(seed):
    c = random_cospan(random.Random(seed))
    span = lens_pullback(c).as_2lens()
    first, second = span.legs
    for s in span.peak.objects:
        x = first.get.on_objects[s]
        ident = forward_span(span, s, first.view.identities[x])
        assert ident.output_delta == second.view.identities[second.get.on_objects[s]]
        for alpha in first.view.out_arrows(x):
            tr = forward_span(span, s, alpha)
            # the peak object reached synchronises the new foot states
            assert first.get.on_objects[tr.result.peak] == tr.result.left
            assert second.get.on_objects[tr.result.peak] == tr.result.right
        for alpha in second.view.out_arrows(second.get.on_objects[s]):
            tr = backward_span(span, s, alpha)
            assert first.get.on_objects[tr.result.peak] == tr.result.left


@given(seeds)
def test_cospan_and_span_agree(seed):
    c = random_cospan(random.Random(seed))
    ok, report = propagations_agree(c)
    assert ok, report.discrepancies
    expected = sum(len(c.left.source.out_arrows(p.left)) + len(c.right.source.out_arrows(p.right))
                   for p in synced_pairs(c))
    assert report.checks == expected


def test_agreement_bound():
    a = walking_arrow()
    c = LensCospan(identity_lens(a), identity_lens(a))
    with pytest.raises(BoundExceeded):
        propagations_agree(c, bound=2)


def test_span_propagation_needs_two_legs():
    l = identity_lens(walking_arrow())
    single = one_lens(l)
    with pytest.raises(PreconditionError):
        forward_span(single, "a", "u")
