"""Multilenses (wide spans of asymmetric lenses) and their fusion."""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .errors import FootMismatch, FusionError, PreconditionError
from .fincat import FinCategory, Functor, PullbackResult, WideSpan, pullback
from .lens import (
    AsymmetricLens,
    compose_asymmetric,
    identity_lens,
    lens_differences,
    validate_lens,
)


@dataclass(frozen=True, eq=False)
class Multilens:
    peak: FinCategory
    legs: tuple[AsymmetricLens, ...]

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise PreconditionError("a multilens needs at least one leg")
        for leg in self.legs:
            if leg.source != self.peak:
                raise FootMismatch(f"leg {leg.name or '?'} does not start at the peak")

    def __len__(self) -> int:
        return len(self.legs)

    @property
    def feet(self) -> tuple[FinCategory, ...]:
        return tuple(leg.view for leg in self.legs)

    def as_span(self) -> WideSpan:
        """The underlying wide span of Get functors."""
        return WideSpan(self.peak, tuple(leg.get for leg in self.legs))


def make_multilens(peak: FinCategory, legs: Sequence[AsymmetricLens]) -> Multilens:
    """Build a multilens, rejecting legs that are not valid lenses out of ``peak``."""
    ml = Multilens(peak, tuple(legs))
    for i, leg in enumerate(ml.legs):
        problems = validate_lens(leg)
        if problems:
            raise PreconditionError(f"leg {i + 1} is not a valid lens: {problems[0]}")
    return ml


@dataclass(frozen=True, eq=False)
class LensCospan:
    left: AsymmetricLens
    right: AsymmetricLens

    def __post_init__(self):
        if self.left.view != self.right.view:
            raise FootMismatch("the two lenses of a cospan must share their view")

    @property
    def trough(self) -> FinCategory:
        return self.left.view

    def swapped(self) -> LensCospan:
        return LensCospan(self.right, self.left)


@dataclass(frozen=True, eq=False)
class LensSquare:
    """The pulled-back square over a lens cospan.

    ``left_projection`` runs from the pullback peak to the left source and is
    the right lens pulled back along the left Get; ``right_projection`` is the
    mirror image.
    """
    cospan: LensCospan
    pullback: PullbackResult
    left_projection: AsymmetricLens
    right_projection: AsymmetricLens

    @property
    def peak(self) -> FinCategory:
        return self.pullback.category

    def as_2lens(self) -> Multilens:
        return Multilens(self.peak, (self.left_projection, self.right_projection))


def _pulled_back(along: Functor, lens: AsymmetricLens, peak: PullbackResult,
                 lens_on_right: bool, name: str) -> AsymmetricLens:
    """Pull ``lens`` back along the Get ``along`` that shares its view.

    The new apex pairs states of ``along``'s domain with apex objects of
    ``lens``; its source leg lands in the pullback peak by applying the lens's
    source leg to the second component.
    """
    if lens_on_right:
        pb = pullback(along, lens.view_leg)
        mine, theirs = pb.left, pb.right
    else:
        pb = pullback(lens.view_leg, along)
        mine, theirs = pb.right, pb.left
    t = peak.category
    on_obj: dict[str, str] = {}
    for n, pair in pb.object_pairs.items():
        x, lam = (pair if lens_on_right else pair[::-1])
        s = lens.source_leg.on_objects[lam]
        on_obj[n] = _pair(x, s, lens_on_right)
    on_arr: dict[str, str] = {}
    for n, pair in pb.arrow_pairs.items():
        u, a = (pair if lens_on_right else pair[::-1])
        on_arr[n] = _pair(u, lens.source_leg.on_arrows[a], lens_on_right)
    source_leg = Functor(pb.category, t, on_obj, on_arr, "P")
    get = peak.left if lens_on_right else peak.right
    return AsymmetricLens(t, along.domain, pb.category, mine, source_leg, get, name)


def _pair(x: str, y: str, x_first: bool) -> str:
    return f"({x},{y})" if x_first else f"({y},{x})"


def lens_pullback(cospan: LensCospan) -> LensSquare:
    """Each lens of the cospan pulled back along the other lens's Get."""
    left, right = cospan.left, cospan.right
    pb = pullback(left.get, right.get)
    h = _pulled_back(left.get, right, pb, True, "H")
    h2 = _pulled_back(right.get, left, pb, False, "H'")
    return LensSquare(cospan, pb, h, h2)


def fuse(ml1: Multilens, ml2: Multilens, check: bool = True) -> Multilens:
    """Fuse an m-lens and an n-lens over the shared foot into an (m+n-1)-lens.

    The new peak is the pullback of the Gets of the last leg of ``ml1`` and
    the first leg of ``ml2``.  With ``check`` the two constructions of the
    shared middle leg are compared and :class:`FusionError` is raised if they
    differ.
    """
    last, first = ml1.legs[-1], ml2.legs[0]
    if last.view != first.view:
        raise FootMismatch("the rightmost foot of the first multilens is not the leftmost foot of the second")
    sq = lens_pullback(LensCospan(last, first))
    h, h2 = sq.left_projection, sq.right_projection
    left_legs = [compose_asymmetric(h, f) for f in ml1.legs]
    right_legs = [compose_asymmetric(h2, f) for f in ml2.legs]
    if check:
        diffs = lens_differences(left_legs[-1], right_legs[0], limit=1)
        if diffs:
            raise FusionError(f"the middle legs disagree: {diffs[0]}")
    return Multilens(sq.peak, tuple(left_legs + right_legs[1:]))


def compose_multilens(ml1: Multilens, ml2: Multilens, check: bool = True) -> Multilens:
    """Fuse, then forget the foot composed over: an (m+n-2)-lens."""
    if len(ml1) < 2 or len(ml2) < 2:
        raise PreconditionError("composition needs two multilenses with at least two legs each")
    fused = fuse(ml1, ml2, check)
    m = len(ml1)
    return Multilens(fused.peak, fused.legs[:m - 1] + fused.legs[m:])


def compose_symmetric(l1: Multilens, l2: Multilens, check: bool = True) -> Multilens:
    """Composition of symmetric lenses presented as 2-lenses."""
    if len(l1) != 2 or len(l2) != 2:
        raise PreconditionError("symmetric composition needs two 2-lenses")
    return compose_multilens(l1, l2, check)


def embed_as_2lens(l: AsymmetricLens, side: str) -> Multilens:
    """Pair ``l`` with the identity lens on its source.

    ``side`` says where the identity goes: ``"left"`` gives
    ``(identity, l)`` and ``"right"`` gives ``(l, identity)``.
    """
    ident = identity_lens(l.source)
    if side == "left":
        return Multilens(l.source, (ident, l))
    if side == "right":
        return Multilens(l.source, (l, ident))
    raise PreconditionError(f"side must be left or right, not {side!r}")


def one_lens(l: AsymmetricLens) -> Multilens:
    return Multilens(l.source, (l,))


def consistency_lens(cospan: LensCospan, check: bool = True) -> AsymmetricLens:
    """The diagonal of the pulled-back square, from consistent pairs to the trough."""
    (leg,) = fuse(one_lens(cospan.left), one_lens(cospan.right), check).legs
    return leg


def cospan_3lens(cospan: LensCospan, check: bool = True) -> Multilens:
    """Fusion of the cospan's legs embedded on its outside: a 3-lens."""
    return fuse(embed_as_2lens(cospan.left, "left"), embed_as_2lens(cospan.right, "right"), check)


def fuse_zigzag(cospans: Sequence[LensCospan], check: bool = True) -> Multilens:
    """Fuse a chain of cospans into a (2k+1)-lens, associating to the left."""
    if not cospans:
        raise PreconditionError("a zig-zag needs at least one cospan")
    for a, b in zip(cospans, cospans[1:]):
        if a.right.source != b.left.source:
            raise FootMismatch("consecutive cospans must share their outer system")
    result = cospan_3lens(cospans[0], check)
    for c in cospans[1:]:
        result = fuse(result, cospan_3lens(c, check), check)
    return result


def validate_multilens(ml: Multilens) -> list[tuple[int, list]]:
    """Validation report per leg, listing only legs with problems."""
    out = []
    for i, leg in enumerate(ml.legs):
        problems = validate_lens(leg)
        if problems:
            out.append((i + 1, problems))
    return out
