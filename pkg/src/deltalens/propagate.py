"""Forwards and Backwards propagation across lens cospans and 2-lenses."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BoundExceeded, PreconditionError
from .lens import put
from .multilens import LensCospan, Multilens, lens_pullback

DEFAULT_CHECK_BOUND = 10 ** 5


@dataclass(frozen=True)
class SyncPair:
    left: str
    right: str
    peak: str | None = None


@dataclass(frozen=True)
class PropagationTrace:
    direction: str  # "forward" or "backward"
    presentation: str  # "cospan" or "span"
    input_delta: str
    intermediate: str  # trough delta (cospan) or peak delta (span)
    output_delta: str
    result: SyncPair


def synchronized_cospan(c: LensCospan, s: str, s2: str) -> bool:
    return c.left.get.obj(s) == c.right.get.obj(s2)


def _check_sync(c: LensCospan, pair: SyncPair) -> None:
    if not synchronized_cospan(c, pair.left, pair.right):
        raise PreconditionError(f"states {pair.left} and {pair.right} are not synchronised")


def _arrow_at(cat, a: str, obj: str) -> None:
    if a not in cat.arrows:
        raise PreconditionError(f"no such arrow: {a}")
    if cat.arrows[a][0] != obj:
        raise PreconditionError(f"arrow {a} does not start at {obj}")


def forward_cospan(c: LensCospan, pair: SyncPair, alpha: str) -> PropagationTrace:
    """Put the right lens at the image of the left delta in the trough."""
    _check_sync(c, pair)
    _arrow_at(c.left.source, alpha, pair.left)
    trough = c.left.get.on_arrows[alpha]
    out = put(c.right, pair.right, trough)
    result = SyncPair(c.left.source.arrows[alpha][1], c.right.source.arrows[out][1])
    return PropagationTrace("forward", "cospan", alpha, trough, out, result)


def backward_cospan(c: LensCospan, pair: SyncPair, alpha: str) -> PropagationTrace:
    _check_sync(c, pair)
    _arrow_at(c.right.source, alpha, pair.right)
    trough = c.right.get.on_arrows[alpha]
    out = put(c.left, pair.left, trough)
    result = SyncPair(c.left.source.arrows[out][1], c.right.source.arrows[alpha][1])
    return PropagationTrace("backward", "cospan", alpha, trough, out, result)


def _two_legs(span: Multilens):
    if len(span) != 2:
        raise PreconditionError("span propagation needs a 2-lens")
    return span.legs


def forward_span(span: Multilens, s: str, alpha: str) -> PropagationTrace:
    """Lift ``alpha`` along the first leg at peak state ``s``, then Get along the second."""
    first, second = _two_legs(span)
    peak_delta = put(first, s, alpha)
    out = second.get.on_arrows[peak_delta]
    t = span.peak.arrows[peak_delta][1]
    result = SyncPair(first.view.arrows[alpha][1], second.view.arrows[out][1], t)
    return PropagationTrace("forward", "span", alpha, peak_delta, out, result)


def backward_span(span: Multilens, s: str, alpha: str) -> PropagationTrace:
    first, second = _two_legs(span)
    peak_delta = put(second, s, alpha)
    out = first.get.on_arrows[peak_delta]
    t = span.peak.arrows[peak_delta][1]
    result = SyncPair(first.view.arrows[out][1], second.view.arrows[alpha][1], t)
    return PropagationTrace("backward", "span", alpha, peak_delta, out, result)


@dataclass
class AgreementReport:
    checks: int = 0
    discrepancies: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def propagations_agree(c: LensCospan, bound: int = DEFAULT_CHECK_BOUND) -> tuple[bool, AgreementReport]:
    """Compare cospan propagation with propagation along the pulled-back span.

    Every synchronised pair and every delta out of either state is tried in
    the matching direction.  Raises :class:`BoundExceeded` before doing any
    work if the number of checks would exceed ``bound``.
    """
    sq = lens_pullback(c)
    span = sq.as_2lens()
    pairs = sq.pullback.object_pairs
    s_cat, s2_cat = c.left.source, c.right.source
    total = sum(len(s_cat.out_arrows(a)) + len(s2_cat.out_arrows(b)) for a, b in pairs.values())
    if total > bound:
        raise BoundExceeded(f"{total} propagation checks exceed the bound {bound}")
    report = AgreementReport()
    for peak_obj in sorted(pairs):
        s, s2 = pairs[peak_obj]
        pair = SyncPair(s, s2)
        for alpha in s_cat.out_arrows(s):
            report.checks += 1
            via_cospan = forward_cospan(c, pair, alpha)
            via_span = forward_span(span, peak_obj, alpha)
            if via_cospan.output_delta != via_span.output_delta:
                report.discrepancies.append(
                    f"forward at {peak_obj} on {alpha}: {via_cospan.output_delta} vs {via_span.output_delta}")
        for alpha in s2_cat.out_arrows(s2):
            report.checks += 1
            via_cospan = backward_cospan(c, pair, alpha)
            via_span = backward_span(span, peak_obj, alpha)
            if via_cospan.output_delta != via_span.output_delta:
                report.discrepancies.append(
                    f"backward at {peak_obj} on {alpha}: {via_cospan.output_delta} vs {via_span.output_delta}")
    return report.ok, report
