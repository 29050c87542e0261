"""Command-line interface: ``deltalens <command> ...``.

Exit codes: 0 success, 1 validation or law failure, 2 parse or usage error,
3 precondition or reference error, 4 enumeration bound exceeded.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import sys
from itertools import product as cartesian
from pathlib import Path

from .errors import BoundExceeded, FusionError, LensError, NotFunctorial, ParseError, PreconditionError
from .fincat import spans_isomorphic, validate_category, validate_functor
from .lens import (
    AsymmetricLens,
    compose_asymmetric,
    identity_lens,
    lens_differences,
    put_law_violations,
    validate_lens,
)
from .lensfile import LensDocument, Serializer, parse
from .multilens import (
    LensCospan,
    Multilens,
    compose_multilens,
    consistency_lens,
    fuse,
    lens_pullback,
    one_lens,
)
from .propagate import (
    DEFAULT_CHECK_BOUND,
    SyncPair,
    backward_cospan,
    backward_span,
    forward_cospan,
    forward_span,
    propagations_agree,
)
from .scenario import check_scenario, parse_script, render_trace, run_script, supply_chain

DEFAULT_ISO_BOUND = 10
DEFAULT_SCENARIO_BOUND = 10 ** 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="deltalens", description="Delta lenses over explicit finite categories.")
    p.add_argument("--bound", type=int, default=None,
                   help="override enumeration and isomorphism-search bounds")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="validate every block of a LENS file")
    s.add_argument("file")

    s = sub.add_parser("compose", help="compose two asymmetric lenses")
    s.add_argument("file")
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("fuse", help="fuse two multilenses over their shared foot")
    s.add_argument("file")
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("pullback", help="pull back a lens cospan")
    s.add_argument("file")
    s.add_argument("cospan")

    s = sub.add_parser("consistency", help="consistency lens of a cospan")
    s.add_argument("file")
    s.add_argument("cospan")

    s = sub.add_parser("propagate", help="propagate one delta across a cospan or 2-lens")
    s.add_argument("file")
    s.add_argument("name", help="a cospan or a 2-leg multilens")
    s.add_argument("args", nargs="+", metavar="STATE/DELTA",
                   help="cospan: LEFT RIGHT DELTA; 2-lens: PEAK DELTA")
    s.add_argument("--direction", choices=["fwd", "bwd"], default="fwd")

    s = sub.add_parser("laws", help="run the law suites over a LENS file")
    s.add_argument("file")
    s.add_argument("--suite", choices=["all", "lens", "fusion", "prop4"], default="all")

    s = sub.add_parser("scenario", help="supply-chain scenario")
    ss = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    r = ss.add_parser("run", help="run a command script and print the trace")
    r.add_argument("config")
    r.add_argument("script")
    r.add_argument("--scenario", default=None, help="scenario block to use when the file has several")
    c = ss.add_parser("check", help="check every scenario invariant exhaustively")
    c.add_argument("config")
    c.add_argument("--scenario", default=None)
    return p


def _load(path: str) -> LensDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _pinned(doc: LensDocument) -> Serializer:
    tables = (doc.categories, doc.functors, doc.lenses, doc.cospans, doc.multilenses)
    return Serializer({id(v): n for table in tables for n, v in table.items()})


def _multilens(doc: LensDocument, name: str) -> Multilens:
    if name in doc.multilenses:
        return doc.multilenses[name]
    if name in doc.lenses:
        return one_lens(doc.lenses[name])
    raise PreconditionError(f"unknown multilens or lens {name!r}")


def _lens(doc: LensDocument, name: str) -> AsymmetricLens:
    if name not in doc.lenses:
        raise PreconditionError(f"unknown lens {name!r}")
    return doc.lenses[name]


def _cospan(doc: LensDocument, name: str) -> LensCospan:
    if name not in doc.cospans:
        raise PreconditionError(f"unknown cospan {name!r}")
    return doc.cospans[name]


def _report(kind: str, name: str, problems) -> list[str]:
    if not problems:
        return [f"{kind} {name}: ok"]
    return [f"{kind} {name}: {len(problems)} violation(s)"] + [f"  - {p}" for p in problems]


def cmd_validate(args) -> tuple[int, str]:
    doc = _load(args.file)
    lines: list[str] = []
    bad = False
    for n in sorted(doc.categories):
        problems = validate_category(doc.categories[n])
        bad |= bool(problems)
        lines += _report("category", n, problems)
    for n in sorted(doc.functors):
        problems = validate_functor(doc.functors[n])
        bad |= bool(problems)
        lines += _report("functor", n, problems)
    for n in sorted(doc.lenses):
        problems = validate_lens(doc.lenses[n], deep=True)
        bad |= bool(problems)
        lines += _report("lens", n, problems)
    for n in sorted(doc.cospans):
        c = doc.cospans[n]
        problems = validate_lens(c.left) + validate_lens(c.right)
        bad |= bool(problems)
        lines += _report("cospan", n, problems)
    for n in sorted(doc.multilenses):
        problems = [p for leg in doc.multilenses[n].legs for p in validate_lens(leg)]
        bad |= bool(problems)
        lines += _report("multilens", n, problems)
    for n in sorted(doc.scenarios):
        lines.append(f"scenario {n}: ok")
    lines.append("valid" if not bad else "invalid")
    return (1 if bad else 0), "\n".join(lines) + "\n"


def cmd_compose(args) -> tuple[int, str]:
    doc = _load(args.file)
    l1, l2 = _lens(doc, args.first), _lens(doc, args.second)
    out = _pinned(doc)
    composite = compose_asymmetric(l1, l2, name=f"{args.first}_then_{args.second}")
    problems = validate_lens(composite)
    out.lens(composite, composite.name)
    header = f"# composite {args.first} then {args.second}: {'valid' if not problems else 'invalid'}\n"
    return (1 if problems else 0), header + out.text()


def cmd_fuse(args) -> tuple[int, str]:
    doc = _load(args.file)
    a, b = _multilens(doc, args.first), _multilens(doc, args.second)
    fused = fuse(a, b)
    out = _pinned(doc)
    out.multilens(fused, "fused")
    header = f"# fusion of {args.first} ({len(a)} legs) and {args.second} ({len(b)} legs)\n# legs: {len(fused)}\n"
    return 0, header + out.text()


def cmd_pullback(args) -> tuple[int, str]:
    doc = _load(args.file)
    c = _cospan(doc, args.cospan)
    sq = lens_pullback(c)
    h, h2 = sq.left_projection, sq.right_projection
    diffs = lens_differences(compose_asymmetric(h, c.left), compose_asymmetric(h2, c.right), limit=1)
    out = _pinned(doc)
    out.category(sq.peak, f"{args.cospan}.peak")
    out.lens(h, f"{args.cospan}.H")
    out.lens(h2, f"{args.cospan}.H'")
    header = (f"# pullback of {args.cospan}: {len(sq.peak.objects)} objects, {len(sq.peak.arrows)} arrows\n"
              f"# square commutes: {'true' if not diffs else 'false'}\n")
    return (1 if diffs else 0), header + out.text()


def cmd_consistency(args) -> tuple[int, str]:
    doc = _load(args.file)
    c = _cospan(doc, args.cospan)
    lens = consistency_lens(c)
    out = _pinned(doc)
    out.lens(lens, f"{args.cospan}.consistency")
    header = f"# consistency lens of {args.cospan}: {len(lens.source.objects)} consistent pairs\n"
    return 0, header + out.text()


def cmd_propagate(args) -> tuple[int, str]:
    doc = _load(args.file)
    forward = args.direction == "fwd"
    if args.name in doc.cospans:
        if len(args.args) != 3:
            raise PreconditionError("a cospan needs LEFT RIGHT DELTA")
        left, right, delta = args.args
        c = doc.cospans[args.name]
        for s, cat in ((left, c.left.source), (right, c.right.source)):
            if s not in cat.object_set:
                raise PreconditionError(f"no such object: {s}")
        pair = SyncPair(left, right)
        trace = (forward_cospan if forward else backward_cospan)(c, pair, delta)
        label = "trough"
    elif args.name in doc.multilenses:
        if len(args.args) != 2:
            raise PreconditionError("a 2-lens needs PEAK DELTA")
        peak, delta = args.args
        span = doc.multilenses[args.name]
        if peak not in span.peak.object_set:
            raise PreconditionError(f"no such object: {peak}")
        trace = (forward_span if forward else backward_span)(span, peak, delta)
        label = "peak"
    else:
        raise PreconditionError(f"unknown cospan or multilens {args.name!r}")
    lines = [
        f"propagate {trace.direction} {trace.presentation} {args.name}",
        f"  input: {trace.input_delta}",
        f"  {label}: {trace.intermediate}",
        f"  output: {trace.output_delta}",
        f"  result: left={trace.result.left} right={trace.result.right}"
        + (f" peak={trace.result.peak}" if trace.result.peak is not None else ""),
    ]
    return 0, "\n".join(lines) + "\n"


def _lens_suite(doc: LensDocument, bound: int | None) -> list[tuple[bool, str]]:
    out = []
    targets = [(f"lens {n}", doc.lenses[n]) for n in sorted(doc.lenses)]
    for n in sorted(doc.multilenses):
        targets += [(f"multilens {n} leg {i}", leg) for i, leg in enumerate(doc.multilenses[n].legs, 1)]
    for label, lens in targets:
        problems = validate_lens(lens, deep=True)
        if not problems:
            problems = list(put_law_violations(lens, bound))
        out.append((not problems, f"{label}: " + (str(problems[0]) if problems else
                                                   "triangle, unique lifts and put laws hold")))
    return out


def _fusion_suite(doc: LensDocument, iso_bound: int) -> list[tuple[bool, str]]:
    out = []
    names = sorted(doc.multilenses)
    mls = {n: doc.multilenses[n] for n in names}
    for n in names:
        m = mls[n]
        left = fuse(one_lens(identity_lens(m.feet[0])), m)
        right = fuse(m, one_lens(identity_lens(m.feet[-1])))
        ok = (spans_isomorphic(left.as_span(), m.as_span(), iso_bound)
              and spans_isomorphic(right.as_span(), m.as_span(), iso_bound))
        out.append((ok, f"fusion identity {n}: " + ("isomorphic on both sides" if ok else "not isomorphic")))
    fusable = [(a, b) for a, b in cartesian(names, names) if mls[a].feet[-1] == mls[b].feet[0]]
    for a, b in fusable:
        try:
            fused = fuse(mls[a], mls[b])
        except FusionError as exc:
            out.append((False, f"fusion {a} {b}: {exc}"))
            continue
        want = len(mls[a]) + len(mls[b]) - 1
        out.append((len(fused) == want, f"fusion {a} {b}: {len(fused)} legs, expected {want}; middle legs agree"))
        if len(mls[a]) >= 2 and len(mls[b]) >= 2:
            composed = compose_multilens(mls[a], mls[b])
            want = len(mls[a]) + len(mls[b]) - 2
            out.append((len(composed) == want, f"composition {a} {b}: {len(composed)} legs, expected {want}"))
    for a, b in fusable:
        for b2, c in fusable:
            if b2 != b:
                continue
            lhs = fuse(fuse(mls[a], mls[b]), mls[c])
            rhs = fuse(mls[a], fuse(mls[b], mls[c]))
            ok = spans_isomorphic(lhs.as_span(), rhs.as_span(), iso_bound)
            out.append((ok, f"associativity {a} {b} {c}: " + ("isomorphic" if ok else "not isomorphic")))
    return out


def _prop4_suite(doc: LensDocument, bound: int) -> list[tuple[bool, str]]:
    out = []
    for n in sorted(doc.cospans):
        ok, report = propagations_agree(doc.cospans[n], bound)
        detail = f"{report.checks} checks agree" if ok else report.discrepancies[0]
        out.append((ok, f"propagations {n}: {detail}"))
    return out


def cmd_laws(args) -> tuple[int, str]:
    doc = _load(args.file)
    results: list[tuple[bool, str]] = []
    if args.suite in ("all", "lens"):
        results += _lens_suite(doc, args.bound)
    if args.suite in ("all", "fusion"):
        results += _fusion_suite(doc, args.bound or DEFAULT_ISO_BOUND)
    if args.suite in ("all", "prop4"):
        results += _prop4_suite(doc, args.bound or DEFAULT_CHECK_BOUND)
    lines = [("PASS " if ok else "FAIL ") + msg for ok, msg in results]
    failed = sum(1 for ok, _ in results if not ok)
    lines.append(f"laws: {len(results) - failed} passed, {failed} failed")
    return (1 if failed else 0), "\n".join(lines) + "\n"


def _scenario_config(path: str, name: str | None):
    doc = _load(path)
    if name is not None:
        if name not in doc.scenarios:
            raise PreconditionError(f"unknown scenario {name!r}")
        return doc.scenarios[name]
    if len(doc.scenarios) != 1:
        raise PreconditionError(f"{path} has {len(doc.scenarios)} scenario blocks; choose one with --scenario")
    return next(iter(doc.scenarios.values()))


def cmd_scenario(args) -> tuple[int, str]:
    cfg = _scenario_config(args.config, args.scenario)
    if args.action == "run":
        try:
            text = Path(args.script).read_text(encoding="utf-8")
        except OSError as exc:
            raise PreconditionError(f"cannot read {args.script}: {exc.strerror}") from None
        commands = parse_script(text)
        chain = supply_chain(cfg, False)
        return 0, render_trace(chain, run_script(chain, commands))
    results = check_scenario(cfg, args.bound or DEFAULT_SCENARIO_BOUND)
    lines = [("PASS " if r.ok else "FAIL ") + r.name + (f": {r.detail}" if r.detail else "") for r in results]
    failed = sum(1 for r in results if not r.ok)
    lines.append(f"scenario check: {len(results) - failed} passed, {failed} failed")
    return (1 if failed else 0), "\n".join(lines) + "\n"


COMMANDS = {
    "validate": cmd_validate, "compose": cmd_compose, "fuse": cmd_fuse, "pullback": cmd_pullback,
    "consistency": cmd_consistency, "propagate": cmd_propagate, "laws": cmd_laws, "scenario": cmd_scenario,
}


def run_command(argv: list[str]) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    shown = io.StringIO()
    try:
        with contextlib.redirect_stdout(shown):
            args = build_parser().parse_args(argv)
    except UsageError as exc:
        return 2, "", f"usage error: {exc}\n"
    except SystemExit as exc:  # --help
        return int(exc.code or 0), shown.getvalue(), ""
    try:
        code, text = COMMANDS[args.command](args)
    except ParseError as exc:
        return 2, "", f"parse error: {exc}\n"
    except BoundExceeded as exc:
        return 4, "", f"bound exceeded: {exc}\n"
    except (NotFunctorial, FusionError) as exc:
        return 1, "", f"validation failure: {exc}\n"
    except PreconditionError as exc:
        return 3, "", f"error: {exc}\n"
    except LensError as exc:
        return 1, "", f"error: {exc}\n"
    return code, text, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
