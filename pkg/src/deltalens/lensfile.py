"""The LENS text format: a line-oriented description of categories, functors,
lenses, cospans, multilenses and scenario configurations.

::

    # comments run to the end of the line
    category C
      object a b
      arrow u: a -> b
      identity a = 1_a        # optional, 1_<object> by default
      compose g . f = h       # composites with identities are implicit
    end

    functor F: C -> D
      object a -> x
      arrow u -> v            # identities map to identities by default
    end

    lens L                    # a triangle of named functors
      S C
      V D
      Lambda A
      F F1
      P P1
      G G1
    end

    lens K                    # or Get plus a put rule, one line per input
      S C
      V D
      G G1
      rule a u = w            # identity inputs default to identities
    end

    cospan K1
      left L
      right K
    end

    multilens M
      peak C
      leg L
      leg K
    end

    scenario demo
      frames f1 f2 f3
      y y1 y2
      z z1 z2
      locations XYZ-Warehouse Depot
      warehouse XYZ-Warehouse
      max-states 500
    end

Names are whitespace-free tokens, unique across the document, and must be
defined before they are used.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError, PreconditionError
from .fincat import FinCategory, Functor, category
from .lens import AsymmetricLens, lens_from_put, put, put_inputs
from .multilens import LensCospan, Multilens
from .scenario import ScenarioConfig

_RESERVED = {".", "=", "->", ":"}


class UnresolvedName(PreconditionError):
    """A name is used before it is defined, or refers to the wrong kind of block."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


@dataclass
class LensDocument:
    categories: dict[str, FinCategory] = field(default_factory=dict)
    functors: dict[str, Functor] = field(default_factory=dict)
    lenses: dict[str, AsymmetricLens] = field(default_factory=dict)
    cospans: dict[str, LensCospan] = field(default_factory=dict)
    multilenses: dict[str, Multilens] = field(default_factory=dict)
    scenarios: dict[str, ScenarioConfig] = field(default_factory=dict)
    # lenses given by put rules rather than a named triangle
    rule_lenses: set[str] = field(default_factory=set)

    def names(self) -> set[str]:
        return (set(self.categories) | set(self.functors) | set(self.lenses)
                | set(self.cospans) | set(self.multilenses) | set(self.scenarios))

    def __eq__(self, other):
        if not isinstance(other, LensDocument):
            return NotImplemented
        if self.names() != other.names():
            return False
        if self.categories != other.categories or self.functors != other.functors:
            return False
        if self.scenarios != other.scenarios:
            return False
        for n, l in self.lenses.items():
            if not _lens_eq(l, other.lenses[n]):
                return False
        for n, c in self.cospans.items():
            o = other.cospans[n]
            if not (_lens_eq(c.left, o.left) and _lens_eq(c.right, o.right)):
                return False
        for n, m in self.multilenses.items():
            o = other.multilenses[n]
            if m.peak != o.peak or len(m) != len(o) or not all(map(_lens_eq, m.legs, o.legs)):
                return False
        return True


def _lens_eq(a: AsymmetricLens, b: AsymmetricLens) -> bool:
    return (a.source == b.source and a.view == b.view and a.apex == b.apex
            and a.view_leg == b.view_leg and a.source_leg == b.source_leg and a.get == b.get)


# -- parsing -----------------------------------------------------------------

@dataclass
class _Line:
    number: int
    words: list[str]
    columns: list[int]

    def col(self, i: int) -> int:
        return self.columns[i] if i < len(self.columns) else (self.columns[-1] if self.columns else 1)


def _tokenize(text: str) -> list[_Line]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        words, cols = [], []
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            words.append(body[i:j])
            cols.append(i + 1)
            i = j
        if words:
            out.append(_Line(n, words, cols))
    return out


def _split_colon(line: _Line, i: int) -> list[str]:
    """Normalise ``name:`` and ``name :`` into ``name`` followed by ``:``."""
    w = line.words
    if i < len(w) and w[i].endswith(":") and len(w[i]) > 1:
        line.words = w[:i] + [w[i][:-1], ":"] + w[i + 1:]
        line.columns = line.columns[:i] + [line.columns[i], line.columns[i] + len(w[i]) - 1] + line.columns[i + 1:]
    return line.words


class _Parser:
    def __init__(self, text: str):
        self.lines = _tokenize(text)
        self.pos = 0
        self.doc = LensDocument()

    def error(self, line: _Line, msg: str, i: int = 0):
        raise ParseError(msg, line.number, line.col(i))

    def name(self, line: _Line, i: int) -> str:
        if i >= len(line.words):
            self.error(line, "expected a name", i)
        n = line.words[i]
        if n in _RESERVED:
            self.error(line, f"expected a name, found {n!r}", i)
        return n

    def fresh(self, line: _Line, i: int) -> str:
        n = self.name(line, i)
        if n in self.doc.names():
            self.error(line, f"duplicate name {n!r}", i)
        return n

    def ref(self, table: dict, kind: str, line: _Line, i: int):
        n = self.name(line, i)
        if n not in table:
            raise UnresolvedName(f"unknown {kind} {n!r}", line.number, line.col(i))
        return table[n]

    def expect_len(self, line: _Line, n: int):
        if len(line.words) != n:
            self.error(line, f"expected {n} words, found {len(line.words)}",
                       min(n, len(line.words)) if len(line.words) < n else n)

    def expect_word(self, line: _Line, i: int, word: str):
        if i >= len(line.words) or line.words[i] != word:
            self.error(line, f"expected {word!r}", i)

    def body(self, header: _Line) -> list[_Line]:
        out = []
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            if line.words == ["end"]:
                return out
            out.append(line)
        self.error(header, f"block {header.words[0]} is not closed with 'end'")

    def parse(self) -> LensDocument:
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            kind = line.words[0]
            handler = {
                "category": self.category, "functor": self.functor, "lens": self.lens,
                "cospan": self.cospan, "multilens": self.multilens, "scenario": self.scenario,
            }.get(kind)
            if handler is None:
                self.error(line, f"unknown block {kind!r}")
            handler(line)
        return self.doc

    def category(self, header: _Line):
        self.expect_len(header, 2)
        name = self.fresh(header, 1)
        objects: list[str] = []
        arrows: dict[str, tuple[str, str]] = {}
        ids: dict[str, str] = {}
        comp: dict[tuple[str, str], str] = {}
        where: dict[str, _Line] = {}
        for line in self.body(header):
            key = line.words[0]
            if key == "object":
                for i in range(1, len(line.words)):
                    o = self.name(line, i)
                    if o in objects:
                        self.error(line, f"duplicate object {o!r}", i)
                    objects.append(o)
            elif key == "arrow":
                w = _split_colon(line, 1)
                if len(w) != 6 or w[2] != ":" or w[4] != "->":
                    self.error(line, "expected 'arrow NAME: SOURCE -> TARGET'", min(len(w), 5))
                a = self.name(line, 1)
                if a in arrows:
                    self.error(line, f"duplicate arrow {a!r}", 1)
                arrows[a] = (self.name(line, 3), self.name(line, 5))
                where[a] = line
            elif key == "identity":
                w = line.words
                if len(w) != 4 or w[2] != "=":
                    self.error(line, "expected 'identity OBJECT = ARROW'", min(len(w), 3))
                ids[self.name(line, 1)] = self.name(line, 3)
            elif key == "compose":
                w = line.words
                if len(w) != 6 or w[2] != "." or w[4] != "=":
                    self.error(line, "expected 'compose G . F = H'", min(len(w), 5))
                comp[(self.name(line, 1), self.name(line, 3))] = self.name(line, 5)
            else:
                self.error(line, f"unknown category line {key!r}")
        obj_set = set(objects)
        for a, (s, t) in arrows.items():
            for o, i in ((s, 3), (t, 5)):
                if o not in obj_set:
                    raise UnresolvedName(f"unknown object {o!r}", where[a].number, where[a].col(i))
        try:
            self.doc.categories[name] = category(objects, arrows, comp, ids, name)
        except PreconditionError as exc:
            raise ParseError(str(exc), header.number) from None

    def functor(self, header: _Line):
        w = _split_colon(header, 1)
        if len(w) != 6 or w[2] != ":" or w[4] != "->":
            self.error(header, "expected 'functor NAME: DOMAIN -> CODOMAIN'", min(len(w), 5))
        name = self.fresh(header, 1)
        dom = self.ref(self.doc.categories, "category", header, 3)
        cod = self.ref(self.doc.categories, "category", header, 5)
        on_obj: dict[str, str] = {}
        on_arr: dict[str, str] = {}
        for line in self.body(header):
            key = line.words[0]
            if key not in ("object", "arrow"):
                self.error(line, f"unknown functor line {key!r}")
            self.expect_len(line, 4)
            self.expect_word(line, 2, "->")
            src, tgt = self.name(line, 1), self.name(line, 3)
            if key == "object":
                if src not in dom.object_set:
                    raise UnresolvedName(f"unknown object {src!r} of {dom.name}", line.number, line.col(1))
                if tgt not in cod.object_set:
                    raise UnresolvedName(f"unknown object {tgt!r} of {cod.name}", line.number, line.col(3))
                on_obj[src] = tgt
            else:
                if src not in dom.arrows:
                    raise UnresolvedName(f"unknown arrow {src!r} of {dom.name}", line.number, line.col(1))
                if tgt not in cod.arrows:
                    raise UnresolvedName(f"unknown arrow {tgt!r} of {cod.name}", line.number, line.col(3))
                on_arr[src] = tgt
        for o, i in dom.identities.items():
            if o in on_obj and i not in on_arr:
                on_arr[i] = cod.identities[on_obj[o]]
        self.doc.functors[name] = Functor(dom, cod, on_obj, on_arr, name)

    def _keyed(self, header: _Line, keys: dict[str, str]) -> tuple[dict[str, tuple[str, _Line]], list[_Line]]:
        """Collect ``key value`` lines; ``keys`` maps aliases to canonical keys."""
        found: dict[str, tuple[str, _Line]] = {}
        rest: list[_Line] = []
        for line in self.body(header):
            key = line.words[0]
            if key in keys:
                self.expect_len(line, 2)
                canon = keys[key]
                if canon in found:
                    self.error(line, f"repeated key {key!r}")
                found[canon] = (line.words[1], line)
            else:
                rest.append(line)
        return found, rest

    def lens(self, header: _Line):
        self.expect_len(header, 2)
        name = self.fresh(header, 1)
        aliases = {"S": "S", "source": "S", "V": "V", "view": "V", "Lambda": "Lambda", "apex": "Lambda",
                   "F": "F", "lift": "F", "P": "P", "put": "P", "G": "G", "get": "G"}
        found, rest = self._keyed(header, aliases)

        def get(key: str, table: dict, kind: str):
            if key not in found:
                self.error(header, f"lens {name} is missing {key}")
            return self.ref(table, kind, found[key][1], 1)

        s_cat = get("S", self.doc.categories, "category")
        v_cat = get("V", self.doc.categories, "category")
        g = get("G", self.doc.functors, "functor")
        if "Lambda" in found or "F" in found or "P" in found:
            for line in rest:
                self.error(line, f"unknown lens line {line.words[0]!r}")
            apex = get("Lambda", self.doc.categories, "category")
            f = get("F", self.doc.functors, "functor")
            p = get("P", self.doc.functors, "functor")
            self.doc.lenses[name] = AsymmetricLens(s_cat, v_cat, apex, f, p, g, name)
            return
        rules: dict[tuple[str, str], str] = {}
        for line in rest:
            if line.words[0] != "rule":
                self.error(line, f"unknown lens line {line.words[0]!r}")
            self.expect_len(line, 5)
            self.expect_word(line, 3, "=")
            rules[(self.name(line, 1), self.name(line, 2))] = self.name(line, 4)

        def rule(s, alpha):
            if (s, alpha) in rules:
                return rules[(s, alpha)]
            if v_cat.is_identity(alpha):
                return s_cat.identities[s]
            raise PreconditionError(f"lens {name} has no put rule for ({s}, {alpha})")

        try:
            self.doc.lenses[name] = lens_from_put(s_cat, v_cat, g, rule, name)
            self.doc.rule_lenses.add(name)
        except PreconditionError as exc:
            raise UnresolvedName(str(exc), header.number) from None

    def cospan(self, header: _Line):
        self.expect_len(header, 2)
        name = self.fresh(header, 1)
        found, rest = self._keyed(header, {"left": "left", "right": "right"})
        for line in rest:
            self.error(line, f"unknown cospan line {line.words[0]!r}")
        for key in ("left", "right"):
            if key not in found:
                self.error(header, f"cospan {name} is missing {key}")
        left = self.ref(self.doc.lenses, "lens", found["left"][1], 1)
        right = self.ref(self.doc.lenses, "lens", found["right"][1], 1)
        try:
            self.doc.cospans[name] = LensCospan(left, right)
        except PreconditionError as exc:
            raise UnresolvedName(str(exc), header.number) from None

    def multilens(self, header: _Line):
        self.expect_len(header, 2)
        name = self.fresh(header, 1)
        peak = None
        legs = []
        for line in self.body(header):
            key = line.words[0]
            self.expect_len(line, 2)
            if key == "peak":
                peak = self.ref(self.doc.categories, "category", line, 1)
            elif key == "leg":
                legs.append(self.ref(self.doc.lenses, "lens", line, 1))
            else:
                self.error(line, f"unknown multilens line {key!r}")
        if not legs:
            self.error(header, f"multilens {name} has no legs")
        try:
            self.doc.multilenses[name] = Multilens(peak if peak is not None else legs[0].source, legs)
        except PreconditionError as exc:
            raise UnresolvedName(str(exc), header.number) from None

    def scenario(self, header: _Line):
        self.expect_len(header, 2)
        name = self.fresh(header, 1)
        fields: dict = {}
        keys = {"frames": "frames", "y": "ys", "z": "zs", "locations": "locations"}
        for line in self.body(header):
            key = line.words[0]
            if key in keys:
                fields[keys[key]] = tuple(line.words[1:])
            elif key == "warehouse":
                self.expect_len(line, 2)
                fields["warehouse"] = line.words[1]
            elif key == "max-states":
                self.expect_len(line, 2)
                try:
                    fields["max_states"] = int(line.words[1])
                except ValueError:
                    self.error(line, "max-states needs an integer", 1)
            else:
                self.error(line, f"unknown scenario line {key!r}")
        try:
            self.doc.scenarios[name] = ScenarioConfig(**fields)
        except PreconditionError as exc:
            raise ParseError(str(exc), header.number) from None


def parse(text: str) -> LensDocument:
    return _Parser(text).parse()


# -- serialisation -------------------------------------------------------------

def _valid_token(n: str) -> bool:
    return bool(n) and n not in _RESERVED and not any(c.isspace() for c in n) and "#" not in n


def _writable(ids, what: str) -> None:
    for n in ids:
        if not _valid_token(n) or n.endswith(":"):
            raise PreconditionError(f"{what} id {n!r} cannot be written in the LENS format")


class Serializer:
    """Collects blocks in dependency order and renders them.

    ``names`` pins the names of known objects; anything else reuses its own
    name when that is free, or gets a fresh name derived from a hint.
    """

    def __init__(self, names: dict[int, str] | None = None):
        self.blocks: list[str] = []
        self.pinned = dict(names or {})
        self.ids: dict[int, str] = {}
        self.used: set[str] = set(self.pinned.values())
        self._keep: list = []

    def _name(self, obj, preferred: str, hint: str) -> str:
        if id(obj) in self.pinned:
            cand = self.pinned[id(obj)]
        else:
            for cand in (preferred, hint):
                if _valid_token(cand) and cand not in self.used:
                    break
            else:
                base = hint if _valid_token(hint) else "block"
                k = 2
                while f"{base}{k}" in self.used:
                    k += 1
                cand = f"{base}{k}"
        self.used.add(cand)
        self.ids[id(obj)] = cand
        self._keep.append(obj)
        return cand

    def known(self, obj) -> str | None:
        return self.ids.get(id(obj))

    def category(self, c: FinCategory, hint: str = "C") -> str:
        if (n := self.known(c)) is not None:
            return n
        _writable(c.objects, "object")
        _writable(c.arrows, "arrow")
        name = self._name(c, c.name, hint)
        lines = [f"category {name}"]
        if c.objects:
            lines.append("  object " + " ".join(sorted(c.objects)))
        for o in sorted(c.objects):
            if c.identities[o] != f"1_{o}":
                lines.append(f"  identity {o} = {c.identities[o]}")
        ident = set(c.identities.values())
        for a in sorted(c.arrows):
            if a not in ident:
                s, t = c.arrows[a]
                lines.append(f"  arrow {a}: {s} -> {t}")
        comps = sorted((g, f, h) for (g, f), h in c.compose.items() if g not in ident and f not in ident)
        for g, f, h in comps:
            lines.append(f"  compose {g} . {f} = {h}")
        lines.append("end")
        self.blocks.append("\n".join(lines))
        return name

    def functor(self, fn: Functor, hint: str = "F") -> str:
        if (n := self.known(fn)) is not None:
            return n
        dom = self.category(fn.domain, f"{hint}.dom")
        cod = self.category(fn.codomain, f"{hint}.cod")
        name = self._name(fn, fn.name, hint)
        lines = [f"functor {name}: {dom} -> {cod}"]
        for o in sorted(fn.on_objects):
            lines.append(f"  object {o} -> {fn.on_objects[o]}")
        for a in sorted(fn.on_arrows):
            b = fn.on_arrows[a]
            s = fn.domain.arrows[a][0]
            if fn.domain.identities.get(s) == a and fn.codomain.identities.get(fn.on_objects.get(s)) == b:
                continue
            lines.append(f"  arrow {a} -> {b}")
        lines.append("end")
        self.blocks.append("\n".join(lines))
        return name

    def lens(self, l: AsymmetricLens, hint: str = "L") -> str:
        if (n := self.known(l)) is not None:
            return n
        s = self.category(l.source, f"{hint}.S")
        v = self.category(l.view, f"{hint}.V")
        apex = self.category(l.apex, f"{hint}.Lambda")
        f = self.functor(l.view_leg, f"{hint}.F")
        p = self.functor(l.source_leg, f"{hint}.P")
        g = self.functor(l.get, f"{hint}.G")
        name = self._name(l, l.name, hint)
        self.blocks.append("\n".join([
            f"lens {name}", f"  S {s}", f"  V {v}", f"  Lambda {apex}",
            f"  F {f}", f"  P {p}", f"  G {g}", "end"]))
        return name

    def rule_lens(self, l: AsymmetricLens, hint: str = "L") -> str:
        """Write a lens as Get plus put rules for its non-identity inputs."""
        if (n := self.known(l)) is not None:
            return n
        s = self.category(l.source, f"{hint}.S")
        v = self.category(l.view, f"{hint}.V")
        g = self.functor(l.get, f"{hint}.G")
        name = self._name(l, l.name, hint)
        lines = [f"lens {name}", f"  S {s}", f"  V {v}", f"  G {g}"]
        for src, alpha in sorted(put_inputs(l)):
            if not l.view.is_identity(alpha):
                lines.append(f"  rule {src} {alpha} = {put(l, src, alpha)}")
        lines.append("end")
        self.blocks.append("\n".join(lines))
        return name

    def cospan(self, c: LensCospan, name: str) -> str:
        left = self.lens(c.left, f"{name}.left")
        right = self.lens(c.right, f"{name}.right")
        name = self._name(c, name, name)
        self.blocks.append(f"cospan {name}\n  left {left}\n  right {right}\nend")
        return name

    def multilens(self, m: Multilens, name: str) -> str:
        if (n := self.known(m)) is not None:
            return n
        peak = self.category(m.peak, f"{name}.peak")
        legs = [self.lens(leg, f"{name}.leg{i}") for i, leg in enumerate(m.legs, 1)]
        name = self._name(m, name, name)
        body = [f"multilens {name}", f"  peak {peak}"] + [f"  leg {x}" for x in legs] + ["end"]
        self.blocks.append("\n".join(body))
        return name

    def scenario(self, cfg: ScenarioConfig, name: str) -> str:
        name = self._name(cfg, name, name)
        self.blocks.append("\n".join([
            f"scenario {name}",
            "  frames " + " ".join(cfg.frames),
            "  y " + " ".join(cfg.ys),
            "  z " + " ".join(cfg.zs),
            "  locations " + " ".join(cfg.locations),
            f"  warehouse {cfg.warehouse}",
            f"  max-states {cfg.max_states}",
            "end"]))
        return name

    def text(self) -> str:
        return "\n\n".join(self.blocks) + ("\n" if self.blocks else "")


def serialize(doc: LensDocument) -> str:
    """Render a document deterministically; dependencies come before their users."""
    tables = (doc.categories, doc.functors, doc.lenses, doc.cospans, doc.multilenses, doc.scenarios)
    out = Serializer({id(v): n for table in tables for n, v in table.items()})
    for n in sorted(doc.categories):
        out.category(doc.categories[n], n)
    for n in sorted(doc.functors):
        out.functor(doc.functors[n], n)
    for n in sorted(doc.lenses):
        if n in doc.rule_lenses:
            out.rule_lens(doc.lenses[n], n)
        else:
            out.lens(doc.lenses[n], n)
    for n in sorted(doc.cospans):
        out.cospan(doc.cospans[n], n)
    for n in sorted(doc.multilenses):
        out.multilens(doc.multilenses[n], n)
    for n in sorted(doc.scenarios):
        out.scenario(doc.scenarios[n], n)
    return out.text()
