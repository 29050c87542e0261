"""The supply-chain example: ABC Frames, XYZ Warehouse and XYZ Logistics.

Three business systems share data through two cospans of lenses::

    ABC --> X <-- Warehouse --> Orders <-- Logistics

Every state space is a category of partial-identity deltas over bounded
universes of frame, Y and Z ids.  The encodings:

* an ABC state is a set of ``frame@location`` records;
* an X state is a set of frame ids;
* a Warehouse state is a frame set ``X`` with a monic order set
  ``orders`` of ``frame/y/z`` triples over ``X``;
* Orders and Logistics states are a catalogue ``X x Y x Z`` with an order
  (assembly) subset of it.

Y and Z are the whole configured universes in every state, so the catalogue
determines ``X``.  A frame can be deleted with its orders but an order can
only survive a delta if its frame does.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian

from .deltas import DeltaCategory, delta_category, subsets
from .errors import BoundExceeded, LensError, ParseError, PreconditionError
from .fincat import Functor, WideSpan, pullback, validate_category
from .lens import AsymmetricLens, count_law_checks, lens_from_put, put_law_violations, validate_lens
from .multilens import LensCospan, Multilens, fuse_zigzag, validate_multilens
from .propagate import (
    PropagationTrace,
    SyncPair,
    backward_cospan,
    forward_cospan,
    propagations_agree,
    synchronized_cospan,
)

WAREHOUSE = "XYZ-Warehouse"
_FORBIDDEN = set(" \t,()[]{};|/@=#<>:+!*")

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class ScenarioConfig:
    frames: tuple[str, ...] = ("f1", "f2", "f3")
    ys: tuple[str, ...] = ("y1", "y2")
    zs: tuple[str, ...] = ("z1", "z2")
    locations: tuple[str, ...] = (WAREHOUSE, "Depot")
    warehouse: str = WAREHOUSE
    max_states: int = 500

    def __post_init__(self):
        for label in ("frames", "ys", "zs", "locations"):
            ids = tuple(getattr(self, label))
            object.__setattr__(self, label, ids)
            if not ids:
                raise PreconditionError(f"universe {label} must be non-empty")
            if len(set(ids)) != len(ids):
                raise PreconditionError(f"universe {label} has repeated ids")
            for i in ids:
                if not i or _FORBIDDEN & set(i):
                    raise PreconditionError(f"id {i!r} in {label} contains a reserved character")
        if self.warehouse not in self.locations:
            raise PreconditionError(f"locations must include the warehouse {self.warehouse}")

    @classmethod
    def minimal(cls) -> ScenarioConfig:
        return cls(frames=("f1",), ys=("y1",), zs=("z1",))

    @classmethod
    def small(cls) -> ScenarioConfig:
        return cls(frames=("f1", "f2"))


def triple_name(t: Triple) -> str:
    return "/".join(t)


def _join(items: Iterable[str]) -> str:
    return ";".join(sorted(items))


def abc_name(records: Iterable[tuple[str, str]]) -> str:
    return "abc{" + _join(f"{f}@{l}" for f, l in records) + "}"


def x_name(frames: Iterable[str]) -> str:
    return "x{" + _join(frames) + "}"


def wh_name(frames: Iterable[str], orders: Iterable[Triple]) -> str:
    return "wh{" + _join(frames) + "|" + _join(map(triple_name, orders)) + "}"


def _catalogue(cfg: ScenarioConfig, frames: Iterable[str]) -> list[Triple]:
    return list(cartesian(sorted(frames), cfg.ys, cfg.zs))


def ord_name(cfg: ScenarioConfig, frames: Iterable[str], orders: Iterable[Triple]) -> str:
    return "ord{" + _join(map(triple_name, _catalogue(cfg, frames))) + "|" + _join(map(triple_name, orders)) + "}"


def log_name(cfg: ScenarioConfig, frames: Iterable[str], assembly: Iterable[Triple]) -> str:
    return "log{" + _join(map(triple_name, _catalogue(cfg, frames))) + "|" + _join(map(triple_name, assembly)) + "}"


def is_monic(orders: Iterable[Triple]) -> bool:
    """Each frame, Y and Z occurs in at most one order."""
    orders = list(orders)
    return all(len({o[k] for o in orders}) == len(orders) for k in range(3))


def monic_order_sets(cfg: ScenarioConfig, frames: Iterable[str]) -> list[frozenset[Triple]]:
    out: list[frozenset[Triple]] = []

    def grow(rest: list[Triple], chosen: list[Triple]):
        if not rest:
            out.append(frozenset(chosen))
            return
        head, tail = rest[0], rest[1:]
        grow(tail, chosen)
        if all(head[k] != c[k] for c in chosen for k in range(3)):
            grow(tail, chosen + [head])

    grow(_catalogue(cfg, frames), [])
    return out


# -- systems ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class System:
    """A delta category with the decoded content of every state."""
    label: str
    deltas: DeltaCategory
    content: dict  # state name -> decoded state

    @property
    def category(self):
        return self.deltas.category


def _guard(cfg: ScenarioConfig, label: str, count: int) -> None:
    if count > cfg.max_states:
        raise BoundExceeded(f"{label} has {count} states, more than the bound {cfg.max_states}")


def _abc_system(cfg: ScenarioConfig) -> System:
    records = list(cartesian(cfg.frames, cfg.locations))
    _guard(cfg, "ABC", 2 ** len(records))
    content = {abc_name(r): frozenset(r) for r in subsets_of(records)}
    states = {n: {f"{f}@{l}" for f, l in r} for n, r in content.items()}
    return System("ABC", delta_category(states, name="ABC"), content)


def subsets_of(items: list) -> Iterator[frozenset]:
    for mask in range(2 ** len(items)):
        yield frozenset(x for i, x in enumerate(items) if mask >> i & 1)


def _x_system(cfg: ScenarioConfig) -> System:
    _guard(cfg, "X", 2 ** len(cfg.frames))
    content = {x_name(s): s for s in subsets(cfg.frames)}
    return System("X", delta_category(content, name="X"), content)


def _order_states(cfg: ScenarioConfig, label: str) -> list[tuple[frozenset[str], frozenset[Triple]]]:
    out = []
    for xs in subsets(cfg.frames):
        for orders in monic_order_sets(cfg, xs):
            out.append((xs, orders))
            _guard(cfg, label, len(out))
    return out


def _kept_for_orders(content, order_tag: str, frame_elements):
    """Admissible kept sets: kept frames, and orders whose frame is kept."""
    def kept_options(s, t):
        (x1, o1), (x2, o2) = content[s], content[t]
        out = []
        for kx in subsets(x1 & x2):
            shared = sorted(o for o in o1 & o2 if o[0] in kx)
            base = set()
            for f in kx:
                base |= frame_elements(f)
            for ko in subsets_of(shared):
                out.append(base | {order_tag + triple_name(o) for o in ko})
        return out
    return kept_options


def _wh_system(cfg: ScenarioConfig) -> System:
    content = {wh_name(x, o): (x, o) for x, o in _order_states(cfg, "Warehouse")}
    states = {n: set(x) | {triple_name(o) for o in os} for n, (x, os) in content.items()}
    dc = delta_category(states, _kept_for_orders(content, "", lambda f: {f}), name="Warehouse")
    return System("Warehouse", dc, content)


def _catalogued_system(cfg: ScenarioConfig, label: str, namer, order_tag: str) -> System:
    content = {namer(cfg, x, o): (x, o) for x, o in _order_states(cfg, label)}

    def frame_elements(f):
        return {"c:" + triple_name(t) for t in _catalogue(cfg, [f])}

    states = {}
    for n, (x, os) in content.items():
        cat = set()
        for f in x:
            cat |= frame_elements(f)
        states[n] = cat | {order_tag + triple_name(o) for o in os}
    dc = delta_category(states, _kept_for_orders(content, order_tag, frame_elements), name=label)
    return System(label, dc, content)


def _orders_system(cfg):
    return _catalogued_system(cfg, "Orders", ord_name, "o:")


def _logistics_system(cfg):
    return _catalogued_system(cfg, "Logistics", log_name, "a:")


# -- lenses ----------------------------------------------------------------

def _get_functor(src: System, view: System, on_state, on_kept) -> Functor:
    on_obj = {n: on_state(c) for n, c in src.content.items()}
    on_arr = {}
    for a, d in src.deltas.deltas.items():
        on_arr[a] = view.deltas.arrow(on_obj[d.source], on_obj[d.target], on_kept(d.kept))
    return Functor(src.category, view.category, on_obj, on_arr, "G")


def _abc_to_x(cfg, abc: System, x: System, check: bool) -> AsymmetricLens:
    w = cfg.warehouse
    suffix = "@" + w

    def on_kept(kept):
        return {r[:-len(suffix)] for r in kept if r.endswith(suffix)}

    get = _get_functor(abc, x, lambda recs: x_name(f for f, l in recs if l == w), on_kept)

    def put_rule(s, alpha):
        d = x.deltas.delta(alpha)
        elsewhere = {(f, l) for f, l in abc.content[s] if l != w}
        target = abc_name(elsewhere | {(f, w) for f in x.content[d.target]})
        kept = {f + suffix for f in d.kept} | {f"{f}@{l}" for f, l in elsewhere}
        return abc.deltas.arrow(s, target, kept)

    return lens_from_put(abc.category, x.category, get, put_rule, "ABC->X", check)


def _wh_to_x(cfg, wh: System, x: System, check: bool) -> AsymmetricLens:
    frames = set(cfg.frames)
    get = _get_functor(wh, x, lambda c: x_name(c[0]), lambda kept: {e for e in kept if e in frames})

    def put_rule(s, alpha):
        d = x.deltas.delta(alpha)
        _, orders = wh.content[s]
        survivors = {o for o in orders if o[0] in d.kept}  # cascading delete
        target = wh_name(x.content[d.target], survivors)
        return wh.deltas.arrow(s, target, set(d.kept) | {triple_name(o) for o in survivors})

    return lens_from_put(wh.category, x.category, get, put_rule, "Warehouse->X", check)


def _iso_to_orders(cfg, src: System, orders: System, src_tag: str, label: str,
                   check: bool) -> AsymmetricLens:
    """The Orders view of a system holding the same data under other names."""
    if src_tag:
        def forward(kept):
            return {"o:" + e[len(src_tag):] if e.startswith(src_tag) else e for e in kept}

        def back(kept):
            return {src_tag + e[2:] if e.startswith("o:") else e for e in kept}
    else:
        frames = set(cfg.frames)

        def forward(kept):
            out = set()
            for e in kept:
                if e in frames:
                    out |= {"c:" + triple_name(t) for t in _catalogue(cfg, [e])}
                else:
                    out.add("o:" + e)
            return out

        def back(kept):
            return {e[2:].split("/")[0] if e.startswith("c:") else e[2:] for e in kept}

    by_content = {c: n for n, c in src.content.items()}
    get = _get_functor(src, orders, lambda c: ord_name(cfg, *c), forward)

    def put_rule(s, alpha):
        d = orders.deltas.delta(alpha)
        return src.deltas.arrow(s, by_content[orders.content[d.target]], back(d.kept))

    return lens_from_put(src.category, orders.category, get, put_rule, label, check)


@dataclass(frozen=True, eq=False)
class SupplyChain:
    cfg: ScenarioConfig
    abc: System
    x: System
    wh: System
    orders: System
    log: System
    abc_to_x: AsymmetricLens
    wh_to_x: AsymmetricLens
    wh_to_orders: AsymmetricLens
    log_to_orders: AsymmetricLens

    @property
    def abc_wh(self) -> LensCospan:
        return LensCospan(self.abc_to_x, self.wh_to_x)

    @property
    def wh_log(self) -> LensCospan:
        return LensCospan(self.wh_to_orders, self.log_to_orders)

    @property
    def lenses(self) -> tuple[AsymmetricLens, ...]:
        return (self.abc_to_x, self.wh_to_x, self.wh_to_orders, self.log_to_orders)

    @property
    def systems(self) -> tuple[System, ...]:
        return (self.abc, self.x, self.wh, self.orders, self.log)


@lru_cache(maxsize=8)
def supply_chain(cfg: ScenarioConfig, check: bool = False) -> SupplyChain:
    """Build every system and lens.  ``check`` verifies each Put rule on construction."""
    abc, x, wh = _abc_system(cfg), _x_system(cfg), _wh_system(cfg)
    orders, log = _orders_system(cfg), _logistics_system(cfg)
    return SupplyChain(
        cfg, abc, x, wh, orders, log,
        _abc_to_x(cfg, abc, x, check),
        _wh_to_x(cfg, wh, x, check),
        _iso_to_orders(cfg, wh, orders, "", "Warehouse->Orders", check),
        _iso_to_orders(cfg, log, orders, "a:", "Logistics->Orders", check),
    )


def build_abc_category(cfg: ScenarioConfig):
    return _abc_system(cfg).category


def build_x_foot(cfg: ScenarioConfig):
    return _x_system(cfg).category


def build_warehouse_category(cfg: ScenarioConfig):
    return _wh_system(cfg).category


def build_orders_foot(cfg: ScenarioConfig):
    return _orders_system(cfg).category


def build_logistics_category(cfg: ScenarioConfig):
    return _logistics_system(cfg).category


def abc_to_x_lens(cfg: ScenarioConfig, check: bool = True) -> AsymmetricLens:
    return supply_chain(cfg, check).abc_to_x


def warehouse_to_x_lens(cfg: ScenarioConfig, check: bool = True) -> AsymmetricLens:
    return supply_chain(cfg, check).wh_to_x


def warehouse_to_orders_lens(cfg: ScenarioConfig, check: bool = True) -> AsymmetricLens:
    return supply_chain(cfg, check).wh_to_orders


def logistics_to_orders_lens(cfg: ScenarioConfig, check: bool = True) -> AsymmetricLens:
    return supply_chain(cfg, check).log_to_orders


def build_supply_chain_5lens(cfg: ScenarioConfig, check: bool = True) -> Multilens:
    """Legs in order: ABC, X, Warehouse, Orders, Logistics."""
    chain = supply_chain(cfg, check)
    return fuse_zigzag([chain.abc_wh, chain.wh_log], check)


def iterated_pullback_spans(chain: SupplyChain) -> tuple[WideSpan, WideSpan]:
    """The limit of the zig-zag by pulling back in each association order.

    Legs run to ABC, X, Warehouse, Orders and Logistics.
    """
    ax, wx, wo, lo = chain.lenses
    # (ABC x_X Warehouse) x_Orders Logistics
    p1 = pullback(ax.get, wx.get)
    p1o = pullback(p1.right.then(wo.get), lo.get)
    l1, r1 = p1o.left, p1o.right
    left = WideSpan(p1o.category, (
        l1.then(p1.left), l1.then(p1.left).then(ax.get), l1.then(p1.right),
        r1.then(lo.get), r1))
    # ABC x_X (Warehouse x_Orders Logistics)
    p2 = pullback(wo.get, lo.get)
    p2x = pullback(ax.get, p2.left.then(wx.get))
    l2, r2 = p2x.left, p2x.right
    right = WideSpan(p2x.category, (
        l2, l2.then(ax.get), r2.then(p2.left), r2.then(p2.right).then(lo.get), r2.then(p2.right)))
    return left, right


# -- business commands -------------------------------------------------------

class CommandRejected(LensError):
    """A business command was refused; the world is unchanged."""

    def __init__(self, reason: str):
        super().__init__(f"rejected: {reason}")
        self.reason = reason


@dataclass(frozen=True)
class World:
    """The current synchronised states of the three business systems."""
    chain: SupplyChain = field(compare=False, repr=False)
    abc: str
    wh: str
    log: str

    @property
    def peak(self) -> str:
        """The 5-lens peak object holding these states."""
        return f"(({self.abc},{self.wh}),({self.wh},{self.log}))"

    def synchronized(self) -> tuple[bool, bool]:
        return (synchronized_cospan(self.chain.abc_wh, self.abc, self.wh),
                synchronized_cospan(self.chain.wh_log, self.wh, self.log))


def initial_world(chain: SupplyChain) -> World:
    return World(chain, abc_name([]), wh_name([], []), log_name(chain.cfg, [], []))


def _known(cfg: ScenarioConfig, frame=None, location=None, y=None, z=None):
    if ((frame is not None and frame not in cfg.frames)
            or (location is not None and location not in cfg.locations)
            or (y is not None and y not in cfg.ys)
            or (z is not None and z not in cfg.zs)):
        raise CommandRejected("unknown id")


def _from_abc(world: World, alpha: str) -> tuple[World, list[PropagationTrace]]:
    c1, c2 = world.chain.abc_wh, world.chain.wh_log
    t1 = forward_cospan(c1, SyncPair(world.abc, world.wh), alpha)
    t2 = forward_cospan(c2, SyncPair(world.wh, world.log), t1.output_delta)
    return World(world.chain, t1.result.left, t1.result.right, t2.result.right), [t1, t2]


def _from_logistics(world: World, alpha: str) -> tuple[World, list[PropagationTrace]]:
    c1, c2 = world.chain.abc_wh, world.chain.wh_log
    t2 = backward_cospan(c2, SyncPair(world.wh, world.log), alpha)
    t1 = backward_cospan(c1, SyncPair(world.abc, world.wh), t2.output_delta)
    return World(world.chain, t1.result.left, t2.result.left, t2.result.right), [t2, t1]


def command_add_frame(world: World, frame: str, location: str):
    """ABC records a new frame; the Warehouse learns of it if it is stored there."""
    chain = world.chain
    _known(chain.cfg, frame=frame, location=location)
    records = chain.abc.content[world.abc]
    if any(f == frame for f, _ in records):
        raise CommandRejected("duplicate frame")
    target = abc_name(records | {(frame, location)})
    alpha = chain.abc.deltas.arrow(world.abc, target, chain.abc.deltas.elements[world.abc])
    return _from_abc(world, alpha)


def command_remove_frame(world: World, frame: str):
    """ABC deletes a frame; orders using it are deleted downstream."""
    chain = world.chain
    _known(chain.cfg, frame=frame)
    records = chain.abc.content[world.abc]
    if not any(f == frame for f, _ in records):
        raise CommandRejected("not present")
    rest = {(f, l) for f, l in records if f != frame}
    alpha = chain.abc.deltas.arrow(world.abc, abc_name(rest), {f"{f}@{l}" for f, l in rest})
    return _from_abc(world, alpha)


def _assembly_delta(world: World, assembly: frozenset[Triple]) -> str:
    chain = world.chain
    frames, _ = chain.log.content[world.log]
    target = log_name(chain.cfg, frames, assembly)
    if target not in chain.log.content:
        raise CommandRejected("monic constraint")
    kept = chain.log.deltas.elements[world.log] & chain.log.deltas.elements[target]
    return chain.log.deltas.arrow(world.log, target, kept)


def command_place_order(world: World, triple: Triple):
    """Logistics adds an assembly; the Warehouse copies it into its orders."""
    chain = world.chain
    f, y, z = triple
    _known(chain.cfg, frame=f, y=y, z=z)
    frames, assembly = chain.log.content[world.log]
    if f not in frames:
        raise CommandRejected("not in catalogue")
    if triple in assembly:
        raise CommandRejected("already ordered")
    if not is_monic(assembly | {triple}):
        raise CommandRejected("monic constraint")
    return _from_logistics(world, _assembly_delta(world, assembly | {triple}))


def command_cancel_order(world: World, triple: Triple):
    chain = world.chain
    f, y, z = triple
    _known(chain.cfg, frame=f, y=y, z=z)
    _, assembly = chain.log.content[world.log]
    if triple not in assembly:
        raise CommandRejected("not present")
    return _from_logistics(world, _assembly_delta(world, assembly - {triple}))


def command_edit_catalogue(world: World, *args: str):
    """Logistics may only read the catalogue."""
    raise CommandRejected("half-duplex")


# -- scripts and traces --------------------------------------------------------

@dataclass(frozen=True)
class Command:
    name: str
    args: tuple[str, ...]
    line: int


_ARITY = {"add-frame": 2, "remove-frame": 1, "place-order": 3, "cancel-order": 3}


def parse_script(text: str) -> list[Command]:
    """One command per line; ``#`` starts a comment."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        name, args = words[0], tuple(words[1:])
        if name == "edit-catalogue":
            out.append(Command(name, args, n))
            continue
        if name not in _ARITY:
            raise ParseError(f"unknown command {name!r}", n, raw.index(name) + 1)
        if len(args) != _ARITY[name]:
            raise ParseError(f"{name} takes {_ARITY[name]} arguments, got {len(args)}", n)
        out.append(Command(name, args, n))
    return out


def apply_command(world: World, cmd: Command):
    if cmd.name == "add-frame":
        return command_add_frame(world, *cmd.args)
    if cmd.name == "remove-frame":
        return command_remove_frame(world, *cmd.args)
    if cmd.name == "place-order":
        return command_place_order(world, tuple(cmd.args))
    if cmd.name == "cancel-order":
        return command_cancel_order(world, tuple(cmd.args))
    if cmd.name == "edit-catalogue":
        return command_edit_catalogue(world, *cmd.args)
    raise PreconditionError(f"unknown command {cmd.name!r}")


@dataclass(frozen=True)
class TraceRecord:
    command: Command
    origin: str | None
    traces: tuple[PropagationTrace, ...]
    rejected: str | None
    world: World
    synchronized: tuple[bool, bool]


def run_script(chain: SupplyChain, commands: Iterable[Command],
               world: World | None = None) -> list[TraceRecord]:
    """Apply commands one at a time, recording rejections instead of stopping."""
    world = world or initial_world(chain)
    records = []
    for cmd in commands:
        try:
            new_world, traces = apply_command(world, cmd)
        except CommandRejected as exc:
            records.append(TraceRecord(cmd, None, (), exc.reason, world, world.synchronized()))
            continue
        world = new_world
        records.append(TraceRecord(cmd, traces[0].input_delta, tuple(traces), None,
                                   world, world.synchronized()))
    return records


def describe_delta(system: System, arrow: str) -> str:
    dc = system.deltas
    d = dc.delta(arrow)
    changes = [f"+{e}" for e in sorted(dc.inserted(arrow))] + [f"-{e}" for e in sorted(dc.deleted(arrow))]
    return f"{d.source} -> {d.target} [{' '.join(changes) or 'identity'}]"


def render_trace(chain: SupplyChain, records: list[TraceRecord]) -> str:
    cfg = chain.cfg
    lines = [
        "# supply-chain trace",
        f"config frames={';'.join(cfg.frames)} y={';'.join(cfg.ys)} z={';'.join(cfg.zs)} "
        f"locations={';'.join(cfg.locations)} warehouse={cfg.warehouse}",
    ]
    start = initial_world(chain)
    lines.append(f"start abc={start.abc} wh={start.wh} log={start.log}")
    cospans = {
        ("forward", "X"): ("ABC/Warehouse forward", chain.x, chain.wh),
        ("backward", "X"): ("ABC/Warehouse backward", chain.x, chain.abc),
        ("forward", "Orders"): ("Warehouse/Logistics forward", chain.orders, chain.log),
        ("backward", "Orders"): ("Warehouse/Logistics backward", chain.orders, chain.wh),
    }
    for i, rec in enumerate(records, 1):
        lines.append("")
        lines.append(f"[{i}] {' '.join((rec.command.name,) + rec.command.args)}")
        if rec.rejected is not None:
            lines.append(f"  rejected: {rec.rejected}")
            lines.append("  world: unchanged")
        else:
            origin_sys = chain.abc if rec.command.name.endswith("frame") else chain.log
            lines.append(f"  origin {origin_sys.label}: {describe_delta(origin_sys, rec.origin)}")
            for t in rec.traces:
                trough_sys = chain.x if t.intermediate in chain.x.category.arrows else chain.orders
                title, _, out_sys = cospans[(t.direction, trough_sys.label)]
                lines.append(f"  cospan {title}")
                lines.append(f"    trough {trough_sys.label}: {describe_delta(trough_sys, t.intermediate)}")
                lines.append(f"    output {out_sys.label}: {describe_delta(out_sys, t.output_delta)}")
            w = rec.world
            lines.append(f"  world: abc={w.abc} wh={w.wh} log={w.log}")
        a, b = rec.synchronized
        lines.append(f"  synchronized: ABC/Warehouse={str(a).lower()} Warehouse/Logistics={str(b).lower()}")
    return "\n".join(lines) + "\n"


# -- invariant suite -----------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def abc_get_oracle_failures(chain: SupplyChain) -> list[str]:
    """Compare the ABC Get with direct filtering by location."""
    w = chain.cfg.warehouse
    get = chain.abc_to_x.get
    bad = []
    for s, recs in chain.abc.content.items():
        want = frozenset(f for f, l in recs if l == w)
        if chain.x.content[get.on_objects[s]] != want:
            bad.append(f"state {s}")
    for a, d in chain.abc.deltas.deltas.items():
        image = chain.x.deltas.delta(get.on_arrows[a])
        want = frozenset(r.split("@")[0] for r in d.kept if r.split("@")[1] == w)
        if image.kept != want:
            bad.append(f"delta {a}")
    return bad


def check_scenario(cfg: ScenarioConfig, bound: int = 10 ** 6) -> list[CheckResult]:
    """Every scenario invariant, exhaustively.

    Raises :class:`BoundExceeded` up front if any category has more than
    ``bound`` composable pairs, and later if a law check would exceed it.
    """
    chain = supply_chain(cfg, False)
    for sys in chain.systems:
        n = sys.category.count_composable_pairs()
        if n > bound:
            raise BoundExceeded(f"{sys.label} has {n} composable pairs, more than the bound {bound}")
    results = []
    for sys in chain.systems:
        problems = validate_category(sys.category)
        results.append(CheckResult(f"category {sys.label}", not problems,
                                   str(problems[0]) if problems else ""))
    for l in chain.lenses:
        problems = validate_lens(l, deep=True)
        results.append(CheckResult(f"lens {l.name}", not problems, str(problems[0]) if problems else ""))
        bad = next(iter(put_law_violations(l, bound)), None)
        results.append(CheckResult(f"put laws {l.name}", bad is None, str(bad) if bad else ""))
    five = build_supply_chain_5lens(cfg, check=True)
    results.append(CheckResult("5-lens legs", len(five) == 5, f"{len(five)} legs"))
    problems = validate_multilens(five)
    results.append(CheckResult("5-lens legs valid", not problems,
                               f"leg {problems[0][0]}: {problems[0][1][0]}" if problems else ""))
    for i, leg in enumerate(five.legs, 1):
        if count_law_checks(leg) > bound:
            raise BoundExceeded(f"5-lens leg {i} needs more than {bound} law checks")
        bad = next(iter(put_law_violations(leg)), None)
        results.append(CheckResult(f"put laws 5-lens leg {i}", bad is None, str(bad) if bad else ""))
    for label, c in (("ABC/Warehouse", chain.abc_wh), ("Warehouse/Logistics", chain.wh_log)):
        ok, report = propagations_agree(c, bound)
        results.append(CheckResult(f"propagations agree {label}", ok,
                                   report.discrepancies[0] if report.discrepancies else f"{report.checks} checks"))
    bad = abc_get_oracle_failures(chain)
    results.append(CheckResult("ABC Get is location filtering", not bad, bad[0] if bad else ""))
    bad_states = [n for n, (_, o) in chain.wh.content.items() if not is_monic(o)]
    results.append(CheckResult("warehouse orders monic", not bad_states, bad_states[0] if bad_states else ""))
    bad_states = [n for n, (x, a) in chain.log.content.items() if any(t[0] not in x for t in a)]
    results.append(CheckResult("assembly within catalogue", not bad_states, bad_states[0] if bad_states else ""))
    return results
