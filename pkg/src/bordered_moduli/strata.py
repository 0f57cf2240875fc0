"""Boundary strata of moduli of marked bordered Riemann surfaces.

A stratum is the isomorphism class of a decorated dual graph.  Each piece is
a component of the normalization, carrying its genus, its boundary circles
(each with a cyclic order of boundary slots) and its interior slots.  A slot
is a marked point or one endpoint of a node:

* ``("q", i, k)`` -- boundary marked point ``q^i_k``
* ``("p", j)`` -- interior marked point ``p_j``
* ``("H", a, side)`` -- endpoint of boundary node ``a``
* ``("N", a, side)`` -- endpoint of interior node ``a``

Every boundary slot also records the B-label of the arc leaving it, i.e. of
the boundary circle that arc belongs to after all boundary nodes are
smoothed.  Circles without slots carry their label directly.

Strata are generated from the smooth surface by single-node degenerations
(interior node, boundary node of type E, H1, H2 or H3) and deduplicated by a
canonical form.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator

from ._canon import ColoredDigraph
from .index import arithmetic_genus as _arithmetic_genus
from .index import moduli_dim, smooth_aut_dim
from .surface_types import ConsistencyError, DomainError, MarkedTopType, TopType

Slot = tuple


class StructuralError(ValueError):
    """A decorated graph violates a structural invariant."""


def _is_h(slot: Slot) -> bool:
    return slot[0] == "H"


def _is_node(slot: Slot) -> bool:
    return slot[0] in ("H", "N")


@dataclass(frozen=True)
class BoundaryCircle:
    cyclic_order: tuple = ()
    arc_labels: tuple = ()
    label: int | None = None
    collapsed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cyclic_order", tuple(tuple(s) for s in self.cyclic_order))
        object.__setattr__(self, "arc_labels", tuple(self.arc_labels))
        if len(self.cyclic_order) != len(self.arc_labels):
            raise StructuralError("every boundary slot needs an arc label")
        if self.collapsed and self.cyclic_order:
            raise StructuralError("a collapsed circle carries no slots")
        if not self.cyclic_order and self.label is None:
            raise StructuralError("a circle without slots needs a B-label")

    def gap_label(self, i: int) -> int:
        """Label of the arc in the gap following slot ``i``."""
        return self.arc_labels[i] if self.cyclic_order else self.label

    def rotated(self, start: int) -> tuple[tuple, tuple]:
        k = len(self.cyclic_order)
        idx = [(start + j) % k for j in range(k)]
        return tuple(self.cyclic_order[j] for j in idx), tuple(self.arc_labels[j] for j in idx)


@dataclass(frozen=True)
class Piece:
    genus: int
    circles: tuple[BoundaryCircle, ...] = ()
    interior: tuple = ()

    def __post_init__(self):
        if self.genus < 0:
            raise StructuralError(f"negative genus {self.genus}")
        object.__setattr__(self, "circles", tuple(self.circles))
        object.__setattr__(self, "interior", tuple(sorted(tuple(s) for s in self.interior)))

    @property
    def kind(self) -> str:
        return "bordered" if self.circles else "closed"

    @property
    def open_circles(self) -> int:
        return sum(1 for c in self.circles if not c.collapsed)

    @property
    def collapsed_circles(self) -> int:
        return sum(1 for c in self.circles if c.collapsed)

    @property
    def interior_special(self) -> int:
        return len(self.interior) + self.collapsed_circles

    @property
    def boundary_special(self) -> int:
        return sum(len(c.cyclic_order) for c in self.circles)

    @property
    def dim(self) -> int:
        return 6 * self.genus + 3 * self.open_circles - 6 + 2 * self.interior_special + self.boundary_special

    @property
    def aut_dim(self) -> int:
        return smooth_aut_dim(self.genus, self.open_circles, self.interior_special, self.boundary_special)

    def slots(self) -> Iterator[Slot]:
        yield from self.interior
        for c in self.circles:
            yield from c.cyclic_order


def is_piece_stable(p: Piece) -> bool:
    # Stability of the complex double: 2 * g_double - 2 + (#special points) > 0.
    return 4 * p.genus + 2 * p.open_circles - 4 + 2 * p.interior_special + p.boundary_special > 0


@dataclass(frozen=True)
class ResolvedCircle:
    label: int | None
    arcs: tuple
    collapsed: bool = False

    @property
    def marked(self) -> tuple:
        return tuple(s for s in self.arcs if s[0] == "q")


@dataclass(frozen=True)
class StratumGraph:
    pieces: tuple[Piece, ...]
    marked_type: MarkedTopType | None = None
    _key: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    # -- node bookkeeping -------------------------------------------------

    def _endpoint_pairs(self, kind: str) -> list[tuple[Slot, Slot]]:
        ends: dict = defaultdict(list)
        for p in self.pieces:
            for s in p.slots():
                if s[0] == kind:
                    ends[s[1]].append(s)
        pairs = []
        for a, ss in sorted(ends.items()):
            if len(ss) != 2:
                raise StructuralError(f"node {kind}{a} has {len(ss)} endpoint(s)")
            pairs.append(tuple(sorted(ss)))
        return pairs

    @cached_property
    def interior_nodes(self) -> list[tuple[Slot, Slot]]:
        return self._endpoint_pairs("N")

    @cached_property
    def h_nodes(self) -> list[tuple[Slot, Slot]]:
        return self._endpoint_pairs("H")

    @property
    def e_count(self) -> int:
        return sum(p.collapsed_circles for p in self.pieces)

    @property
    def l0(self) -> int:
        return len(self.interior_nodes)

    @property
    def l1(self) -> int:
        return len(self.h_nodes) + self.e_count

    @property
    def arithmetic_genus(self) -> int:
        return _arithmetic_genus(((p.genus, p.open_circles) for p in self.pieces), self.l0, self.l1)

    @property
    def dim(self) -> int:
        return stratum_dim(self)

    @cached_property
    def b_labels(self) -> dict:
        """B-label of each boundary circle after smoothing, keyed by its arcs."""
        return {rc.arcs or ("circle", i): rc.label for i, rc in enumerate(smooth_boundary(self))}

    def piece_of(self) -> dict:
        return {s: i for i, p in enumerate(self.pieces) for s in p.slots()}

    # -- canonical form ---------------------------------------------------

    def _digraph(self):
        colors: list = []
        edges: list = []
        where: dict = {}
        handles: dict = {}

        def add(color):
            colors.append(color)
            return len(colors) - 1

        for pi, p in enumerate(self.pieces):
            vp = add(("P", p.genus))
            handles[("P", pi)] = vp
            for ci, c in enumerate(p.circles):
                vc = add(("C", c.collapsed, c.label if not c.cyclic_order else -1))
                handles[("C", pi, ci)] = vc
                edges.append((vp, vc, "pc"))
                vs = []
                for s, lab in zip(c.cyclic_order, c.arc_labels):
                    v = add(("B", ("H",) if _is_h(s) else s, lab))
                    where[s] = v
                    vs.append(v)
                    edges.append((vc, v, "cs"))
                for a, b in zip(vs, vs[1:] + vs[:1]):
                    edges.append((a, b, "nx"))
            for s in p.interior:
                v = add(("I", ("N",) if s[0] == "N" else s))
                where[s] = v
                edges.append((vp, v, "pi"))
        for kind in ("H", "N"):
            for a, b in self._endpoint_pairs(kind):
                edges.append((where[a], where[b], "nd"))
                edges.append((where[b], where[a], "nd"))
        return ColoredDigraph(colors, edges), where, handles

    def _canonicalize(self) -> tuple[tuple, "StratumGraph"]:
        dg, where, handles = self._digraph()
        cert, pos = dg.canonical()
        rename = {}
        for kind in ("H", "N"):
            pairs = sorted(
                (sorted((pos[where[a]], a) for a in pair) for pair in self._endpoint_pairs(kind)),
                key=lambda pr: pr[0][0],
            )
            for new, pr in enumerate(pairs):
                for side, (_, old) in enumerate(pr):
                    rename[old] = (kind, new, side)

        def ren(s):
            return rename.get(s, s)

        order = sorted(range(len(self.pieces)), key=lambda i: pos[handles[("P", i)]])
        pieces = []
        for pi in order:
            p = self.pieces[pi]
            circles = []
            corder = sorted(range(len(p.circles)), key=lambda ci: pos[handles[("C", pi, ci)]])
            for ci in corder:
                c = p.circles[ci]
                if c.cyclic_order:
                    start = min(range(len(c.cyclic_order)), key=lambda j: pos[where[c.cyclic_order[j]]])
                    slots, labels = c.rotated(start)
                    circles.append(BoundaryCircle(tuple(ren(s) for s in slots), labels, None, False))
                else:
                    circles.append(c)
            interior = tuple(ren(s) for s in sorted(p.interior, key=lambda s: pos[where[s]]))
            pieces.append(Piece(p.genus, tuple(circles), interior))
        return cert, StratumGraph(tuple(pieces), self.marked_type, cert)

    @cached_property
    def _canon_pair(self) -> tuple[tuple, "StratumGraph"]:
        if self._key is not None:
            return self._key, self
        return self._canonicalize()

    @property
    def key(self) -> tuple:
        return self._canon_pair[0]

    def canonical(self) -> "StratumGraph":
        return self._canon_pair[1]

    def isomorphic(self, other: "StratumGraph") -> bool:
        return self.marked_type == other.marked_type and self.key == other.key

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        t = self.marked_type
        return {
            "type": None if t is None else {"g": t.g, "h": t.h, "n": t.n, "m": list(t.m)},
            "dim": self.dim if t is not None else None,
            "pieces": [
                {
                    "genus": p.genus,
                    "circles": [
                        {
                            "collapsed": c.collapsed,
                            "label": c.label,
                            "slots": [[slot_str(s), lab] for s, lab in zip(c.cyclic_order, c.arc_labels)],
                        }
                        for c in p.circles
                    ],
                    "interior": [slot_str(s) for s in p.interior],
                }
                for p in self.pieces
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.canonical().to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "StratumGraph":
        t = d.get("type")
        mt = None if t is None else MarkedTopType.of(t["g"], t["h"], t["n"], t["m"])
        pieces = []
        for pd in d["pieces"]:
            circles = []
            for cd in pd["circles"]:
                slots = tuple(parse_slot(s) for s, _ in cd["slots"])
                labels = tuple(lab for _, lab in cd["slots"])
                circles.append(BoundaryCircle(slots, labels, cd["label"], cd["collapsed"]))
            pieces.append(Piece(pd["genus"], tuple(circles), tuple(parse_slot(s) for s in pd["interior"])))
        return cls(tuple(pieces), mt)

    @classmethod
    def from_json(cls, text: str) -> "StratumGraph":
        return cls.from_dict(json.loads(text))


_SLOT_RE = re.compile(r"^(?:q(\d+)_(\d+)|p(\d+)|([HN])(\d+):([01]))$")


def slot_str(s: Slot) -> str:
    if s[0] == "q":
        return f"q{s[1]}_{s[2]}"
    if s[0] == "p":
        return f"p{s[1]}"
    return f"{s[0]}{s[1]}:{s[2]}"


def parse_slot(text: str) -> Slot:
    m = _SLOT_RE.match(text)
    if not m:
        raise StructuralError(f"unparseable slot {text!r}")
    if m.group(1):
        return ("q", int(m.group(1)), int(m.group(2)))
    if m.group(3):
        return ("p", int(m.group(3)))
    return (m.group(4), int(m.group(5)), int(m.group(6)))


# -- smoothing and total type ---------------------------------------------


def smooth_boundary(s: StratumGraph) -> list[ResolvedCircle]:
    """Boundary circles obtained by smoothing every boundary node.

    At a node joining slots ``u`` and ``v``, the arc arriving at ``u``
    continues along the arc leaving ``v`` and vice versa, which is the only
    resolution compatible with the boundary orientation.
    """
    succ: dict = {}
    label: dict = {}
    partner: dict = {}
    out: list[ResolvedCircle] = []
    for p in s.pieces:
        for c in p.circles:
            if c.collapsed:
                out.append(ResolvedCircle(c.label, (), True))
            elif not c.cyclic_order:
                out.append(ResolvedCircle(c.label, ()))
            k = len(c.cyclic_order)
            for i, slot in enumerate(c.cyclic_order):
                if slot in succ:
                    raise StructuralError(f"slot {slot_str(slot)} appears twice")
                succ[slot] = c.cyclic_order[(i + 1) % k]
                label[slot] = c.arc_labels[i]
    for u, v in s.h_nodes:
        if u not in succ or v not in succ:
            raise StructuralError(f"boundary node endpoint off the boundary: {slot_str(u)}")
        partner[u], partner[v] = v, u

    def step(x):
        y = succ[x]
        return partner[y] if _is_h(y) else y

    seen = set()
    for start in succ:
        if start in seen:
            continue
        cycle = []
        x = start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = step(x)
        if x != start:
            raise StructuralError("boundary pairing does not resolve into circles")
        labs = {label[x] for x in cycle}
        if len(labs) != 1:
            raise StructuralError(f"arcs of one smoothed circle carry labels {sorted(labs, key=repr)}")
        out.append(ResolvedCircle(labs.pop(), tuple(cycle)))
    return out


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def node_census(s: StratumGraph) -> dict:
    """Classify nodes by their effect when smoothed one at a time.

    Interior nodes are smoothed first; an interior node joining an already
    connected part is connecting.  Boundary nodes are then smoothed in order
    and typed H1 (endpoints on one circle), H2 (different circles, same
    component) or H3 (different components).
    """
    piece_of = s.piece_of()
    uf = _UnionFind(len(s.pieces))
    delta = 0
    for a, b in s.interior_nodes:
        if not uf.union(piece_of[a], piece_of[b]):
            delta += 1
    circles: dict[int, list] = {}
    circle_of: dict = {}
    cid = 0
    for p in s.pieces:
        for c in p.circles:
            if c.collapsed:
                continue
            circles[cid] = list(c.cyclic_order)
            for slot in c.cyclic_order:
                circle_of[slot] = cid
            cid += 1
    counts = {"E": s.e_count, "H1": 0, "H2": 0, "H3": 0}
    for u, v in s.h_nodes:
        cu, cv = circle_of[u], circle_of[v]
        if cu == cv:
            seq = circles.pop(cu)
            i = seq.index(u)
            seq = seq[i:] + seq[:i]
            j = seq.index(v)
            parts = [seq[1:j], seq[j + 1:]]
            counts["H1"] += 1
        else:
            su, sv = circles.pop(cu), circles.pop(cv)
            i, j = su.index(u), sv.index(v)
            parts = [su[i + 1:] + su[:i] + sv[j + 1:] + sv[:j]]
            if uf.union(piece_of[u], piece_of[v]):
                counts["H3"] += 1
            else:
                counts["H2"] += 1
        for part in parts:
            circles[cid] = part
            for slot in part:
                circle_of[slot] = cid
            cid += 1
    counts["delta"] = delta
    return counts


def total_type(s: StratumGraph) -> TopType:
    """Topological type of the smoothing of ``s``.

    ``h`` is the number of circles after smoothing and ``g`` comes from the
    arithmetic genus of the double; the node-census formulas must agree.
    """
    h = len(smooth_boundary(s))
    gt = s.arithmetic_genus
    if (gt + 1 - h) % 2:
        raise ConsistencyError(f"double genus {gt} and h={h} have wrong parity")
    g = (gt + 1 - h) // 2
    c = node_census(s)
    g2 = sum(p.genus for p in s.pieces) + c["delta"] + c["H2"]
    h2 = sum(p.open_circles for p in s.pieces) + c["E"] + c["H1"] - c["H2"] - c["H3"]
    if (g, h) != (g2, h2):
        raise ConsistencyError(f"type via double ({g},{h}) != type via node census ({g2},{h2})")
    return TopType(g, h)


def stratum_dim(s: StratumGraph) -> int:
    per_piece = sum(p.dim for p in s.pieces)
    if s.marked_type is None:
        return per_piece
    d = moduli_dim(s.marked_type) - 2 * s.l0 - s.l1
    if d != per_piece:
        raise ConsistencyError(f"stratum dimension {d} != sum over pieces {per_piece}")
    return d


def validate(s: StratumGraph) -> None:
    """Raise unless ``s`` is a valid stratum of its declared marked type."""
    t = s.marked_type
    if not s.pieces:
        raise StructuralError("empty graph")
    for p in s.pieces:
        if not is_piece_stable(p):
            raise StructuralError(f"unstable piece {p}")
        for slot in p.interior:
            if slot[0] not in ("p", "N"):
                raise StructuralError(f"{slot_str(slot)} cannot be an interior slot")
        for c in p.circles:
            for slot in c.cyclic_order:
                if slot[0] not in ("q", "H"):
                    raise StructuralError(f"{slot_str(slot)} cannot be a boundary slot")
    all_slots = [x for p in s.pieces for x in p.slots()]
    if len(set(all_slots)) != len(all_slots):
        raise StructuralError("repeated slot")
    piece_of = s.piece_of()
    uf = _UnionFind(len(s.pieces))
    for a, b in s.interior_nodes + s.h_nodes:
        uf.union(piece_of[a], piece_of[b])
    if len({uf.find(i) for i in range(len(s.pieces))}) != 1:
        raise StructuralError("graph is disconnected")
    resolved = smooth_boundary(s)
    if t is None:
        if resolved:
            raise StructuralError("closed graph with boundary")
        return
    labels = sorted(rc.label for rc in resolved)
    if labels != list(range(1, t.h + 1)):
        raise StructuralError(f"B-labels {labels} are not 1..{t.h}")
    for rc in resolved:
        qs = rc.marked
        if any(q[1] != rc.label for q in qs):
            raise StructuralError(f"marked point on circle B^{rc.label} has the wrong label")
        if sorted(q[2] for q in qs) != list(range(1, t.m[rc.label - 1] + 1)):
            raise StructuralError(f"circle B^{rc.label} does not carry q^{rc.label}_1..{t.m[rc.label - 1]}")
    ps = sorted(x[1] for x in all_slots if x[0] == "p")
    if ps != list(range(1, t.n + 1)):
        raise StructuralError(f"interior marked points {ps} are not 1..{t.n}")
    if total_type(s) != t.base:
        raise StructuralError(f"graph smooths to {total_type(s)}, not {t.base}")


# -- degenerations --------------------------------------------------------


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield (
            tuple(x for i, x in enumerate(items) if mask >> i & 1),
            tuple(x for i, x in enumerate(items) if not mask >> i & 1),
        )


def _gaps(c: BoundaryCircle) -> range:
    return range(max(1, len(c.cyclic_order)))


def _split_circle(c: BoundaryCircle, i: int, j: int, u: Slot, v: Slot):
    """Pinch ``c`` across gaps ``i <= j`` into ``(u, X)`` and ``(v, Y)``.

    Going around ``c``: ``X`` then ``v`` then ``Y`` then ``u``.
    """
    k = len(c.cyclic_order)
    if k == 0:
        lab = c.label
        return BoundaryCircle((u,), (lab,)), BoundaryCircle((v,), (lab,))
    slots, labels = c.rotated(i + 1)
    cut = j - i
    x_s, x_l = slots[:cut], labels[:cut]
    y_s, y_l = slots[cut:], labels[cut:]
    return (
        BoundaryCircle((u,) + x_s, (c.gap_label(i),) + x_l),
        BoundaryCircle((v,) + y_s, (c.gap_label(j),) + y_l),
    )


def _join_circles(a: BoundaryCircle, i: int, b: BoundaryCircle, j: int, u: Slot, v: Slot) -> BoundaryCircle:
    """Touch ``a`` (at gap ``i``) and ``b`` (at gap ``j``) into one normalized circle."""
    xa, la = a.rotated(i + 1) if a.cyclic_order else ((), ())
    yb, lb = b.rotated(j + 1) if b.cyclic_order else ((), ())
    return BoundaryCircle((u,) + xa + (v,) + yb, (a.gap_label(i),) + la + (b.gap_label(j),) + lb)


def _piece_degenerations(p: Piece, fresh: int) -> Iterator[tuple[str, tuple[Piece, ...]]]:
    hu, hv = ("H", fresh, 0), ("H", fresh, 1)
    nu, nv = ("N", fresh, 0), ("N", fresh, 1)
    circles = p.circles
    open_idx = [i for i, c in enumerate(circles) if not c.collapsed]

    for i in open_idx:
        c = circles[i]
        if not c.cyclic_order:
            new = circles[:i] + (BoundaryCircle((), (), c.label, True),) + circles[i + 1:]
            yield "E", (Piece(p.genus, new, p.interior),)

    for ia, ib in itertools.combinations(open_idx, 2):
        rest = tuple(c for k, c in enumerate(circles) if k not in (ia, ib))
        for i in _gaps(circles[ia]):
            for j in _gaps(circles[ib]):
                joined = _join_circles(circles[ia], i, circles[ib], j, hu, hv)
                yield "H1", (Piece(p.genus, rest + (joined,), p.interior),)

    for ic in open_idx:
        c = circles[ic]
        rest = circles[:ic] + circles[ic + 1:]
        for i, j in itertools.combinations_with_replacement(_gaps(c), 2):
            cu, cv = _split_circle(c, i, j, hu, hv)
            if p.genus >= 1:
                yield "H2", (Piece(p.genus - 1, rest + (cu, cv), p.interior),)
            for g1 in range(p.genus + 1):
                for r1, r2 in _subsets(rest):
                    for i1, i2 in _subsets(p.interior):
                        yield "H3", (Piece(g1, r1 + (cu,), i1), Piece(p.genus - g1, r2 + (cv,), i2))

    if p.genus >= 1:
        yield "N", (Piece(p.genus - 1, circles, p.interior + (nu, nv)),)
    for g1 in range(p.genus + 1):
        for r1, r2 in _subsets(circles):
            for i1, i2 in _subsets(p.interior):
                yield "N", (Piece(g1, r1, i1 + (nu,)), Piece(p.genus - g1, r2, i2 + (nv,)))


def degenerations(s: StratumGraph) -> Iterator[tuple[str, StratumGraph]]:
    """Every stable graph obtained from ``s`` by adding one node (with repeats)."""
    used = [x[1] for p in s.pieces for x in p.slots() if _is_node(x)]
    fresh = max(used, default=-1) + 1
    for k, p in enumerate(s.pieces):
        others = s.pieces[:k] + s.pieces[k + 1:]
        for kind, new in _piece_degenerations(p, fresh):
            if all(is_piece_stable(q) for q in new):
                yield kind, StratumGraph(others + new, s.marked_type)


def smooth_strata(t: MarkedTopType) -> list[StratumGraph]:
    """Open strata: one per choice of cyclic order of the boundary marked points."""
    orders = []
    for i, mi in enumerate(t.m, start=1):
        if mi == 0:
            orders.append([None])
            continue
        rest = [("q", i, k) for k in range(2, mi + 1)]
        orders.append([(("q", i, 1),) + perm for perm in itertools.permutations(rest)])
    out = []
    for choice in itertools.product(*orders):
        circles = tuple(
            BoundaryCircle((), (), i, False) if order is None else BoundaryCircle(order, (i,) * len(order))
            for i, order in enumerate(choice, start=1)
        )
        interior = tuple(("p", j) for j in range(1, t.n + 1))
        out.append(StratumGraph((Piece(t.g, circles, interior),), t))
    return out


def _marked_type_stable(t: MarkedTopType) -> bool:
    return 4 * t.g + 2 * t.h - 4 + 2 * t.n + sum(t.m) > 0


@dataclass
class StrataEnumeration:
    """Strata of one moduli space with their degeneration (covering) relation."""

    marked_type: MarkedTopType | None
    strata: list[StratumGraph]
    covers: dict = field(default_factory=dict)  # key -> set of keys one move lower
    kinds: dict = field(default_factory=dict)  # (upper key, lower key) -> move kinds

    def __len__(self):
        return len(self.strata)

    def __iter__(self):
        return iter(self.strata)

    @cached_property
    def by_key(self) -> dict:
        return {s.key: s for s in self.strata}

    @property
    def by_dim(self) -> dict[int, list[StratumGraph]]:
        out: dict[int, list] = defaultdict(list)
        for s in self.strata:
            out[s.dim].append(s)
        return dict(sorted(out.items(), reverse=True))

    def counts(self) -> list[int]:
        """Number of strata in each dimension, from the top dimension down to 0."""
        if not self.strata:
            return []
        top = max(s.dim for s in self.strata)
        bd = self.by_dim
        return [len(bd.get(d, [])) for d in range(top, -1, -1)]

    def cover_pairs(self) -> list[tuple[tuple, tuple]]:
        return sorted((a, b) for a, bs in self.covers.items() for b in bs)


def _explore(starts: list[StratumGraph], marked_type) -> StrataEnumeration:
    seen: dict = {}
    covers: dict = {}
    kinds: dict = defaultdict(set)
    queue = []
    for s in starts:
        c = s.canonical()
        if c.key not in seen:
            seen[c.key] = c
            queue.append(c)
    while queue:
        s = queue.pop()
        below = set()
        for kind, d in degenerations(s):
            k = d.key
            below.add(k)
            kinds[(s.key, k)].add(kind)
            if k not in seen:
                c = d.canonical()
                seen[k] = c
                queue.append(c)
        covers[s.key] = below
    strata = sorted(seen.values(), key=lambda x: (-stratum_dim(x), x.to_json()))
    return StrataEnumeration(marked_type, strata, covers, dict(kinds))


@lru_cache(maxsize=64)
def enumerate_strata(t: MarkedTopType) -> StrataEnumeration:
    """All strata of the compactified moduli space of type ``t``, without repeats.

    Isomorphisms preserve B-labels, marked-point labels and boundary
    orientation.
    """
    if not _marked_type_stable(t):
        raise DomainError(f"marked type {t} is not stable")
    return _explore(smooth_strata(t), t)


@lru_cache(maxsize=64)
def enumerate_closed_strata(g: int, n: int = 0) -> StrataEnumeration:
    """Stable dual graphs of closed genus ``g`` curves with ``n`` marked points."""
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise DomainError(f"(g, n)=({g}, {n}) is not stable")
    top = StratumGraph((Piece(g, (), tuple(("p", j) for j in range(1, n + 1))),), None)
    return _explore([top], None)


@dataclass
class DegenerationPoset:
    elements: list[tuple]
    rank: dict
    covers: list[tuple[tuple, tuple]]

    def up(self, b) -> list:
        return [a for a, x in self.covers if x == b]

    def down(self, a) -> list:
        return [b for x, b in self.covers if x == a]


def degeneration_poset(t: MarkedTopType) -> DegenerationPoset:
    """Covering relation: ``A`` covers ``B`` when one node added to ``A`` gives ``B``."""
    en = enumerate_strata(t)
    rank = {s.key: s.dim for s in en.strata}
    elements = [s.key for s in en.strata]
    covers = en.cover_pairs()
    for a, b in covers:
        drop = rank[a] - rank[b]
        kinds = en.kinds[(a, b)]
        if drop not in (1, 2) or (drop == 2) != (kinds == {"N"}):
            raise ConsistencyError(f"degeneration {sorted(kinds)} drops dimension by {drop}")
    return DegenerationPoset(elements, rank, covers)
