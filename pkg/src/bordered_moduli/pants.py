"""Pants decompositions and the associahedral structure of small moduli spaces.

Faces of the associahedron ``K_{n}`` are realized as sets of pairwise
noncrossing diagonals of a convex ``(n + 1)``-gon; a face with ``j``
diagonals has dimension ``n - 2 - j``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .strata import degeneration_poset, enumerate_strata
from .surface_types import ConsistencyError, DomainError, MarkedTopType


def pants_counts(g_tilde: int, n_tilde: int) -> tuple[int, int]:
    """Curves and pairs of pants in a decomposition of a closed genus ``g_tilde`` surface with ``n_tilde`` punctures."""
    if g_tilde < 0 or n_tilde < 0 or 2 * g_tilde - 2 + n_tilde <= 0:
        raise DomainError(f"(g_tilde, n_tilde)=({g_tilde}, {n_tilde}) admits no pants decomposition")
    return 3 * g_tilde - 3 + n_tilde, 2 * g_tilde - 2 + n_tilde


def pants_counts_bordered(g: int, h: int, n: int) -> tuple[int, int]:
    """Interior cutting curves and pairs of pants for a bordered surface of type ``(g, h)`` with ``n`` punctures."""
    if g < 0 or h < 1 or n < 0 or 2 * g + h - 2 + n <= 0:
        raise DomainError(f"(g, h, n)=({g}, {h}, {n}) admits no pants decomposition")
    curves, pants = 3 * g + h - 3 + n, 2 * g + h - 2 + n
    double_curves, double_pants = pants_counts(2 * g + h - 1, 2 * n)
    # Cutting curves of the double: two copies of each interior curve plus
    # the h boundary circles.  Each pair of pants appears twice.
    if double_curves - curves != 3 * g + 2 * h - 3 + n or double_curves != 2 * curves + h:
        raise ConsistencyError("bordered pants count does not double correctly")
    if double_pants != 2 * pants:
        raise ConsistencyError("bordered pants count does not double correctly")
    return curves, pants


def fenchel_nielsen_dim(g: int, h: int, n: int) -> int:
    """Length and twist for every interior curve plus one length per boundary circle."""
    curves, _ = pants_counts_bordered(g, h, n)
    dim = 2 * curves + h
    expected = 6 * g + 3 * h - 6 + 2 * n
    if dim != expected:
        raise ConsistencyError(f"Fenchel-Nielsen count {dim} != moduli dimension {expected}")
    return dim


@dataclass
class FaceLattice:
    """Graded poset of nonempty faces; ``covers`` holds ``(upper, lower)`` pairs."""

    elements: list
    rank: dict
    covers: list = field(default_factory=list)
    name: str = ""

    @property
    def f_vector(self) -> tuple[int, ...]:
        c = Counter(self.rank.values())
        return tuple(c.get(d, 0) for d in range(max(c) + 1))

    def down(self, a) -> list:
        return [y for x, y in self.covers if x == a]

    def up(self, b) -> list:
        return [x for x, y in self.covers if y == b]


def _crossing(d1, d2) -> bool:
    (a, b), (c, d) = d1, d2
    return a < c < b < d or c < a < d < b


def associahedron(mdim: int) -> FaceLattice:
    """Face lattice of ``K_{mdim+2}``, the ``mdim``-dimensional associahedron."""
    if mdim < 0:
        raise DomainError(f"mdim={mdim} must be nonnegative")
    n = mdim + 3
    diagonals = [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]
    faces = [frozenset()]
    frontier = [frozenset()]
    while frontier:
        nxt = set()
        for f in frontier:
            for d in diagonals:
                if d not in f and all(not _crossing(d, e) for e in f):
                    nxt.add(f | {d})
        frontier = sorted(nxt, key=sorted)
        faces.extend(frontier)
    rank = {f: mdim - len(f) for f in faces}
    fs = set(faces)
    covers = [(f, f | {d}) for f in faces for d in diagonals if f | {d} in fs and d not in f]
    return FaceLattice(faces, rank, covers, f"K{mdim + 2}")


@dataclass
class IsoResult:
    isomorphic: bool
    mapping: dict | None = None
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def _neighbors(poset) -> tuple[dict, dict]:
    up, down = defaultdict(set), defaultdict(set)
    for a, b in poset.covers:
        down[a].add(b)
        up[b].add(a)
    return up, down


def graded_isomorphism(p, q) -> IsoResult:
    """Rank- and cover-preserving bijection from ``p`` to ``q``, or a reason none exists.

    Both arguments need ``elements``, ``rank`` and ``covers`` (upper, lower).
    """
    if Counter(p.rank.values()) != Counter(q.rank.values()):
        cp, cq = Counter(p.rank.values()), Counter(q.rank.values())
        r = min(d for d in set(cp) | set(cq) if cp.get(d, 0) != cq.get(d, 0))
        return IsoResult(False, reason=f"rank {r} has {cp.get(r, 0)} vs {cq.get(r, 0)} elements", witness=r)
    pu, pd = _neighbors(p)
    qu, qd = _neighbors(q)

    def profile(x, rank, up, down):
        return (rank[x], len(up[x]), len(down[x]), tuple(sorted(rank[y] for y in down[x])))

    prof_p = {x: profile(x, p.rank, pu, pd) for x in p.elements}
    prof_q = {y: profile(y, q.rank, qu, qd) for y in q.elements}
    cp, cq = Counter(prof_p.values()), Counter(prof_q.values())
    if cp != cq:
        bad = next(pr for pr in sorted(cp, key=repr) if cp[pr] > cq.get(pr, 0))
        w = next(x for x in p.elements if prof_p[x] == bad)
        return IsoResult(False, witness=w, reason=f"no element of the target has covering profile {bad}")
    by_prof = defaultdict(list)
    for y in q.elements:
        by_prof[prof_q[y]].append(y)

    # Visit p in breadth-first order so every element after the first in its
    # component has an already-mapped neighbor that restricts its candidates.
    order, seen = [], set()
    for root in sorted(p.elements, key=lambda x: -p.rank[x]):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(pu[x] | pd[x], key=repr):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)

    f: dict = {}
    used: set = set()
    deepest = [0, None]

    def candidates(x):
        placed = [y for y in pu[x] | pd[x] if y in f]
        if not placed:
            return by_prof[prof_p[x]]
        y = placed[0]
        pool = qd[f[y]] if y in pu[x] else qu[f[y]]
        return [z for z in pool if prof_q[z] == prof_p[x]]

    def consistent(x, z):
        for y in pu[x]:
            if y in f and f[y] not in qu[z]:
                return False
        for y in pd[x]:
            if y in f and f[y] not in qd[z]:
                return False
        placed_p = sum(1 for y in pu[x] | pd[x] if y in f)
        placed_q = sum(1 for y in qu[z] | qd[z] if y in used)
        return placed_p == placed_q

    def search(i):
        if i > deepest[0]:
            deepest[0], deepest[1] = i, order[i] if i < len(order) else None
        if i == len(order):
            return True
        x = order[i]
        for z in candidates(x):
            if z in used or not consistent(x, z):
                continue
            f[x] = z
            used.add(z)
            if search(i + 1):
                return True
            del f[x]
            used.discard(z)
        return False

    if search(0):
        return IsoResult(True, mapping=dict(f))
    return IsoResult(False, witness=deepest[1], reason="exhaustive search found no extension past this element")


def check_k5_identification(poset=None, target: FaceLattice | None = None) -> IsoResult:
    """Compare a strata poset (default: pairs of pants) with an associahedron (default: ``K5``)."""
    if poset is None:
        poset = degeneration_poset(MarkedTopType.of(0, 3))
    if target is None:
        target = associahedron(3)
    return graded_isomorphism(poset, target)


def disc_component_count(m: int, cross_check: bool | None = None) -> int:
    """Connected components of the moduli of discs with ``m`` boundary marked points.

    By default the answer ``(m-1)!`` is cross-checked against the strata
    enumeration when ``m <= 6``: the number of cyclic orders among the top
    strata and the number of connected components of the degeneration poset.
    """
    if m < 3:
        raise DomainError(f"m={m} must be at least 3")
    value = math.factorial(m - 1)
    if cross_check is None:
        cross_check = m <= 6
    if cross_check:
        en = enumerate_strata(MarkedTopType.of(0, 1, 0, (m,)))
        top = max(s.dim for s in en.strata)
        orders = {s.pieces[0].circles[0].cyclic_order for s in en.strata if s.dim == top}
        comps = _components(en)
        if not len(orders) == comps == value:
            raise ConsistencyError(f"m={m}: {len(orders)} cyclic orders, {comps} components, expected {value}")
    return value


def _components(en) -> int:
    parent = {s.key: s.key for s in en.strata}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, bs in en.covers.items():
        for b in bs:
            parent[find(a)] = find(b)
    return len({find(k) for k in parent})


def to_dot(poset, name: str = "poset", label=None) -> str:
    """Hasse diagram in DOT format, one rank per row."""
    label = label or (lambda x: str(sorted(x)) if isinstance(x, frozenset) else "")
    ids = {x: i for i, x in enumerate(poset.elements)}
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=box, fontsize=10];"]
    by_rank = defaultdict(list)
    for x in poset.elements:
        by_rank[poset.rank[x]].append(x)
    for r in sorted(by_rank, reverse=True):
        members = " ".join(f"n{ids[x]};" for x in by_rank[r])
        lines.append(f"  {{ rank=same; {members} }}")
        for x in by_rank[r]:
            text = label(x).replace('"', "'")
            lines.append(f'  n{ids[x]} [label="d={r} {text}"];')
    for a, b in sorted(poset.covers, key=lambda e: (ids[e[0]], ids[e[1]])):
        lines.append(f"  n{ids[a]} -> n{ids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "FaceLattice",
    "IsoResult",
    "associahedron",
    "check_k5_identification",
    "disc_component_count",
    "fenchel_nielsen_dim",
    "graded_isomorphism",
    "pants_counts",
    "pants_counts_bordered",
    "to_dot",
]
