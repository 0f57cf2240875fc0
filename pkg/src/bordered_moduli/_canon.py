"""Canonical labeling of small vertex-colored directed graphs.

Color refinement followed by individualization of the first smallest
non-singleton cell; the canonical certificate is the lexicographically least
encoding over all leaves of the search tree.  Exponential in the worst case,
which never occurs for the graphs built in this package (marked points and
boundary labels break almost every symmetry).
"""

from __future__ import annotations

from typing import Hashable, Sequence


def _rank(values: Sequence) -> list[int]:
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


class ColoredDigraph:
    def __init__(self, colors: Sequence[Hashable], edges: Sequence[tuple[int, int, str]]):
        # Colors are compared through repr so mixed payload types stay orderable.
        self.colors = [repr(c) for c in colors]
        self.edges = sorted(set(edges))
        n = len(colors)
        kinds = {k: i for i, k in enumerate(sorted({k for _, _, k in self.edges}))}
        self.out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.inc: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v, kind in self.edges:
            self.out[u].append((kinds[kind], v))
            self.inc[v].append((kinds[kind], u))

    def __len__(self):
        return len(self.colors)

    def refine(self, cells: list[int]) -> list[int]:
        count = len(set(cells))
        while True:
            sigs = [
                (
                    cells[v],
                    tuple(sorted([(k, cells[w]) for k, w in out])),
                    tuple(sorted([(k, cells[w]) for k, w in inc])),
                )
                for v, out, inc in zip(range(len(cells)), self.out, self.inc)
            ]
            cells = _rank(sigs)
            new_count = len(set(cells))
            if new_count == count:
                return cells
            count = new_count

    def certificate(self, cells: list[int]) -> tuple:
        pos = cells
        inverse = sorted(range(len(pos)), key=pos.__getitem__)
        return (
            tuple(self.colors[v] for v in inverse),
            tuple(sorted((pos[u], pos[v], k) for u, v, k in self.edges)),
        )

    def canonical(self) -> tuple[tuple, list[int]]:
        """Return ``(certificate, position)`` where ``position[v]`` is the canonical index of ``v``."""
        start = self.refine(_rank(self.colors))
        best: list = [None, None]

        def search(cells):
            n = len(cells)
            if len(set(cells)) == n:
                cert = self.certificate(cells)
                if best[0] is None or cert < best[0]:
                    best[0], best[1] = cert, cells
                return
            sizes: dict[int, list[int]] = {}
            for v, c in enumerate(cells):
                sizes.setdefault(c, []).append(v)
            target = min((len(vs), c) for c, vs in sizes.items() if len(vs) > 1)[1]
            for v in sizes[target]:
                split = [(c, 0 if w == v or c != target else 1) for w, c in enumerate(cells)]
                search(self.refine(_rank(split)))

        search(start)
        return best[0], best[1]
