import itertools
import math

import pytest

from bordered_moduli.pants import (
    FaceLattice,
    associahedron,
    check_k5_identification,
    disc_component_count,
    fenchel_nielsen_dim,
    graded_isomorphism,
    pants_counts,
    pants_counts_bordered,
    to_dot,
)
from bordered_moduli.strata import degeneration_poset
from bordered_moduli.surface_types import DomainError, MarkedTopType

M = MarkedTopType.of


def kirkman_cayley(p: int, k: int) -> int:
    """Dissections of a convex p-gon by k noncrossing diagonals."""
    return math.comb(p - 3, k) * math.comb(p + k - 1, k) // (k + 1)


def brute_force_faces(p: int) -> list[int]:
    """Count noncrossing diagonal subsets of a p-gon by trying every subset."""
    diags = [(i, j) for i in range(p) for j in range(i + 2, p) if not (i == 0 and j == p - 1)]

    def crosses(d, e):
        return d[0] < e[0] < d[1] < e[1] or e[0] < d[0] < e[1] < d[1]

    counts = [0] * (p - 2)
    for r in range(p - 2):
        for sub in itertools.combinations(diags, r):
            if all(not crosses(d, e) for d, e in itertools.combinations(sub, 2)):
                counts[r] += 1
    return counts


@pytest.mark.parametrize("g,n,expected", [(2, 0, (3, 2)), (0, 4, (1, 2)), (1, 1, (1, 1)), (3, 2, (8, 6))])
def test_pants_counts(g, n, expected):
    assert pants_counts(g, n) == expected


def test_pants_counts_domain():
    for g, n in [(0, 2), (1, 0), (0, 0), (-1, 5)]:
        with pytest.raises(DomainError):
            pants_counts(g, n)


@pytest.mark.parametrize("g,h,n", [(0, 3, 0), (0, 2, 1), (1, 1, 0), (1, 2, 3), (2, 3, 1), (0, 1, 2)])
def test_bordered_counts_double(g, h, n):
    curves, pants = pants_counts_bordered(g, h, n)
    assert curves == 3 * g + h - 3 + n
    assert fenchel_nielsen_dim(g, h, n) == 6 * g + 3 * h - 6 + 2 * n


@pytest.mark.parametrize("mdim,f", [(1, (2, 1)), (2, (5, 5, 1)), (3, (14, 21, 9, 1)), (4, (42, 84, 56, 14, 1))])
def test_associahedron_f_vectors(mdim, f):
    assert associahedron(mdim).f_vector == f


@pytest.mark.parametrize("mdim", range(0, 7))
def test_associahedron_matches_dissection_counts(mdim):
    p = mdim + 3
    lat = associahedron(mdim)
    by_diagonals = [kirkman_cayley(p, k) for k in range(p - 2)]
    assert list(reversed(lat.f_vector)) == by_diagonals
    if p <= 9:
        assert brute_force_faces(p) == by_diagonals
    assert lat.f_vector[0] == math.comb(2 * (p - 2), p - 2) // (p - 1)  # Catalan vertices


def test_associahedron_is_eulerian():
    for mdim in range(1, 6):
        f = associahedron(mdim).f_vector
        assert sum((-1) ** i * x for i, x in enumerate(f)) == 1


def test_k5_identification():
    res = check_k5_identification()
    assert res.isomorphic
    poset = degeneration_poset(M(0, 3))
    k5 = associahedron(3)
    for a, b in poset.covers:
        assert (res.mapping[a], res.mapping[b]) in set(k5.covers)


def test_pentagon_and_segment():
    assert graded_isomorphism(degeneration_poset(M(0, 2, 0, (2, 0))), associahedron(2))
    assert graded_isomorphism(degeneration_poset(M(0, 2, 0, (1, 0))), associahedron(1))


def test_disc_m4_is_six_pentagons():
    poset = degeneration_poset(M(0, 1, 0, (4,)))
    assert sorted(poset.rank.values()).count(1) == 6


def test_corrupted_poset_is_rejected():
    k5 = associahedron(3)
    covers = list(k5.covers)
    # Reattach one edge-to-vertex cover to a different vertex; ranks stay intact.
    i = next(i for i, (a, b) in enumerate(covers) if k5.rank[a] == 1)
    a, b = covers[i]
    other = next(v for v in k5.elements if k5.rank[v] == 0 and v != b and (a, v) not in covers)
    covers[i] = (a, other)
    bad = FaceLattice(k5.elements, k5.rank, covers)
    res = graded_isomorphism(bad, k5)
    assert not res.isomorphic and res.reason and res.witness is not None
    assert not check_k5_identification(poset=bad)


def test_rank_mismatch_is_rejected():
    res = graded_isomorphism(associahedron(2), associahedron(3))
    assert not res.isomorphic and "rank" in res.reason


@pytest.mark.parametrize("m", [3, 4, 5])
def test_disc_component_count(m):
    assert disc_component_count(m) == math.factorial(m - 1)


def test_disc_component_count_domain():
    with pytest.raises(DomainError):
        disc_component_count(2)
    assert disc_component_count(9) == 40320


def test_to_dot():
    text = to_dot(associahedron(2), "K4")
    assert text.startswith("digraph K4 {") and text.rstrip().endswith("}")
    assert text.count("->") == 5 + 10  # face-to-edge plus edge-to-vertex
    assert text.count("[label=") == 11
