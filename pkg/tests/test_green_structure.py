import math

import numpy as np
import pytest

from sgideals.green import classes_equal, eggbox, green, hasse_edges
from sgideals.semigroup import cyclic_group, idempotents, left_zero_band, monogenic, right_zero_band
from sgideals.transformations import binomial, build_monoid, dclass_combinatorics, formula_labels, stirling2

KS = ("L", "R", "H", "D", "J")


def test_group_has_one_class():
    G = green(cyclic_group(5))
    assert all(G.count(K) == 1 for K in KS)


def test_T3_j_classes():
    S = build_monoid("T", 3)
    G = green(S)
    sizes = {}
    for cls in G.class_list("J"):
        sizes[S.elements[cls[0]].rank] = len(cls)
    assert sizes == {1: 3, 2: 18, 3: 6}


def test_monogenic_classes_distinct():
    S = monogenic(3, 1)
    G = green(S)
    assert G.count("J") == 3
    # a > a^2 > a^3 in the J-order
    assert G.leq_J[1, 0] and G.leq_J[2, 1] and not G.leq_J[0, 1]


def test_right_zero_band_eggbox():
    box = eggbox(right_zero_band(3))
    assert len(box.dclasses) == 1
    d = box.dclasses[0]
    assert len(d.rows) == 1 and len(d.cols) == 3 and d.cell_size == 1
    assert all(all(row) for row in d.group)


def test_left_zero_band_eggbox():
    d = eggbox(left_zero_band(3)).dclasses[0]
    assert len(d.rows) == 3 and len(d.cols) == 1


def test_T3_rank_two_grid():
    S = build_monoid("T", 3)
    box = eggbox(S)
    d = next(d for d in box.dclasses if S.elements[d.min_element].rank == 2)
    assert (len(d.rows), len(d.cols), d.cell_size) == (3, 3, 2)
    assert sum(map(sum, d.group)) == 6


def test_T4_chain():
    box = eggbox(build_monoid("T", 4))
    assert len(box.dclasses) == 4
    assert len(box.hasse) == 3
    # a chain: every class has at most one cover
    assert len({hi for hi, _ in box.hasse}) == 3 and len({lo for _, lo in box.hasse}) == 3


def test_hasse_is_transitive_reduction():
    order = np.array([[1, 1, 1], [0, 1, 1], [0, 0, 1]], dtype=bool)
    assert hasse_edges(order) == [(1, 0), (2, 1)]


@pytest.mark.parametrize("kind", ["T", "PT", "I"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_formula_relations_match_engine(kind, n):
    S = build_monoid(kind, n)
    eq = classes_equal(S, green(S), formula_labels(S.elements))
    assert all(eq.values()), eq


@pytest.mark.parametrize("kind, size", [("T", 256), ("PT", 625), ("I", 209)])
def test_formula_relations_n4(kind, size):
    S = build_monoid(kind, 4)
    assert len(S) == size
    eq = classes_equal(S, green(S), formula_labels(S.elements))
    assert all(eq.values())


@pytest.mark.parametrize("kind, n", [(k, n) for k in ("T", "I") for n in range(1, 6)]
                         + [("PT", n) for n in range(1, 5)])
def test_class_counts(kind, n):
    S = build_monoid(kind, n)
    G = green(S)
    E = idempotents(S)
    for row in dclass_combinatorics(kind, n):
        mu = row["rank"]
        members = [i for i, f in enumerate(S.elements) if f.rank == mu]
        assert len({G.classes["L"][i] for i in members}) == row["L_classes"] == binomial(n, mu)
        nR = {"T": stirling2(n, mu), "PT": stirling2(n + 1, mu + 1), "I": binomial(n, mu)}[kind]
        assert len({G.classes["R"][i] for i in members}) == row["R_classes"] == nR
        assert all(len(G.members("H", i)) == math.factorial(mu) for i in members)
        assert len({G.classes["H"][e] for e in E if S.elements[e].rank == mu}) == row["group_H"]


@pytest.mark.parametrize("mu", [1, 2, 3])
def test_group_H_classes_are_symmetric_groups(mu):
    S = build_monoid("T", 3)
    G = green(S)
    e = next(i for i in idempotents(S) if S.elements[i].rank == mu)
    H = G.members("H", e).tolist()
    sub = S.restrict(H)
    assert len(sub) == math.factorial(mu)
    commutative = np.array_equal(sub.table, sub.table.T)
    assert commutative == (mu < 3)


def test_L_is_right_congruence():
    S = build_monoid("T", 3)
    T, L = S.table, green(S).classes["L"]
    for x in range(len(S)):
        for y in np.flatnonzero(L == L[x]):
            assert np.array_equal(L[T[x]], L[T[y]])


def test_D_equals_J_and_preorders():
    S = build_monoid("PT", 2)
    G = green(S)
    assert np.array_equal(G.classes["D"], G.classes["J"])
    for M in (G.leq_L, G.leq_R, G.leq_J):
        assert M.diagonal().all()
        m = M.astype(int)
        assert not ((m @ m > 0) & ~M).any()
