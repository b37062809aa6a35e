import io
import itertools

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import T
from sgideals.families import FamilySpec, green_family_check, reg_predicates_check
from sgideals.green import green
from sgideals.ideals import hat_relations, ideal_basics, mid_identity_suite, p_sets, verify_green_in_ideal
from sgideals.rank import rank_exact, structural_lower_bound
from sgideals.semigroup import (closure, idempotents, opposite, read_cayley_csv, regularity,
                                write_cayley_csv)
from sgideals.transformations import (KernelPartition, PartialMap, Transformation, compose, format_literal,
                                      identity, parse_literal)


def transformations(n):
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(lambda xs: Transformation(tuple(xs)))


def partial_maps(n):
    return st.lists(st.integers(-1, n - 1), min_size=n, max_size=n).map(lambda xs: PartialMap(tuple(xs)))


small_semigroups = st.integers(2, 4).flatmap(
    lambda n: st.lists(transformations(n), min_size=1, max_size=3)).map(lambda gens: closure(gens, compose))


def partitions(n):
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(
        lambda lab: KernelPartition([[x for x in range(n) if lab[x] == c] for c in set(lab)]))


@given(transformations(4), transformations(4), transformations(4))
def test_compose_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(partial_maps(4))
def test_identity_two_sided(f):
    e = identity(4)
    assert compose(e, f) == f == compose(f, e)


@given(partial_maps(5))
def test_literal_roundtrip(f):
    assert parse_literal(format_literal(f), partial=True) == f


@given(partial_maps(4))
def test_rank_is_image_and_kernel_size(f):
    assert f.rank == len(f.image) == len(f.kernel)


@given(small_semigroups)
def test_closure_associative_and_closed(S):
    assert S.is_associative()
    again = closure(list(S.elements), compose)
    assert set(again.elements) == set(S.elements)


@given(small_semigroups)
def test_opposite_involution(S):
    assert np.array_equal(opposite(opposite(S)).table, S.table)


@given(small_semigroups)
def test_cayley_roundtrip(S):
    back = read_cayley_csv(io.StringIO(write_cayley_csv(S)))
    assert np.array_equal(back.table, S.table)


@given(small_semigroups)
def test_green_axioms(S):
    G = green(S)
    L, R, H, D = (G.classes[K] for K in "LRHD")
    T_ = S.table
    for x, y in itertools.combinations(range(len(S)), 2):
        assert (H[x] == H[y]) == (L[x] == L[y] and R[x] == R[y])
        if L[x] == L[y]:
            assert (L[T_[x]] == L[T_[y]]).all()        # right congruence
        if R[x] == R[y]:
            assert (R[T_[:, x]] == R[T_[:, y]]).all()  # left congruence
    assert np.array_equal(G.classes["D"], G.classes["J"])


@given(small_semigroups)
def test_opposite_swaps_L_and_R(S):
    G, Go = green(S), green(opposite(S))
    assert np.array_equal(G.classes["L"], Go.classes["R"])


@given(small_semigroups)
def test_regularity_definitions(S):
    reg = regularity(S)
    T_ = S.table
    for x in range(len(S)):
        assert (x in reg.regular) == any(T_[T_[x, y], x] == x for y in range(len(S)))
    assert set(reg.idempotents) <= set(reg.regular)


@given(small_semigroups, st.data())
def test_green_in_ideal_any_element(S, data):
    a = data.draw(st.integers(0, len(S) - 1))
    rep = verify_green_in_ideal(S, a)
    assert rep.ok, rep.counterexample
    b = ideal_basics(S, a)
    assert b.P_subset_Pprime and b.Pdprime_subset_Ptprime and b.Ptprime_subset_Sa and b.P_right_ideal
    assert b.reg_formula_holds


@given(small_semigroups)
def test_rank_at_least_structural_bound(S):
    assume(len(S) <= 30)
    c = rank_exact(S)
    assert c.value >= structural_lower_bound(S)[0]
    assert len(closure([S.elements[i] for i in c.witness], compose)) == len(S)


@given(st.sampled_from(range(41)))
def test_T4_idempotent_structure(k):
    S, ctx, _ = T(4)
    a = int(idempotents(S)[k])
    hat = hat_relations(S, a, ctx)
    assert hat.ok
    n, r = 4, S.elements[a].rank
    assert hat.rho == r ** (n - r)
    mi = mid_identity_suite(S, a, ctx)
    assert mi.ok and len(mi.common) == hat.rho
    assert set(ideal_basics(S, a, ctx).reg_Sa) == set(ctx.reg.regular) & set(p_sets(S, a, ctx).P)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), partitions(n))))
def test_family_predicates_and_green(args):
    n, alpha = args
    spec = FamilySpec(n, alpha=alpha)
    assert all(reg_predicates_check(spec).values())
    for fam in ("TXA", "TXalpha", "IXA"):
        res = green_family_check(spec, fam)
        assert all(v is None for k, v in res.items() if k != "DJ_verdict")


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1), min_size=1))))
def test_family_predicates_subsets(args):
    n, A = args
    assert all(reg_predicates_check(FamilySpec(n, A=tuple(A))).values())
