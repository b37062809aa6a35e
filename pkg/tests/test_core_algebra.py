import io
import itertools

import numpy as np
import pytest

from conftest import T, el
from sgideals.errors import PreconditionError, SizeLimitError
from sgideals.rank import (idrank_exact, is_ideal_complement, rank_exact, relative_idrank, relative_rank,
                           structural_lower_bound)
from sgideals.semigroup import (FiniteSemigroup, SubSemigroup, closure, cyclic_group, domination, from_table,
                                generated, idempotent_generated, identity_elements, left_group_decomposition,
                                left_right_group_profile, left_zero_band, local_monoid,
                                local_monoid_surmorphism, mid_identity_checks, monogenic, opposite,
                                read_cayley_csv, regularity, right_zero_band, subsemigroup, write_cayley_csv)
from sgideals.transformations import build_monoid, compose, identity, parse_literal


def test_monogenic_two_elements():
    S = monogenic(2, 1)
    assert S.elements == (1, 2)
    assert S.mul(0, 0) == 1 and S.mul(1, 1) == 1  # a*a = a^2, a^2*a^2 = a^2


def test_monogenic_three_one_left_ideal():
    S = monogenic(3, 1)
    a = S.index_of(1)
    assert sorted(S.elements[i] for i in np.unique(S.table[:, a])) == [2, 3]


def test_monogenic_trivial():
    S = monogenic(1, 1)
    assert len(S) == 1 and S.is_monoid


def test_closure_identity_only():
    S = closure([identity(3)], compose)
    assert len(S) == 1


def test_closure_cycle_swap_constant_gives_constants_ideal():
    # constants form an ideal: the three listed maps only reach S_3 plus the constants
    gens = [parse_literal(s) for s in ("[2,3,1]", "[2,1,3]", "[1,1,1]")]
    assert len(closure(gens, compose)) == 9


def test_closure_cycle_swap_rank_two_gives_T3():
    gens = [parse_literal(s) for s in ("[2,3,1]", "[2,1,3]", "[1,1,3]")]
    S = closure(gens, compose)
    assert len(S) == 27 and S.is_associative()


def test_closure_cap():
    gens = [parse_literal(s) for s in ("[2,3,1]", "[2,1,3]", "[1,1,3]")]
    with pytest.raises(SizeLimitError):
        closure(gens, compose, cap=10)


def test_closure_is_idempotent():
    gens = [parse_literal(s) for s in ("[2,1,3,4]", "[1,1,3,4]")]
    S = closure(gens, compose)
    again = closure(list(S.elements), compose)
    assert set(again.elements) == set(S.elements)


def test_empty_generators_rejected():
    with pytest.raises(PreconditionError):
        closure([], compose)


def test_lazy_table_above_cap():
    gens = [parse_literal(s) for s in ("[2,3,1]", "[2,1,3]", "[1,1,3]")]
    S = closure(gens, compose, table_cap=5)
    assert not S.has_table
    with pytest.raises(SizeLimitError):
        S.table
    i, j = S.index_of(parse_literal("[1,1,3]")), S.index_of(parse_literal("[2,3,1]"))
    assert S.elements[S.mul(i, j)] == parse_literal("[2,2,1]")


def test_opposite_of_left_zero_is_right_zero():
    assert np.array_equal(opposite(left_zero_band(2)).table, right_zero_band(2).table)


def test_opposite_commutative_same_table():
    C = cyclic_group(4)
    assert np.array_equal(opposite(C).table, C.table)


def test_opposite_involution():
    S, _, _ = T(3)
    assert np.array_equal(opposite(opposite(S)).table, S.table)


def test_opposite_T2_swaps_L_and_R():
    from sgideals.green import green
    S = build_monoid("T", 2)
    G, Go = green(S), green(opposite(S))
    assert np.array_equal(G.classes["L"], Go.classes["R"])
    assert np.array_equal(G.classes["R"], Go.classes["L"])


def test_regularity_monogenic():
    S = monogenic(2, 1)
    reg = regularity(S)
    assert reg.idempotents == (1,) and reg.regular == (1,)


def test_regularity_group():
    reg = regularity(cyclic_group(5))
    assert reg.is_regular and reg.is_inverse


def test_regularity_T3():
    S, ctx, _ = T(3)
    assert len(ctx.reg.regular) == 27 and len(ctx.reg.idempotents) == 10


def test_idempotent_generated_semilattice():
    S = from_table([[0, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert len(idempotent_generated(S)) == 3


def test_idempotent_generated_T3():
    S, _, _ = T(3)
    IG = idempotent_generated(S)
    assert len(IG) == 22
    assert set(IG.members) == {i for i, f in enumerate(S.elements) if f.rank < 3} | {S.identity}


def test_idempotent_generated_monogenic():
    S = monogenic(2, 1)
    assert idempotent_generated(S).members == (1,)


def test_identity_elements_monogenic():
    S = monogenic(2, 1)
    ids = identity_elements(S)
    assert ids.MI == (0, 1)


def test_identity_elements_monoid():
    S, _, _ = T(3)
    ids = identity_elements(S)
    assert ids.RI == ids.LI == ids.MI == (S.identity,)


def test_identity_elements_left_zero_band():
    # xy = x: every element is a right identity and none is a left identity
    ids = identity_elements(left_zero_band(3))
    assert ids.RI == ids.MI == (0, 1, 2)
    assert ids.LI == ()


def test_domination_monoid():
    S, _, _ = T(3)
    d = domination(S)
    assert d.mi_dominated and d.ri_dominated and d.li_dominated


def test_domination_left_zero_band():
    d = domination(left_zero_band(2))
    assert d.ri_dominated and not d.li_dominated and d.mi_dominated


def test_domination_P_T4():
    S, ctx, _ = T(4)
    from sgideals.ideals import p_sets
    P = p_sets(S, el(S, "[1,2,1,1]"), ctx).P
    assert domination(S.restrict(P)).ri_dominated


def test_local_monoid_identity():
    S, _, _ = T(3)
    assert len(local_monoid(S, S.identity)) == 27


def test_local_monoid_T3_rank_two():
    S, _, _ = T(3)
    e = el(S, "[1,2,2]")
    L = local_monoid(S, e)
    assert len(L) == 4
    sub = L.as_semigroup()
    assert sub.is_monoid and sub.elements[sub.identity] == S.elements[e]


def test_local_monoid_monogenic():
    S = monogenic(3, 1)
    assert local_monoid(S, S.index_of(3)).members == (S.index_of(3),)


def test_mid_identity_checks_regular():
    S = left_zero_band(3)
    m = mid_identity_checks(S)
    assert m["mi_idempotent"] and m["mi_equals_ri"] and m["MSM_closed"] and m["local_monoids_isomorphic"]
    assert all(local_monoid_surmorphism(S, u) for u in identity_elements(S).MI)


def test_left_group_profiles():
    p = left_right_group_profile(left_zero_band(3))
    assert p.is_left_group and p.degree == 3 and len(p.group_part) == 1
    g = left_right_group_profile(cyclic_group(3))
    assert g.is_left_group and g.is_right_group and g.degree == 1


def test_left_group_over_S2_in_T4():
    from sgideals.ideals import hat_relations
    S, ctx, _ = T(4)
    a = el(S, "[1,2,1,1]")
    hat = hat_relations(S, a, ctx)
    ia = hat.P.index(a)
    members = [x for x, h in zip(hat.P, hat.hat["H"]) if h == hat.hat["H"][ia]]
    assert len(members) == 8
    sub = S.restrict(members)
    prof = left_right_group_profile(sub)
    assert prof.is_left_group and prof.degree == 4 and len(prof.group_part) == 2
    dec = left_group_decomposition(sub)
    assert len(set(dec.values())) == 8


def test_rank_left_zero_band():
    assert rank_exact(left_zero_band(3)).value == 3


def test_rank_T3_exhaustive():
    S, _, _ = T(3)
    c = rank_exact(S, method="exhaustive")
    assert c.value == 3 and c.lower_bound_kind == "exhaustive" and c.certified
    assert len(generated(S, c.witness)) == 27


def test_rank_T3_structural():
    S, _, _ = T(3)
    assert structural_lower_bound(S)[0] == 3
    assert rank_exact(S, method="structural").value == 3


def test_rank_P_T4():
    S, ctx, _ = T(4)
    from sgideals.ideals import p_sets
    P = SubSemigroup(S, p_sets(S, el(S, "[1,2,1,1]"), ctx).P)
    assert len(P) == 10
    c = rank_exact(P, method="exhaustive")
    assert c.value == 5 and c.certified


def test_relative_rank_T3_S3():
    S, _, _ = T(3)
    units = [i for i, f in enumerate(S.elements) if f.rank == 3]
    assert relative_rank(S, units).value == 1


def test_relative_rank_self():
    S = cyclic_group(4)
    assert relative_rank(S, range(4)).value == 0


def test_idrank_IG_T4():
    S, _, _ = T(4)
    c = idrank_exact(idempotent_generated(S))
    assert c.value == 7 and c.certified


def test_idrank_rejects_non_idempotent_generated():
    with pytest.raises(PreconditionError):
        idrank_exact(cyclic_group(3))


def test_ideal_decomposition_rank_sum():
    # T_3 minus S_3 is an ideal: rank = relrank(T_3 : S_3) + rank(S_3)
    S, _, _ = T(3)
    units = [i for i, f in enumerate(S.elements) if f.rank == 3]
    assert is_ideal_complement(S, units)
    G = SubSemigroup(S, tuple(units))
    assert rank_exact(S).value == relative_rank(S, units).value + rank_exact(G).value


def test_ideal_decomposition_idrank():
    # semilattice chain 0 < 1 < 2: removing the top leaves an ideal
    S = from_table([[0, 0, 0], [0, 1, 1], [0, 1, 2]])
    top = [2]
    assert is_ideal_complement(S, top)
    assert idrank_exact(S).value == relative_idrank(S, top).value + 1


def test_rank_certificate_witness_generates():
    S, _, _ = T(4)
    IG = idempotent_generated(S)
    c = rank_exact(IG)
    assert len(c.witness) == c.value
    assert tuple(generated(S, c.witness).tolist()) == IG.members


def test_cayley_roundtrip():
    S = cyclic_group(3)
    text = write_cayley_csv(S)
    assert text.splitlines()[0] == "n=3"
    back = read_cayley_csv(io.StringIO(text))
    assert np.array_equal(back.table, S.table)


@pytest.mark.parametrize("text, where", [
    ("n=2\n0,1\n1,x\n", "line 3, column 3"),
    ("m=2\n0,1\n1,0\n", "line 1, column 1"),
    ("n=2\n0,1\n", "line 3"),
    ("n=2\n0,5\n1,0\n", "line 2, column 3"),
])
def test_cayley_errors(text, where):
    with pytest.raises(ValueError) as e:
        read_cayley_csv(io.StringIO(text))
    assert where in str(e.value)


def test_cayley_non_associative():
    with pytest.raises(ValueError):
        read_cayley_csv(io.StringIO("n=2\n1,0\n0,0\n"))


def test_subsemigroup_of_T3():
    S, _, _ = T(3)
    sub = subsemigroup(S, [el(S, "[2,1,3]")])
    assert len(sub) == 2 and sub.is_closed()


def test_one_element_semigroup():
    S = from_table([[0]])
    assert S.is_monoid and rank_exact(S).value == 1 and regularity(S).is_inverse
