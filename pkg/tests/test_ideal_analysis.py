import numpy as np
import pytest

from conftest import I, T, el
from sgideals.errors import PreconditionError
from sgideals.ideals import (MI_NAMES, Context, analyze_left, dual_analysis, hat_relations, ideal_basics,
                             inverse_case_check, left_ideal, local_ideal, mid_identity_suite, p_sets, phi_map,
                             rank_bounds, regular_substitute, sandwich_profile, verify_green_in_ideal)
from sgideals.semigroup import cyclic_group, from_table, idempotents, monogenic, regularity
from sgideals.transformations import build_monoid


def payloads(S, idx):
    return sorted(S.elements[i] for i in idx)


# -- Sa and the P-sets

def test_left_ideal_monogenic():
    S = monogenic(3, 1)
    assert payloads(S, left_ideal(S, 0).members) == [2, 3]


def test_left_ideal_identity():
    S, _, _ = T(3)
    assert len(left_ideal(S, S.identity)) == 27


def test_left_ideal_T3():
    S, _, _ = T(3)
    assert len(left_ideal(S, el(S, "[1,2,2]"))) == 8


def test_p_sets_monogenic():
    S = monogenic(3, 1)
    ps = p_sets(S, 0)
    assert payloads(S, ps.P_dprime) == payloads(S, ps.P_tprime) == [3]


def test_p_sets_identity():
    S, ctx, _ = T(3)
    ps = p_sets(S, S.identity, ctx)
    assert ps.P == ps.P_prime == ps.P_dprime == ps.P_tprime == tuple(range(27))


def test_p_set_T3_saturation():
    S, ctx, _ = T(3)
    ps = p_sets(S, el(S, "[1,2,2]"), ctx)
    assert len(ps.P) == 6
    Sa = left_ideal(S, el(S, "[1,2,2]")).members
    by_def = [x for x in Sa if all(blk[0] in (0, 1) or any(p in (0, 1) for p in blk)
                                   for blk in S.elements[x].kernel.blocks)]
    assert list(ps.P) == by_def


# -- Green's relations inside Sa

@pytest.mark.parametrize("n", [2, 3])
def test_green_in_ideal_T_idempotents(n):
    S, ctx, _ = T(n)
    for a in idempotents(S):
        rep = verify_green_in_ideal(S, int(a), ctx)
        assert rep.ok, rep.counterexample
        assert rep.corollary_checked


@pytest.mark.parametrize("m, r", [(3, 1), (4, 1), (2, 2), (3, 2), (2, 3)])
def test_green_in_ideal_monogenic(m, r):
    S = monogenic(m, r)
    for a in range(len(S)):
        rep = verify_green_in_ideal(S, a)
        assert rep.ok, rep.counterexample


def test_green_in_ideal_identity():
    S, ctx, _ = T(3)
    assert verify_green_in_ideal(S, S.identity, ctx).ok


def test_green_in_ideal_non_idempotent_T3():
    S, ctx, _ = T(3)
    for a in range(len(S)):
        assert verify_green_in_ideal(S, a, ctx).ok


# -- sandwich regularity

def test_sandwich_regular_in_regular_semigroup():
    S, ctx, _ = T(3)
    assert all(sandwich_profile(S, a, ctx).sandwich_regular for a in range(len(S)))


def test_uniquely_sandwich_regular_I3():
    S, ctx, _ = I(3)
    for a in idempotents(S):
        prof = sandwich_profile(S, int(a), ctx)
        assert prof.uniquely_sandwich_regular and prof.equivalence_holds


def test_sandwich_regular_without_regular_a():
    S = monogenic(2, 1)
    prof = sandwich_profile(S, 0)
    assert prof.sandwich_regular is False  # a itself is not regular
    assert payloads(S, local_ideal(S, 0).members) == [2]
    assert set(local_ideal(S, 0).members) <= set(regularity(S).regular)


def test_sandwich_equivalences_T4():
    S, ctx, _ = T(4)
    for a in idempotents(S):
        assert sandwich_profile(S, int(a), ctx).equivalence_holds


# -- phi

def test_phi_identity():
    S, ctx, _ = T(3)
    phi = phi_map(S, S.identity, ctx)
    assert all(x == y for x, y in phi.image.items())


def test_phi_T4_idempotents():
    S, ctx, _ = T(4)
    phi = phi_map(S, el(S, "[1,2,1,1]"), ctx)
    assert len(phi.E_Sa) == len(phi.E_preimage) == 6
    assert phi.E_identity_holds and phi.IG_identity_holds


def test_phi_T3_image_is_T2():
    S, ctx, _ = T(3)
    phi = phi_map(S, el(S, "[1,2,2]"), ctx)
    assert len(phi.aSa) == 4 and phi.surjective and phi.multiplicative


def test_phi_needs_idempotent():
    S, ctx, _ = T(3)
    with pytest.raises(PreconditionError):
        phi_map(S, el(S, "[2,1,1]"), ctx)


# -- hats and inflation

def test_hat_identity_collapses():
    S, ctx, _ = T(3)
    hat = hat_relations(S, S.identity, ctx)
    assert hat.rho == 1 and hat.ok
    for K in ("L", "R", "H", "D", "J"):
        assert np.array_equal(hat.hat[K], hat.plain[K])


def test_hat_T4_left_group():
    S, ctx, _ = T(4)
    a = el(S, "[1,2,1,1]")
    hat = hat_relations(S, a, ctx)
    assert hat.rho == 4 and hat.ok
    top = max(hat.left_groups, key=lambda lg: lg["size"])
    assert top["degree"] == 4 and top["size"] == 8 and top["group_order"] == 2


def test_hat_T5_rank_two():
    S, ctx, _ = T(5)
    hat = hat_relations(S, el(S, "[1,2,3,3,3]"), ctx)
    ranks = {S.elements[x].rank: r for x, r in hat.r_values.items()}
    assert ranks[2] == 4 and ranks[3] == 9 and ranks[1] == 1
    assert hat.ok


# -- mid-identities

def test_mid_identities_monoid():
    S, ctx, _ = T(3)
    m = mid_identity_suite(S, S.identity, ctx)
    assert m.ok and m.common == (S.identity,)
    assert set(m.sets) == set(MI_NAMES)


def test_mid_identities_T4():
    S, ctx, _ = T(4)
    m = mid_identity_suite(S, el(S, "[1,2,1,1]"), ctx)
    assert m.ok and len(m.common) == 4


def test_mid_identities_I3():
    S, ctx, _ = I(3)
    a = el(S, "[1,2,-]")
    m = mid_identity_suite(S, a, ctx)
    assert m.ok and m.common == (a,)


# -- ranks

def test_rank_bounds_T4():
    S, ctx, _ = T(4)
    rb = rank_bounds(S, el(S, "[1,2,1,1]"), ctx)
    assert (rb.rho, rb.relrank_aSa_Ha, rb.rank_Ha) == (4, 1, 1)
    assert rb.bound_P == 5 and rb.rank_P.value == 5 and rb.ri_dominated
    assert rb.rank_E.value == rb.idrank_E.value == 6 == rb.bound_E
    assert rb.ok


def test_rank_bounds_identity_T3():
    S, ctx, _ = T(3)
    rb = rank_bounds(S, S.identity, ctx)
    assert rb.rho == 1 and rb.bound_P == rb.relrank_aSa_Ha + rb.rank_Ha == 3
    assert rb.ok


def test_rank_bounds_T3_rank_two():
    S, ctx, _ = T(3)
    rb = rank_bounds(S, el(S, "[1,2,2]"), ctx)
    assert rb.ok and rb.bound_P <= rb.rank_P.value


# -- inverse case

def test_inverse_I3():
    S, ctx, _ = I(3)
    v = inverse_case_check(S, el(S, "[1,2,-]"), ctx)
    assert v.applicable and v.ok and v.size == 7


def test_inverse_identity():
    S, ctx, _ = I(3)
    v = inverse_case_check(S, S.identity, ctx)
    assert v.ok and v.size == 34


def test_inverse_I4():
    S, ctx, _ = I(4)
    v = inverse_case_check(S, el(S, "[1,2,3,-]"), ctx)
    assert v.ok and v.size == 34


def test_inverse_not_applicable_in_T3():
    S, ctx, _ = T(3)
    assert not inverse_case_check(S, el(S, "[1,2,2]"), ctx).applicable


# -- full left analysis and duals

def test_analyze_left_regular_substitution():
    S, ctx, _ = T(3)
    a = el(S, "[2,1,1]")
    res = analyze_left(S, a, ctx)
    assert res.substitution is not None
    e = res.a_used
    assert S.mul(e, e) == e
    assert set(left_ideal(S, a).members) == set(res.Sa)
    assert not res.violations()


def test_regular_substitute_keeps_idempotent():
    S, ctx, _ = T(3)
    e = el(S, "[1,2,2]")
    assert regular_substitute(S, e, ctx) == (e, None)


def test_analyze_left_monogenic():
    S = monogenic(3, 1)
    res = analyze_left(S, 0)
    assert res.rho is None and not res.violations()


def test_dual_commutative_coincides():
    S = cyclic_group(4)
    ctx = Context(S)
    for a in range(4):
        left = analyze_left(S, a, ctx)
        right = dual_analysis(S, a, ctx)
        assert right.Q == left.P and right.lam == left.rho and right.direct_Q_matches


def test_dual_semilattice_coincides():
    S = from_table([[0, 0, 0], [0, 1, 0], [0, 0, 2]])
    for a in range(3):
        assert dual_analysis(S, a).Q == analyze_left(S, a).P


def test_dual_T5_lambda():
    S, ctx, opctx = T(5)
    a = el(S, "[1,2,2,4,4]")
    right = dual_analysis(S, a, ctx, op_ctx=opctx)
    assert right.direct_Q_matches and right.li_dominated
    f = el(S, "[2,2,2,4,4]")
    assert f in right.Q
    assert right.left.hat_relations.r_values[f] == 4


def test_dual_I3_mirrors_under_inverse():
    S, ctx, opctx = I(3)
    inv = [S.index_of(f.inverse()) for f in S.elements]
    for a in idempotents(S):
        a = int(a)
        left = analyze_left(S, a, ctx)
        right = dual_analysis(S, a, ctx, op_ctx=opctx)
        assert sorted(inv[x] for x in left.P) == sorted(right.Q)
        assert sorted(inv[x] for x in left.Sa) == sorted(right.aS)
        assert left.rho == right.lam == 1


# -- invariants over all idempotents

@pytest.mark.parametrize("kind, n", [("T", 3), ("T", 4), ("I", 3), ("PT", 2)])
def test_reg_Sa_formula_and_right_ideal(kind, n):
    S = build_monoid(kind, n)
    ctx = Context(S)
    regS = set(ctx.reg.regular)
    for a in idempotents(S):
        a = int(a)
        b = ideal_basics(S, a, ctx)
        P = set(p_sets(S, a, ctx).P)
        assert set(b.reg_Sa) == regS & P
        assert b.P_right_ideal and b.P_subset_Pprime and b.regular_gives_full


def test_leq_J_transfer_through_a():
    S, ctx, _ = T(4)
    a = el(S, "[1,2,1,1]")
    from sgideals.green import green
    P = list(p_sets(S, a, ctx).P)
    GP = green(S.restrict(P))
    aSa = list(local_ideal(S, a).members)
    GA = green(S.restrict(aSa))
    pos = {x: i for i, x in enumerate(aSa)}
    ax = [pos[S.mul(a, x)] for x in P]
    for i in range(len(P)):
        for j in range(len(P)):
            assert GP.leq_J[i, j] == GA.leq_J[ax[i], ax[j]]
            assert GP.leq_L[i, j] == GA.leq_L[ax[i], ax[j]]


def test_P_vs_Pprime_recorded():
    S, ctx, _ = T(4)
    seen = {ideal_basics(S, int(a), ctx).P_equals_Pprime for a in idempotents(S)}
    assert seen <= {True, False}


def test_analysis_T4_all_idempotents_clean():
    S, ctx, opctx = T(4)
    for a in idempotents(S):
        assert not analyze_left(S, int(a), ctx).violations()
        assert not dual_analysis(S, int(a), ctx, op_ctx=opctx).violations()
