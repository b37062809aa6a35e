"""Principal one-sided ideals Sa and aS.

Everything here works with parent indices of S.  The right-hand side (aS)
is obtained by running the left-hand code on the opposite semigroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, PreconditionError
from .green import GreenStructure, green
from .rank import (DEFAULT_BUDGET, RankCertificate, group_rank, idrank_exact, is_ideal_complement,
                   rank_exact, relative_rank)
from .semigroup import (FiniteSemigroup, SubSemigroup, domination, generated, identity_elements,
                        left_right_group_profile, opposite, regularity)

RELATIONS = ("L", "R", "H", "D", "J")


class Context:
    """Green's structure and regularity of S, computed once and shared."""

    def __init__(self, S: FiniteSemigroup):
        self.S = S
        self.T = S.table
        self._green = None
        self._reg = None
        self._p_cache = {}

    @property
    def G(self) -> GreenStructure:
        if self._green is None:
            self._green = green(self.S)
        return self._green

    @property
    def reg(self):
        if self._reg is None:
            self._reg = regularity(self.S)
        return self._reg

    def mask(self, idx) -> np.ndarray:
        m = np.zeros(len(self.S), dtype=bool)
        m[np.asarray(list(idx), dtype=np.int64)] = True
        return m


def _ctx(S, ctx):
    if ctx is None:
        return Context(S)
    if ctx.S is not S:
        raise PreconditionError("context belongs to a different semigroup")
    return ctx


def _idx(mask: np.ndarray) -> tuple:
    return tuple(np.flatnonzero(mask).tolist())


def _check_element(S, a):
    if not 0 <= a < len(S):
        raise PreconditionError(f"{a} is not an element index of {S.name}")


def _finer(a: np.ndarray, b: np.ndarray) -> bool:
    """Partition given by labels ``a`` is contained in the one given by ``b``."""
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist()))


def _same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    return _finer(a, b) and _finer(b, a)


@dataclass
class Counterexample:
    x: int
    relation: str
    expected: tuple
    actual: tuple


# --- Sa and the P-sets -----------------------------------------------------

def left_ideal(S: FiniteSemigroup, a: int) -> SubSemigroup:
    """Sa = {xa : x in S}."""
    _check_element(S, a)
    return SubSemigroup(S, tuple(np.unique(S.table[:, a]).tolist()), name="Sa")


def right_ideal(S: FiniteSemigroup, a: int) -> SubSemigroup:
    _check_element(S, a)
    return SubSemigroup(S, tuple(np.unique(S.table[a]).tolist()), name="aS")


@dataclass(frozen=True)
class PSets:
    P: tuple
    P_prime: tuple
    P_dprime: tuple
    P_tprime: tuple


def _p_masks(S, a, ctx) -> tuple:
    if a in ctx._p_cache:
        return ctx._p_cache[a]
    T = ctx.T
    G = ctx.G
    N = len(S)
    Sa_idx = np.unique(T[:, a])
    Sa = ctx.mask(Sa_idx)
    ax = T[a]
    L, J = G.classes["L"], G.classes["J"]
    P = Sa & (L == L[ax])
    P1 = Sa & (J == J[ax])
    # only x in Sa matter: xSa[i, s] = (x_i s)a
    xSa = T[T[Sa_idx], a]
    P2 = np.zeros(N, dtype=bool)
    P2[Sa_idx] = (xSa == Sa_idx[:, None]).any(axis=1)
    # x in S^1 (xSa): x <=_L w for some w in xSa
    P3 = np.zeros(N, dtype=bool)
    P3[Sa_idx] = G.leq_L[Sa_idx[:, None], xSa].any(axis=1)
    out = (Sa, P, P1, P2, P3)
    for m in out:
        m.setflags(write=False)
    ctx._p_cache[a] = out
    return out


def p_sets(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> PSets:
    """P = {x in Sa : x L ax}, P' (J instead of L), P'' = {x : x in xSa},
    P''' = {x : x in S^1 x Sa}."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    _, P, P1, P2, P3 = _p_masks(S, a, ctx)
    return PSets(_idx(P), _idx(P1), _idx(P2), _idx(P3))


# --- Green's relations on Sa ----------------------------------------------

@dataclass
class GreenIdealReport:
    a: int
    size: int
    checked: dict            # relation -> number of x checked
    corollary_checked: bool
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def formula_classes(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> dict:
    """K^a-class of every x in Sa predicted from the classes of S and the P-sets.

    Returns {K: {x: sorted tuple}}.
    """
    ctx = _ctx(S, ctx)
    Sa, P, P1, P2, P3 = _p_masks(S, a, ctx)
    C = ctx.G.classes
    out = {K: {} for K in RELATIONS}
    for x in np.flatnonzero(Sa):
        x = int(x)
        single = (x,)
        Lx = _idx((C["L"] == C["L"][x]) & P) if P[x] else single
        Rx = _idx((C["R"] == C["R"][x]) & P2) if P2[x] else single
        Hx = _idx(C["H"] == C["H"][x]) if (P[x] and P2[x]) else single
        if P[x] and P2[x]:
            Dx = _idx((C["D"] == C["D"][x]) & P & P2)
        elif not P[x]:
            Dx = Rx
        else:
            Dx = Lx
        Jx = _idx((C["J"] == C["J"][x]) & P1 & P3) if (P1[x] and P3[x]) else Dx
        for K, v in zip(RELATIONS, (Lx, Rx, Hx, Dx, Jx)):
            out[K][x] = v
    return out


def corollary_classes(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> dict:
    """The simplified forms valid for regular a."""
    ctx = _ctx(S, ctx)
    Sa, P, P1, _, _ = _p_masks(S, a, ctx)
    C = ctx.G.classes
    out = {K: {} for K in RELATIONS}
    for x in np.flatnonzero(Sa):
        x = int(x)
        Lx = _idx((C["L"] == C["L"][x]) & P) if P[x] else (x,)
        Rx = _idx((C["R"] == C["R"][x]) & Sa)
        Hx = _idx(C["H"] == C["H"][x]) if P[x] else (x,)
        Dx = _idx((C["D"] == C["D"][x]) & P) if P[x] else Rx
        Jx = _idx((C["J"] == C["J"][x]) & P1) if P1[x] else Rx
        for K, v in zip(RELATIONS, (Lx, Rx, Hx, Dx, Jx)):
            out[K][x] = v
    return out


def direct_classes(S: FiniteSemigroup, members) -> dict:
    """K-classes of the standalone subsemigroup on ``members``, in parent indices."""
    members = np.asarray(sorted(members), dtype=np.int64)
    sub = S.restrict(members)
    Gs = green(sub)
    out = {}
    for K in RELATIONS:
        lab = Gs.classes[K]
        out[K] = {int(members[i]): tuple(members[lab == lab[i]].tolist()) for i in range(len(members))}
    return out


def verify_green_in_ideal(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> GreenIdealReport:
    """Compare the case-split description of Green's classes of Sa with a
    direct computation on Sa as a semigroup in its own right."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    Sa = left_ideal(S, a)
    direct = direct_classes(S, Sa.members)
    predicted = formula_classes(S, a, ctx)
    checked = {K: 0 for K in RELATIONS}
    report = GreenIdealReport(a, len(Sa), checked, False)
    for x in Sa.members:
        for K in RELATIONS:
            checked[K] += 1
            if predicted[K][x] != direct[K][x]:
                report.counterexample = Counterexample(x, K, predicted[K][x], direct[K][x])
                return report
    if a in ctx.reg.regular:
        cor = corollary_classes(S, a, ctx)
        for x in Sa.members:
            for K in RELATIONS:
                if cor[K][x] != direct[K][x]:
                    report.counterexample = Counterexample(x, K + "(regular form)", cor[K][x], direct[K][x])
                    return report
        report.corollary_checked = True
    return report


@dataclass
class IdealBasics:
    """Checks that need no assumption on a."""
    P_subset_Pprime: bool
    Pdprime_subset_Ptprime: bool
    Ptprime_subset_Sa: bool
    regular_gives_full: bool | None
    P_right_ideal: bool
    reg_Sa: tuple
    reg_formula_holds: bool
    P_equals_Pprime: bool


def ideal_basics(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> IdealBasics:
    ctx = _ctx(S, ctx)
    if ("basics", a) in ctx._p_cache:
        return ctx._p_cache[("basics", a)]
    ctx._p_cache[("basics", a)] = out = _ideal_basics(S, a, ctx)
    return out


def _ideal_basics(S, a, ctx) -> IdealBasics:
    T = ctx.T
    Sa, P, P1, P2, P3 = _p_masks(S, a, ctx)
    regS = ctx.mask(ctx.reg.regular) if ctx.reg.regular else np.zeros(len(S), dtype=bool)
    full = None
    if a in ctx.reg.regular:
        full = bool(np.array_equal(P2, Sa) and np.array_equal(P3, Sa))
    Pi = np.flatnonzero(P)
    Sai = np.flatnonzero(Sa)
    right_ideal_ok = bool(P[T[np.ix_(Pi, Sai)]].all()) if len(Pi) else True
    sub = S.restrict(Sai)
    reg_local = regularity(sub).regular
    reg_Sa = tuple(int(Sai[i]) for i in reg_local)
    return IdealBasics(
        P_subset_Pprime=bool((~P | P1).all()),
        Pdprime_subset_Ptprime=bool((~P2 | P3).all()),
        Ptprime_subset_Sa=bool((~P3 | Sa).all()),
        regular_gives_full=full,
        P_right_ideal=right_ideal_ok,
        reg_Sa=reg_Sa,
        reg_formula_holds=set(reg_Sa) == set(_idx(regS & P)),
        P_equals_Pprime=bool(np.array_equal(P, P1)),
    )


# --- sandwich regularity ---------------------------------------------------

@dataclass
class SandwichProfile:
    a: int
    sandwich_regular: bool
    uniquely_sandwich_regular: bool
    reg_Sa: tuple
    equivalences: dict | None      # (a)-(d) for idempotent a

    @property
    def equivalence_holds(self) -> bool | None:
        if self.equivalences is None:
            return None
        return len(set(self.equivalences.values())) == 1


def local_ideal(S: FiniteSemigroup, a: int) -> SubSemigroup:
    """aSa = {axa : x in S}."""
    T = S.table
    return SubSemigroup(S, tuple(np.unique(T[T[a], a]).tolist()), name="aSa")


def sandwich_profile(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> SandwichProfile:
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    T = ctx.T
    reg = ctx.reg
    regS = ctx.mask(reg.regular) if reg.regular else np.zeros(len(S), dtype=bool)
    aSa = np.asarray(local_ideal(S, a).members)
    sandwich = bool(regS[a] and regS[aSa].all())
    nV = reg.inverse_matrix.sum(axis=1)
    unique = bool(sandwich and nV[a] == 1 and (nV[aSa] == 1).all())
    basics = ideal_basics(S, a, ctx)
    eq = None
    if T[a, a] == a:
        _, P, _, _, _ = _p_masks(S, a, ctx)
        sub = S.restrict(aSa)
        eq = {
            "aSa_in_RegS": bool(regS[aSa].all()),
            "P_in_RegS": bool(regS[P].all()),
            "RegSa_equals_P": set(basics.reg_Sa) == set(_idx(P)),
            "aSa_regular_monoid": regularity(sub).is_regular,
        }
    return SandwichProfile(a, sandwich, unique, basics.reg_Sa, eq)


def _require_sandwich_idempotent(S, a, ctx):
    T = ctx.T
    if T[a, a] != a:
        raise PreconditionError(f"element {a} is not idempotent")
    prof = sandwich_profile(S, a, ctx)
    if not prof.sandwich_regular:
        raise PreconditionError(f"element {a} is not sandwich-regular")
    return prof


# --- phi -------------------------------------------------------------------

@dataclass
class PhiMap:
    a: int
    P: tuple
    aSa: tuple
    image: dict                  # x -> ax for x in P
    surjective: bool
    multiplicative: bool
    E_Sa: tuple
    E_preimage: tuple
    IG_Sa: tuple
    IG_preimage: tuple

    def preimage(self, ys) -> tuple:
        ys = set(ys)
        return tuple(sorted(x for x, y in self.image.items() if y in ys))

    @property
    def E_identity_holds(self) -> bool:
        return self.E_Sa == self.E_preimage

    @property
    def IG_identity_holds(self) -> bool:
        return self.IG_Sa == self.IG_preimage


def phi_map(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> PhiMap:
    """phi: P -> aSa, x -> ax, with the idempotent preimage identities."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    _require_sandwich_idempotent(S, a, ctx)
    T = ctx.T
    _, Pm, _, _, _ = _p_masks(S, a, ctx)
    P = np.flatnonzero(Pm)
    aSa = np.asarray(local_ideal(S, a).members)
    img = T[a, P]
    image = {int(x): int(y) for x, y in zip(P, img)}
    surj = set(img.tolist()) == set(aSa.tolist())
    prod = T[np.ix_(P, P)]
    mult = bool(np.array_equal(T[a, prod], T[img[:, None], img[None, :]]))
    if not (surj and mult):
        raise InvariantViolation("phi is not a surmorphism onto aSa")
    Sa = left_ideal(S, a)
    E_all = set(ctx.reg.idempotents)
    E_Sa = tuple(sorted(x for x in Sa.members if x in E_all))
    E_aSa = {int(y) for y in aSa if int(y) in E_all}
    E_pre = tuple(sorted(x for x, y in image.items() if y in E_aSa))
    ig_sa = tuple(generated(S, E_Sa).tolist()) if E_Sa else ()
    E_aSa_sorted = sorted(E_aSa)
    ig_asa = set(generated(S, E_aSa_sorted).tolist()) if E_aSa_sorted else set()
    ig_pre = tuple(sorted(x for x, y in image.items() if y in ig_asa))
    return PhiMap(a, tuple(P.tolist()), tuple(aSa.tolist()), image, surj, mult, E_Sa, E_pre, ig_sa, ig_pre)


# --- hat relations and inflation ------------------------------------------

@dataclass
class HatRelations:
    a: int
    P: tuple
    hat: dict                    # K -> labels over P (aligned with P)
    plain: dict                  # Green's relations of P itself
    containments: dict           # name -> bool
    rho: int
    r_values: dict               # x -> |R^_x / R^a|
    left_groups: list            # per group H^-class: dict with degree, order, checks
    h_bijections: bool

    @property
    def ok(self) -> bool:
        return all(self.containments.values()) and self.h_bijections and all(
            lg["is_left_group"] and lg["degree_matches"] and lg["band_ok"] and lg["order_matches"]
            for lg in self.left_groups)


def hat_relations(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> HatRelations:
    """K^ = {(x, y) in P x P : (ax, ay) in K of aSa}, with the inflation checks."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    _require_sandwich_idempotent(S, a, ctx)
    T = ctx.T
    _, Pm, _, _, _ = _p_masks(S, a, ctx)
    P = np.flatnonzero(Pm)
    posP = {int(x): i for i, x in enumerate(P)}
    aSa = np.asarray(local_ideal(S, a).members)
    posA = {int(x): i for i, x in enumerate(aSa)}
    GP = green(S.restrict(P))
    GA = green(S.restrict(aSa))
    phi_local = np.array([posA[int(T[a, x])] for x in P])
    hat = {K: GA.classes[K][phi_local] for K in RELATIONS}
    plain = {K: GP.classes[K] for K in RELATIONS}
    c = {
        "L_hat_eq_L": _same_partition(hat["L"], plain["L"]),
        "R_sub_R_hat": _finer(plain["R"], hat["R"]),
        "R_hat_sub_D": _finer(hat["R"], plain["D"]),
        "H_sub_H_hat": _finer(plain["H"], hat["H"]),
        "H_hat_sub_D": _finer(hat["H"], plain["D"]),
        "D_hat_eq_D": _same_partition(hat["D"], plain["D"]),
        "D_sub_J_hat": _finer(plain["D"], hat["J"]),
        "J_hat_eq_JP": _same_partition(hat["J"], plain["J"]),
        "JP_eq_D": _same_partition(plain["J"], plain["D"]),
        # x <= y in P iff ax <= ay in aSa, for L and J
        "leq_L_transfer": bool(np.array_equal(GP.leq_L, GA.leq_L[np.ix_(phi_local, phi_local)])),
        "leq_J_transfer": bool(np.array_equal(GP.leq_J, GA.leq_J[np.ix_(phi_local, phi_local)])),
    }

    def r_of(i):
        members = hat["R"] == hat["R"][i]
        return len(set(plain["R"][members].tolist()))

    r_values = {int(x): r_of(i) for i, x in enumerate(P)}
    rho = r_values[int(a)]

    # phi restricted to each H-class is a bijection onto the H-class of aSa
    h_ok = True
    for hid in set(plain["H"].tolist()):
        idx = np.flatnonzero(plain["H"] == hid)
        targets = phi_local[idx]
        cls = np.flatnonzero(GA.classes["H"] == GA.classes["H"][targets[0]])
        if sorted(targets.tolist()) != sorted(cls.tolist()):
            h_ok = False

    E = set(ctx.reg.idempotents)
    left_groups = []
    for hid in sorted(set(hat["H"].tolist())):
        idx = np.flatnonzero(hat["H"] == hid)
        members = P[idx]
        if not any(int(x) in E for x in members):
            continue
        x0 = int(members[0])
        hx = np.flatnonzero(plain["H"] == plain["H"][idx[0]])
        r = r_values[x0]
        closed = bool(np.isin(T[np.ix_(members, members)], members).all())
        entry = {"rep": x0, "degree": r, "size": len(members), "group_order": len(hx),
                 "is_left_group": False, "degree_matches": False, "band_ok": False,
                 "order_matches": False}
        if closed:
            sub = S.restrict(members)
            prof = left_right_group_profile(sub)
            entry["is_left_group"] = prof.is_left_group
            entry["degree_matches"] = prof.degree == r
            entry["order_matches"] = prof.group_part is not None and len(prof.group_part) == len(hx)
            Eh = [int(x) for x in members if int(x) in E]
            entry["band_ok"] = len(Eh) == r and all(T[e, f] == e for e in Eh for f in Eh)
        left_groups.append(entry)
    return HatRelations(a, tuple(P.tolist()), hat, plain, c, rho, r_values, left_groups, h_ok)


# --- mid-identities --------------------------------------------------------

@dataclass
class MidIdentitySuite:
    sets: dict
    common: tuple | None
    counterexample: tuple | None     # (name1, name2) of the first unequal pair

    @property
    def ok(self) -> bool:
        return self.counterexample is None


MI_NAMES = ("MI(Sa)", "RI(Sa)", "MI(P)", "RI(P)", "V_P(a)", "V(a)∩P", "V(a)∩Sa", "V(a)a", "E(H^_a)",
            "aφ⁻¹")


def mid_identity_suite(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> MidIdentitySuite:
    """The ten descriptions of the right identities of P, each from its definition."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    _require_sandwich_idempotent(S, a, ctx)
    T = ctx.T
    Sa = np.asarray(left_ideal(S, a).members)
    _, Pm, _, _, _ = _p_masks(S, a, ctx)
    P = np.flatnonzero(Pm)
    ids_Sa = identity_elements(S.restrict(Sa))
    ids_P = identity_elements(S.restrict(P))
    V = ctx.reg.inverse_matrix
    Va = np.flatnonzero(V[a])
    # inverses of a computed inside P only
    sub = S.restrict(P)
    posP = {int(x): i for i, x in enumerate(P)}
    VP = regularity(sub).inverse_matrix[posP[int(a)]]
    hat = hat_relations(S, a, ctx)
    ia = posP[int(a)]
    Hhat_a = P[hat.hat["H"] == hat.hat["H"][ia]]
    E = set(ctx.reg.idempotents)
    sets = {
        "MI(Sa)": tuple(int(Sa[i]) for i in ids_Sa.MI),
        "RI(Sa)": tuple(int(Sa[i]) for i in ids_Sa.RI),
        "MI(P)": tuple(int(P[i]) for i in ids_P.MI),
        "RI(P)": tuple(int(P[i]) for i in ids_P.RI),
        "V_P(a)": tuple(int(P[i]) for i in np.flatnonzero(VP)),
        "V(a)∩P": tuple(int(v) for v in Va if Pm[v]),
        "V(a)∩Sa": tuple(int(v) for v in Va if v in set(Sa.tolist())),
        "V(a)a": tuple(sorted(set(int(T[v, a]) for v in Va))),
        "E(H^_a)": tuple(sorted(int(x) for x in Hhat_a if int(x) in E)),
        "aφ⁻¹": tuple(int(x) for x in P if T[a, x] == a),
    }
    sets = {k: tuple(sorted(v)) for k, v in sets.items()}
    first = sets[MI_NAMES[0]]
    for name in MI_NAMES[1:]:
        if sets[name] != first:
            return MidIdentitySuite(sets, None, (MI_NAMES[0], name))
    return MidIdentitySuite(sets, first, None)


# --- ranks -----------------------------------------------------------------

@dataclass
class RankBounds:
    rho: int
    relrank_aSa_Ha: int | None
    rank_Ha: int
    bound_P: int | None
    bound_E: int
    bound_E_idrank: int
    ri_dominated: bool
    rank_P: RankCertificate | None
    rank_E: RankCertificate | None
    idrank_E: RankCertificate | None
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.verdicts.values())


def rank_bounds(S: FiniteSemigroup, a: int, ctx: Context | None = None, budget: int = DEFAULT_BUDGET,
                exact: bool = True) -> RankBounds:
    """Lower bounds on rank(P), rank(IG(Sa)), idrank(IG(Sa)) from aSa and rho.

    With ``exact`` the true values are also computed and compared.
    """
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    _require_sandwich_idempotent(S, a, ctx)
    T = ctx.T
    hat = hat_relations(S, a, ctx)
    rho = hat.rho
    aSa_sub = local_ideal(S, a)
    aSa = np.asarray(aSa_sub.members)
    Ha = ctx.G.members("H", a)
    Ha_sorted = tuple(sorted(Ha.tolist()))
    rank_Ha = group_rank(S.restrict(Ha_sorted))
    ideal_ok = is_ideal_complement(aSa_sub, Ha_sorted)
    relrank = relative_rank(aSa_sub, Ha_sorted, budget).value if ideal_ok else None
    bound_P = relrank + max(rho, rank_Ha) if ideal_ok else None

    E_all = sorted(set(ctx.reg.idempotents) & set(aSa.tolist()))
    IG_aSa = SubSemigroup(S, tuple(generated(S, E_all).tolist()), name="IG(aSa)")
    rE = rank_exact(IG_aSa, budget)
    iE = idrank_exact(IG_aSa, budget)
    bound_E = rE.value + rho - 1
    bound_Ei = iE.value + rho - 1

    _, Pm, _, _, _ = _p_masks(S, a, ctx)
    P = np.flatnonzero(Pm)
    P_sub = SubSemigroup(S, tuple(P.tolist()), name="P")
    ri = domination(S.restrict(P)).ri_dominated
    verdicts = {}
    # T = G_U phi^-1 is a left group of degree rho over G_U, for U = aSa and U = IG(aSa)
    verdicts["UW_left_group_aSa"] = _preimage_left_group(S, a, P, Ha_sorted, rho) if ideal_ok else None
    verdicts["UW_left_group_IG"] = _preimage_left_group(S, a, P, (a,), rho)
    # singular case: IG(Sa) = E(H^_a) ∪ (P ∖ H^_a)
    singular = set(IG_aSa.members) == ({a} | (set(aSa.tolist()) - set(Ha_sorted)))
    phi = phi_map(S, a, ctx)
    if singular:
        ia = hat.P.index(a)
        hh = {int(x) for x, h in zip(hat.P, hat.hat["H"]) if h == hat.hat["H"][ia]}
        E = set(ctx.reg.idempotents)
        predicted = {x for x in hh if x in E} | (set(hat.P) - hh)
        verdicts["singular_IG"] = predicted == set(phi.IG_Sa)
    rank_P = rank_E = idrank_E = None
    if exact:
        IG_Sa = SubSemigroup(S, phi.IG_Sa, name="IG(Sa)")
        rank_P = rank_exact(P_sub, budget)
        rank_E = rank_exact(IG_Sa, budget)
        idrank_E = idrank_exact(IG_Sa, budget)
        if bound_P is not None:
            verdicts["rank_P_ge_bound"] = rank_P.value >= bound_P or rank_P.budget_exhausted
            if ri:
                verdicts["rank_P_eq_bound"] = rank_P.value == bound_P
        verdicts["rank_E_ge_bound"] = rank_E.value >= bound_E or rank_E.budget_exhausted
        verdicts["idrank_E_ge_bound"] = idrank_E.value >= bound_Ei or idrank_E.budget_exhausted
        if ri:
            verdicts["rank_E_eq_bound"] = rank_E.value == bound_E
            verdicts["idrank_E_eq_bound"] = idrank_E.value == bound_Ei
    return RankBounds(rho, relrank, rank_Ha, bound_P, bound_E, bound_Ei, ri, rank_P, rank_E, idrank_E, verdicts)


def _preimage_left_group(S, a, P, G_U, rho) -> bool:
    T = S.table
    G_U = set(G_U)
    members = [int(x) for x in P if int(T[a, x]) in G_U]
    if not np.isin(T[np.ix_(members, members)], members).all():
        return False
    prof = left_right_group_profile(S.restrict(members))
    return prof.is_left_group and prof.degree == rho and len(prof.group_part) == len(G_U)


# --- inverse case ----------------------------------------------------------

@dataclass
class InverseVerdict:
    applicable: bool
    P_equals_aSa: bool | None = None
    inverse: bool | None = None
    size: int | None = None

    @property
    def ok(self) -> bool:
        return not self.applicable or bool(self.P_equals_aSa and self.inverse)


def inverse_case_check(S: FiniteSemigroup, a: int, ctx: Context | None = None) -> InverseVerdict:
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    if ctx.T[a, a] != a:
        return InverseVerdict(False)
    prof = sandwich_profile(S, a, ctx)
    if not prof.uniquely_sandwich_regular:
        return InverseVerdict(False)
    _, Pm, _, _, _ = _p_masks(S, a, ctx)
    P = np.flatnonzero(Pm)
    aSa = set(local_ideal(S, a).members)
    sub = S.restrict(P)
    V = regularity(sub).inverse_matrix
    return InverseVerdict(True, set(P.tolist()) == aSa, bool((V.sum(axis=1) == 1).all()), len(P))


# --- full analyses ---------------------------------------------------------

@dataclass
class LeftIdealAnalysis:
    a: int
    a_used: int                      # idempotent substituted for a regular a
    substitution: str | None
    Sa: tuple
    P: tuple
    P_prime: tuple
    P_dprime: tuple
    P_tprime: tuple
    reg_Sa: tuple
    aSa: tuple | None
    phi: dict | None
    hat: dict | None
    rho: int | None
    identity_sets: dict | None
    sandwich_regular: bool
    uniquely_sandwich_regular: bool
    ri_dominated: bool | None
    green_report: GreenIdealReport
    basics: IdealBasics
    sandwich: SandwichProfile
    hat_relations: HatRelations | None = None
    mid_identities: MidIdentitySuite | None = None
    phi_map: PhiMap | None = None
    rank_bounds: RankBounds | None = None
    inverse: InverseVerdict | None = None

    def violations(self) -> list:
        out = []
        if not self.green_report.ok:
            out.append(("green_in_ideal", self.green_report.counterexample))
        b = self.basics
        for name in ("P_subset_Pprime", "Pdprime_subset_Ptprime", "Ptprime_subset_Sa", "P_right_ideal",
                     "reg_formula_holds"):
            if not getattr(b, name):
                out.append((name, None))
        if b.regular_gives_full is False:
            out.append(("regular_gives_full", None))
        if self.sandwich.equivalence_holds is False:
            out.append(("sandwich_equivalence", self.sandwich.equivalences))
        if self.phi_map is not None:
            if not self.phi_map.E_identity_holds:
                out.append(("E_preimage", None))
            if not self.phi_map.IG_identity_holds:
                out.append(("IG_preimage", None))
        if self.hat_relations is not None and not self.hat_relations.ok:
            out.append(("hat_relations", self.hat_relations.containments))
        if self.mid_identities is not None and not self.mid_identities.ok:
            out.append(("mid_identities", self.mid_identities.counterexample))
        if self.rank_bounds is not None and not self.rank_bounds.ok:
            out.append(("rank_bounds", self.rank_bounds.verdicts))
        if self.inverse is not None and not self.inverse.ok:
            out.append(("inverse_case", None))
        return out


def regular_substitute(S: FiniteSemigroup, a: int, ctx: Context) -> tuple:
    """For regular a, the idempotent e = ba (least b with a = aba) with Sa = Se."""
    T = ctx.T
    if T[a, a] == a or a not in set(ctx.reg.regular):
        return a, None
    b = int(np.flatnonzero(T[T[a], a] == a)[0])
    e = int(T[b, a])
    if set(np.unique(T[:, a]).tolist()) != set(np.unique(T[:, e]).tolist()):
        raise InvariantViolation("Sa differs from Se after substitution")
    return e, f"a={a} replaced by e=ba={e} with b={b}"


def analyze_left(S: FiniteSemigroup, a: int, ctx: Context | None = None, ranks: bool = False,
                 budget: int = DEFAULT_BUDGET) -> LeftIdealAnalysis:
    """Everything about Sa.  Rank computations only when ``ranks`` is set."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    e, note = regular_substitute(S, a, ctx)
    ps = p_sets(S, e, ctx)
    report = verify_green_in_ideal(S, e, ctx)
    basics = ideal_basics(S, e, ctx)
    sand = sandwich_profile(S, e, ctx)
    out = LeftIdealAnalysis(
        a=a, a_used=e, substitution=note, Sa=left_ideal(S, e).members, P=ps.P, P_prime=ps.P_prime,
        P_dprime=ps.P_dprime, P_tprime=ps.P_tprime, reg_Sa=basics.reg_Sa, aSa=None, phi=None, hat=None,
        rho=None, identity_sets=None, sandwich_regular=sand.sandwich_regular,
        uniquely_sandwich_regular=sand.uniquely_sandwich_regular, ri_dominated=None,
        green_report=report, basics=basics, sandwich=sand)
    if ctx.T[e, e] == e and sand.sandwich_regular:
        out.aSa = local_ideal(S, e).members
        out.phi_map = phi_map(S, e, ctx)
        out.phi = out.phi_map.image
        out.hat_relations = hat_relations(S, e, ctx)
        out.hat = out.hat_relations.hat
        out.rho = out.hat_relations.rho
        out.mid_identities = mid_identity_suite(S, e, ctx)
        out.identity_sets = out.mid_identities.sets
        out.ri_dominated = domination(S.restrict(ps.P)).ri_dominated
        out.inverse = inverse_case_check(S, e, ctx)
        if ranks:
            out.rank_bounds = rank_bounds(S, e, ctx, budget)
    return out


@dataclass
class RightIdealAnalysis:
    """Mirror of LeftIdealAnalysis: Q-sets, psi, lambda, LI-domination."""
    a: int
    a_used: int
    substitution: str | None
    aS: tuple
    Q: tuple
    Q_prime: tuple
    Q_dprime: tuple
    Q_tprime: tuple
    reg_aS: tuple
    aSa: tuple | None
    psi: dict | None
    hat: dict | None
    lam: int | None
    identity_sets: dict | None
    sandwich_regular: bool
    uniquely_sandwich_regular: bool
    li_dominated: bool | None
    left: LeftIdealAnalysis          # the analysis of S^op a it was derived from
    direct_Q_matches: bool

    def violations(self) -> list:
        out = self.left.violations()
        if not self.direct_Q_matches:
            out.append(("direct_Q", None))
        return out


_DUAL_NAMES = {"MI(Sa)": "MI(aS)", "RI(Sa)": "LI(aS)", "MI(P)": "MI(Q)", "RI(P)": "LI(Q)",
               "V_P(a)": "V_Q(a)", "V(a)∩P": "V(a)∩Q", "V(a)∩Sa": "V(a)∩aS", "V(a)a": "aV(a)",
               "E(H^_a)": "E(H^_a)", "aφ⁻¹": "aψ⁻¹"}


def dual_analysis(S: FiniteSemigroup, a: int, ctx: Context | None = None, ranks: bool = False,
                  budget: int = DEFAULT_BUDGET, op_ctx: Context | None = None) -> RightIdealAnalysis:
    """aS-side analysis via S^op (where aS becomes S^op a)."""
    _check_element(S, a)
    ctx = _ctx(S, ctx)
    Sop = op_ctx.S if op_ctx is not None else opposite(S)
    left = analyze_left(Sop, a, op_ctx, ranks=ranks, budget=budget)
    T = ctx.T
    # Q = {x in aS : x R xa}, directly in S
    R = ctx.G.classes["R"]
    xa = T[:, left.a_used]
    aS_used = ctx.mask(np.unique(T[left.a_used]))
    Q_direct = _idx(aS_used & (R == R[xa]))
    ids = None
    if left.identity_sets is not None:
        ids = {_DUAL_NAMES[k]: v for k, v in left.identity_sets.items()}
    li = None
    if left.ri_dominated is not None:
        li = domination(S.restrict(left.P)).li_dominated
    return RightIdealAnalysis(
        a=a, a_used=left.a_used, substitution=left.substitution, aS=left.Sa, Q=left.P,
        Q_prime=left.P_prime, Q_dprime=left.P_dprime, Q_tprime=left.P_tprime, reg_aS=left.reg_Sa,
        aSa=left.aSa, psi=left.phi, hat=left.hat, lam=left.rho, identity_sets=ids,
        sandwich_regular=left.sandwich_regular, uniquely_sandwich_regular=left.uniquely_sandwich_regular,
        li_dominated=li, left=left, direct_Q_matches=Q_direct == left.P)
