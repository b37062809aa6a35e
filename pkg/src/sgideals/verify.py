"""Verification suites over transformation fixtures.

``quick`` is a smoke run; ``paper`` runs every cross-check of the library
on T_n, I_n and the restricted families up to ``max_n``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .families import (FAMILIES, FamilySpec, _engine, domination_check, green_family_check, ig_check,
                       inflation_check, inverse_family_check, one_sided_identities, partition_fixtures,
                       rank_formulas, reg_family, reg_predicates_check, size_formulas, subset_fixtures,
                       transversal_independence)
from .green import classes_equal, green
from .ideals import analyze_left, dual_analysis, ideal_basics, p_sets, verify_green_in_ideal
from .rank import DEFAULT_BUDGET
from .semigroup import idempotents, monogenic
from .transformations import (KernelPartition, build_monoid, dclass_combinatorics, format_literal,
                              formula_labels, ig_TX_check)

SUITES = ("quick", "paper")
FULL_ANALYSIS_MAX_N = 4


@dataclass
class Tally:
    counts: dict = field(default_factory=dict)       # tag -> [passed, failed]
    failures: list = field(default_factory=list)     # (tag, fixture, detail)

    def record(self, tag: str, fixture: str, ok: bool, detail=None):
        c = self.counts.setdefault(tag, [0, 0])
        c[0 if ok else 1] += 1
        if not ok:
            self.failures.append((tag, fixture, repr(detail)))

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = []
        for tag in sorted(self.counts):
            p, f = self.counts[tag]
            out.append(f"{'PASS' if not f else 'FAIL'} {tag}: {p}/{p + f}")
        for tag, fixture, detail in self.failures:
            out.append(f"  failure {tag} [{fixture}]: {detail}")
        return out

    def as_dict(self) -> dict:
        return {"counts": {k: {"passed": v[0], "failed": v[1]} for k, v in self.counts.items()},
                "failures": [{"tag": t, "fixture": f, "detail": d} for t, f, d in self.failures],
                "ok": self.ok}


def _monoid_checks(t: Tally, max_n: int):
    for kind in ("T", "PT", "I"):
        for n in range(1, min(max_n, 3) + 1):
            S = build_monoid(kind, n)
            G = green(S)
            eq = classes_equal(S, G, formula_labels(S.elements))
            t.record("monoid-green-formulas", f"{kind}_{n}", all(eq.values()), eq)
            rows = dclass_combinatorics(kind, n)
            ok = sum(r["size"] for r in rows) == len(S) and \
                sum(r["group_H"] for r in rows) == len({G.classes["H"][e] for e in idempotents(S)})
            t.record("dclass-counts", f"{kind}_{n}", ok)
    for n in range(2, min(max_n, 4) + 1):
        r = ig_TX_check(n)
        t.record("IG-TX", f"n={n}", r["ok"], {"rank": r["rank"].value, "formula": r["formula"]})


def _ideal_checks(t: Tally, max_n: int, full: bool, budget: int):
    for n in range(1, min(max_n, FULL_ANALYSIS_MAX_N) + 1):
        S, ctx, opctx = _engine("T", n)
        for a in idempotents(S).tolist():
            fx = f"T_{n} a={format_literal(S.elements[a])}"
            rep = verify_green_in_ideal(S, a, ctx)
            t.record("green-Sa", fx, rep.ok, rep.counterexample)
            drep = verify_green_in_ideal(opctx.S, a, opctx)
            t.record("green-aS", fx, drep.ok, drep.counterexample)
            b = ideal_basics(S, a, ctx)
            t.record("P-set-basics", fx, b.P_subset_Pprime and b.P_right_ideal and b.reg_formula_holds
                     and b.regular_gives_full is not False)
            if full:
                left = analyze_left(S, a, ctx, ranks=n <= 3, budget=budget)
                v = left.violations()
                t.record("left-analysis", fx, not v, v)
                right = dual_analysis(S, a, ctx, op_ctx=opctx)
                v = right.violations()
                t.record("right-analysis", fx, not v and right.li_dominated, v)
    # non-regular branches on a monogenic semigroup
    M = monogenic(3, 1)
    ps = p_sets(M, 1)
    rep = verify_green_in_ideal(M, 1)
    t.record("monogenic-remark", "monogenic(3,1)", rep.ok and ps.P_dprime == ps.P_tprime == (2,))


def _family_checks(t: Tally, max_n: int, full: bool, budget: int):
    for n in range(1, max_n + 1):
        fixtures = subset_fixtures(n) + partition_fixtures(n)
        for spec in fixtures:
            fx = spec.fixture_id
            reps = size_formulas(spec)
            bad = [r for r in reps if not r.verdict]
            t.record("family-sizes", fx, not bad, bad[:1])
            t.record("reg-predicates", fx, all(reg_predicates_check(spec).values()))
            for fam in FAMILIES:
                if n == 5 and not full and fam != "TXA":
                    continue
                res = green_family_check(spec, fam)
                t.record(f"family-green-{fam}", fx, all(v is None for k, v in res.items() if k != "DJ_verdict")
                         and res["DJ_verdict"], res)
            for fam in ("TXA", "TXalpha"):
                rf = reg_family(spec, fam)
                t.record("reg-family-chain", fx + f" {fam}", rf["ok"])
            if not full:
                continue
            inf = inflation_check(spec)
            t.record("inflation", fx, inf["ok"], {k: inf[k] for k in ("r_mismatch", "l_mismatch")})
            dom = domination_check(spec)
            t.record("domination", fx, dom["P_ri_dominated"] and dom["Q_li_dominated"], dom)
            for fam in ("TXA", "TXalpha"):
                ig = ig_check(spec, fam)
                t.record("IG-families", fx + f" {fam}", ig["closed_form"] and ig["restriction_form"], ig)
            ids = one_sided_identities(spec)
            t.record("one-sided-identities", fx, all(v["matches"] and v["size"] == v["count_formula"]
                                                     for v in ids.values()))
            t.record("inverse-IXA", fx, inverse_family_check(spec)["ok"])
            if n <= 4 or spec in _RANK_FIXTURES_5:
                reps = rank_formulas(spec, budget)
                bad = [r for r in reps if not r.verdict]
                t.record("family-ranks", fx, not bad, bad[:1])
    if full and max_n >= 3:
        spec = FamilySpec(3, alpha=KernelPartition([[0, 1], [2]]))
        t.record("transversal-independence", spec.fixture_id, transversal_independence(spec, (1, 2))["same"])


_RANK_FIXTURES_5 = (FamilySpec(5, A=(0, 1, 2)), FamilySpec(5, alpha=KernelPartition([[0], [1, 2], [3, 4]])))


def _inverse_checks(t: Tally, max_n: int):
    for n in range(1, min(max_n, 4) + 1):
        S, ctx, _ = _engine("I", n)
        for k in range(0, n + 1):
            for A in itertools.combinations(range(n), k):
                a = S.index_of(next(e for e in S.elements if e.domain == A and e.image == frozenset(A)
                                    and all(e.images[x] == x for x in A)))
                left = analyze_left(S, a, ctx)
                inv = left.inverse
                t.record("inverse-In", f"I_{n} A={[x + 1 for x in A]}",
                         inv is not None and inv.ok and inv.applicable and not left.violations(), inv)


def run_suite(suite: str = "quick", max_n: int = 3, budget: int = DEFAULT_BUDGET, log=None) -> Tally:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if max_n < 1 or max_n > 5:
        raise ValueError("max_n must be between 1 and 5")
    full = suite == "paper"
    t = Tally()
    steps = [("monoids", lambda: _monoid_checks(t, max_n)),
             ("ideals", lambda: _ideal_checks(t, max_n, full, budget)),
             ("families", lambda: _family_checks(t, max_n, full, budget))]
    if full:
        steps.append(("inverse", lambda: _inverse_checks(t, max_n)))
    for name, step in steps:
        start = time.perf_counter()
        step()
        if log:
            log(f"{name}: {time.perf_counter() - start:.1f}s")
    return t
