"""Command line front end: build, analyze, verify, render.

Exit codes: 0 pass, 1 invariant violation, 2 input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from collections import Counter

import numpy as np

from .errors import InvariantViolation, PreconditionError, SizeLimitError
from .families import FAMILIES, FamilySpec, build_family, rank_formulas, size_formulas
from .green import green
from .ideals import Context, analyze_left, dual_analysis
from .rank import DEFAULT_BUDGET
from .render import TARGETS, label, render
from .semigroup import CLOSURE_CAP, closure, monogenic, read_cayley_csv, regularity
from .transformations import PartialMap, Transformation, build_monoid, compose, parse_literal
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

MONOID_KINDS = {"full_transformation": "T", "partial_transformation": "PT",
                "symmetric_inverse": "I", "symmetric_group": "S"}


class InputError(Exception):
    pass


# --- spec files ------------------------------------------------------------

def load_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InputError(f"{path}:1:1: spec must be an object with a 'kind' field")
    spec["_dir"] = os.path.dirname(os.path.abspath(path))
    return spec


def _need(spec, key):
    if key not in spec:
        raise InputError(f"spec of kind {spec['kind']!r} needs field {key!r}")
    return spec[key]


def build_from_spec(spec: dict, max_n: int):
    """(semigroup, fixture id, FamilySpec or None)."""
    kind = spec["kind"]
    if kind in MONOID_KINDS:
        n = int(_need(spec, "n"))
        if n > max_n:
            raise SizeLimitError(f"n={n} exceeds --max-n {max_n}")
        S = build_monoid(MONOID_KINDS[kind], n)
        fam = None
        return S, spec.get("id", S.name), fam
    if kind == "monogenic":
        S = monogenic(int(_need(spec, "index")), int(_need(spec, "period")))
        return S, spec.get("id", S.name), None
    if kind == "cayley_csv":
        path = os.path.join(spec["_dir"], _need(spec, "path"))
        try:
            S = read_cayley_csv(path, name=os.path.basename(path))
        except OSError as e:
            raise InputError(f"{path}: {e.strerror}") from None
        except ValueError as e:
            raise InputError(f"{path}: {e}") from None
        return S, spec.get("id", S.name), None
    if kind == "family":
        fam_kind = _need(spec, "family")
        if fam_kind not in FAMILIES:
            raise InputError(f"family must be one of {', '.join(FAMILIES)}")
        fs = FamilySpec.from_json(spec)
        if fs.n > max_n:
            raise SizeLimitError(f"n={fs.n} exceeds --max-n {max_n}")
        fam = build_family(fs, (fam_kind,))[fam_kind]
        return fam.semigroup(), spec.get("id", f"{fam_kind}[{fs.fixture_id}]"), fs
    if kind == "generated":
        n = int(_need(spec, "n"))
        if n > max_n:
            raise SizeLimitError(f"n={n} exceeds --max-n {max_n}")
        gens = [parse_literal(g) for g in _need(spec, "generators")]
        if any(g.n != n for g in gens):
            raise InputError("generator degree differs from n")
        S = closure(gens, compose, cap=int(spec.get("cap", CLOSURE_CAP)), name=spec.get("id", "generated"))
        return S, S.name, None
    raise InputError(f"unknown spec kind {kind!r}")


def parse_element(S, text: str) -> int:
    if text is None:
        raise InputError("--a is required")
    payload0 = S.elements[0]
    try:
        if isinstance(payload0, PartialMap):
            f = parse_literal(text, partial=not isinstance(payload0, Transformation))
        else:
            f = int(text)
    except ValueError as e:
        raise InputError(f"--a: {e}") from None
    try:
        return S.index_of(f)
    except PreconditionError:
        raise InputError(f"--a: {text} is not an element of {S.name}") from None


# --- reports ---------------------------------------------------------------

def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_summary(S) -> dict:
    G = green(S)
    reg = regularity(S)
    return {"name": S.name, "size": len(S), "idempotents": len(reg.idempotents),
            "regular": len(reg.regular), "D_classes": G.count("D"), "L_classes": G.count("L"),
            "R_classes": G.count("R"), "H_classes": G.count("H"), "is_monoid": S.is_monoid,
            "is_regular": reg.is_regular, "is_inverse": reg.is_inverse}


def _labels(S, idx):
    return [label(S.elements[i]) for i in idx]


def analysis_report(S, a: int, side: str, fixture: str, budget: int | None) -> dict:
    ranks = budget is not None
    budget = budget or DEFAULT_BUDGET
    ctx = Context(S)
    if side == "left":
        an = dual = analyze_left(S, a, ctx, ranks=ranks, budget=budget)
        left = an
        names = ("Sa", "P", "P_prime", "P_dprime", "P_tprime", "Reg_Sa")
        sets = (an.Sa, an.P, an.P_prime, an.P_dprime, an.P_tprime, an.reg_Sa)
        flags = {"ri_dominated": an.ri_dominated}
        ids = an.identity_sets
    elif side == "right":
        dual = dual_analysis(S, a, ctx, ranks=ranks, budget=budget)
        left = dual.left
        names = ("aS", "Q", "Q_prime", "Q_dprime", "Q_tprime", "Reg_aS")
        sets = (dual.aS, dual.Q, dual.Q_prime, dual.Q_dprime, dual.Q_tprime, dual.reg_aS)
        flags = {"li_dominated": dual.li_dominated, "direct_Q_matches": dual.direct_Q_matches}
        ids = dual.identity_sets
    else:
        raise InputError("--side must be left or right")
    violations = dual.violations()
    rep = {
        "fixture": fixture, "semigroup": S.name, "side": side, "a": label(S.elements[a]),
        "a_used": label(S.elements[left.a_used]), "substitution": left.substitution,
        "sizes": {k: len(v) for k, v in zip(names, sets)},
        "flags": dict(flags, sandwich_regular=left.sandwich_regular,
                      uniquely_sandwich_regular=left.uniquely_sandwich_regular,
                      P_equals_Pprime=left.basics.P_equals_Pprime,
                      green_formulas_ok=left.green_report.ok,
                      regular_forms_checked=left.green_report.corollary_checked),
        "violations": violations,
    }
    if left.aSa is not None:
        rep["sizes"]["aSa"] = len(left.aSa)
        hat = left.hat_relations
        rep["rho" if side == "left" else "lambda"] = left.rho
        rep["hat_containments"] = hat.containments
        rep["identity_set"] = _labels(S, left.mid_identities.common or ())
        rep["identity_set_names"] = sorted(ids)
        rep["left_groups" if side == "left" else "right_groups"] = [
            {k: (label(S.elements[v]) if k == "rep" else v) for k, v in lg.items()} for lg in hat.left_groups]
        per_class = Counter(hat.r_values.values())
        rep["r_histogram" if side == "left" else "l_histogram"] = {str(k): v for k, v in sorted(per_class.items())}
        if isinstance(S.elements[0], PartialMap):
            by_rank = {}
            for x, r in hat.r_values.items():
                by_rank.setdefault(S.elements[x].rank, set()).add(r)
            rep["r_by_rank" if side == "left" else "l_by_rank"] = {
                str(k): sorted(v) for k, v in sorted(by_rank.items())}
        inv = left.inverse
        rep["inverse"] = {"applicable": inv.applicable, "P_equals_aSa": inv.P_equals_aSa,
                          "inverse": inv.inverse, "ok": inv.ok}
        if left.rank_bounds is not None:
            rb = left.rank_bounds
            rep["rank_bounds"] = {
                "rho": rb.rho, "relrank_aSa_Ha": rb.relrank_aSa_Ha, "rank_Ha": rb.rank_Ha,
                "bound_P": rb.bound_P, "bound_E": rb.bound_E, "bound_E_idrank": rb.bound_E_idrank,
                "rank_P": None if rb.rank_P is None else rb.rank_P.value,
                "rank_E": None if rb.rank_E is None else rb.rank_E.value,
                "idrank_E": None if rb.idrank_E is None else rb.idrank_E.value,
                "verdicts": rb.verdicts}
    gr = left.green_report
    if gr.counterexample is not None:
        c = gr.counterexample
        rep["counterexample"] = {"x": label(S.elements[c.x]), "relation": c.relation,
                                 "expected": _labels(S, c.expected), "actual": _labels(S, c.actual)}
    return rep


def family_reports(S, a: int, budget: int | None) -> list:
    """Closed-formula reports when S is T_n and a is idempotent."""
    if not S.name.startswith("T_") or S.table[a, a] != a:
        return []
    f = S.elements[a]
    fs = FamilySpec(f.n, A=tuple(sorted(f.image)), alpha=f.kernel)
    reps = size_formulas(fs)
    if budget is not None:
        reps += rank_formulas(fs, budget)
    return [r.as_dict() for r in reps]


# --- commands --------------------------------------------------------------

def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    S, fixture, _ = build_from_spec(load_spec(args.spec), args.max_n)
    rep = build_summary(S)
    rep["fixture"] = fixture
    _emit(dumps(rep), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    S, fixture, _ = build_from_spec(load_spec(args.spec), args.max_n)
    a = parse_element(S, args.a)
    rep = analysis_report(S, a, args.side, fixture, args.rank_budget)
    rep["formula_reports"] = family_reports(S, a, args.rank_budget)
    _emit(dumps(rep), args.out)
    bad = rep["violations"] or any(not r["verdict"] for r in rep["formula_reports"])
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_verify(args) -> int:
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    if not 1 <= args.max_n <= 5:
        raise InputError("--max-n for verify must be between 1 and 5")
    t = run_suite(args.suite, args.max_n, args.rank_budget or DEFAULT_BUDGET, log=log)
    if args.format == "json":
        _emit(dumps(t.as_dict()), args.out)
    else:
        _emit("\n".join(t.lines()) + "\n", args.out)
    return EXIT_OK if t.ok else EXIT_VIOLATION


def cmd_render(args) -> int:
    S, _, _ = build_from_spec(load_spec(args.spec), args.max_n)
    a = parse_element(S, args.a) if args.target != "S" else None
    fmt = "text" if args.format == "json" else args.format
    _emit(render(S, args.target, a, fmt), args.out)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "analyze": cmd_analyze, "verify": cmd_verify, "render": cmd_render}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgideals", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--spec", help="JSON spec file")
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--a", help="element generating the ideal, e.g. \"[1,2,3,3,3]\"")
    p.add_argument("--suite", choices=SUITES, default="quick")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--format", choices=("text", "dot", "json"), default="text")
    p.add_argument("--target", choices=TARGETS, default="S")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--rank-budget", type=int, default=None,
                   help="compute ranks with this search budget (analyze, verify)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.max_n < 1 or (args.rank_budget is not None and args.rank_budget < 1):
        print("error: caps must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.command != "verify" and not args.spec:
        print(f"error: {args.command} needs --spec", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except SizeLimitError as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InputError, PreconditionError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
