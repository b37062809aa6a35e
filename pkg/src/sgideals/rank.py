"""Rank, relative rank and idempotent rank with certificates.

Two independent routes are available: an exhaustive iterative-deepening
search over generating sets, and a structural lower bound obtained J-class
by J-class and matched by a witness found with a seeded randomised greedy
search.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .green import GreenStructure, green
from .semigroup import FiniteSemigroup, SubSemigroup, generated, idempotents, left_right_group_profile

DEFAULT_BUDGET = 10 ** 8
EXHAUSTIVE_LIMIT = 60
LOWER_BOUND_KINDS = ("exhaustive", "ideal-decomposition", "left-zero-projection")


@dataclass(frozen=True)
class RankCertificate:
    value: int
    witness: tuple
    lower_bound_kind: str
    budget_exhausted: bool
    lower_bound: int = 0

    @property
    def certified(self) -> bool:
        return not self.budget_exhausted and self.lower_bound == self.value


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1) -> bool:
        self.used += k
        return self.used <= self.limit


def _as_local(target) -> tuple:
    """(standalone semigroup, map local index -> caller index)."""
    if isinstance(target, SubSemigroup):
        return target.as_semigroup(), list(target.members)
    return target, list(range(len(target)))


class _Closer:
    """Fast closure tests inside a fixed table."""

    def __init__(self, T: np.ndarray):
        self.T = T
        self.N = len(T)

    def closure_mask(self, gens) -> np.ndarray:
        gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
        seen = np.zeros(self.N, dtype=bool)
        if not len(gens):
            return seen
        seen[gens] = True
        frontier = gens
        T = self.T
        while len(frontier):
            prod = T[np.ix_(frontier, gens)].ravel()
            prod = prod[~seen[prod]]
            if not len(prod):
                break
            frontier = np.unique(prod)
            seen[frontier] = True
        return seen

    def generates(self, gens, base: np.ndarray | None = None) -> bool:
        g = list(gens)
        if base is not None:
            g = list(np.flatnonzero(base)) + g
        if not g:
            return self.N == 0
        return bool(self.closure_mask(g).all())


# --- structural lower bound -------------------------------------------------

def _min_cover(sources_reach: list, targets: set) -> int:
    """Least number of sources whose reach sets cover ``targets``."""
    if not targets:
        return 0
    useful = [r & targets for r in sources_reach]
    # keep only maximal reach sets
    uniq = []
    for r in sorted(set(map(frozenset, useful)), key=len, reverse=True):
        if r and not any(r <= u for u in uniq):
            uniq.append(r)
    for k in range(1, len(uniq) + 1):
        for combo in itertools.combinations(uniq, k):
            if set().union(*combo) >= targets:
                return k
    raise PreconditionError("targets cannot be covered")


def _class_reach(members: np.ndarray, labels: np.ndarray, moves: np.ndarray, T: np.ndarray, left: bool) -> list:
    """Reachability between classes (given by ``labels``) of the J-class
    ``members`` under multiplication by ``moves`` (plus the empty product)."""
    ids = sorted(set(labels[members].tolist()))
    pos = {c: i for i, c in enumerate(ids)}
    n = len(ids)
    adj = np.eye(n, dtype=bool)
    inJ = np.zeros(len(T), dtype=bool)
    inJ[members] = True
    if len(moves):
        for x in members:
            prods = T[moves, x] if left else T[x, moves]
            prods = prods[inJ[prods]]
            for c in set(labels[prods].tolist()):
                adj[pos[int(labels[x])], pos[c]] = True
    # transitive closure
    for k in range(n):
        adj |= adj[:, [k]] & adj[[k], :]
    return ids, adj


def structural_lower_bound(S: FiniteSemigroup, G: GreenStructure | None = None,
                           candidates: np.ndarray | None = None) -> tuple:
    """Lower bound on rank(S) summed over J-classes.

    For a J-class J let B be the elements strictly J-above it.  An element
    x of J outside <B> needs a generator u in J with x R wu for some w in
    <B>^1 (take the first generator of J in a factorisation of x), and
    dually for L.  So the generators in J must cover the R-classes (and the
    L-classes) of such elements under these moves.  A maximal J-class that
    is a subsemigroup must be generated by its own generators, so for left
    or right groups the bound max(degree, rank G) applies there as well.

    Returns (bound, kind).
    """
    G = G or green(S)
    T = S.table
    D = G.classes["D"]
    L, R = G.classes["L"], G.classes["R"]
    nD = G.count("D")
    order = G.j_order
    total = 0
    kind = "ideal-decomposition"
    for d in range(nD):
        members = np.flatnonzero(D == d)
        above_classes = [c for c in range(nD) if c != d and order[d, c]]
        B = np.flatnonzero(np.isin(D, above_classes))
        gB = generated(S, B) if len(B) else np.zeros(0, dtype=np.int64)
        inGB = np.zeros(len(S), dtype=bool)
        inGB[gB] = True
        loose = members[~inGB[members]]
        if not len(loose):
            continue
        r_ids, r_adj = _class_reach(members, R, gB, T, left=True)
        l_ids, l_adj = _class_reach(members, L, gB, T, left=False)
        r_targets = {r_ids.index(int(R[x])) for x in loose}
        l_targets = {l_ids.index(int(L[x])) for x in loose}
        r_src = [set(np.flatnonzero(r_adj[i]).tolist()) for i in range(len(r_ids))]
        l_src = [set(np.flatnonzero(l_adj[i]).tolist()) for i in range(len(l_ids))]
        need = max(_min_cover(r_src, r_targets), _min_cover(l_src, l_targets), 1)
        if not len(B):
            sub = T[np.ix_(members, members)]
            if np.isin(sub, members).all():
                prof = left_right_group_profile(S.restrict(members))
                if prof.is_left_group or prof.is_right_group:
                    grank = group_rank(S.restrict(prof_group_members(S, members, prof)))
                    deg = prof.degree if not (prof.is_left_group and prof.is_right_group) else 1
                    if max(deg, grank) > need:
                        need = max(deg, grank)
                        kind = "left-zero-projection"
        total += need
    return total, kind


def prof_group_members(S: FiniteSemigroup, members: np.ndarray, prof) -> list:
    return [int(members[i]) for i in prof.group_part]


def group_rank(Gp: FiniteSemigroup) -> int:
    """Rank of a (small) group by increasing-size search."""
    N = len(Gp)
    if N == 1:
        return 1
    closer = _Closer(Gp.table)
    ident = Gp.identity
    cand = [i for i in range(N) if i != ident]
    for k in range(1, N + 1):
        for combo in itertools.combinations(cand, k):
            if closer.generates(combo):
                return k
    return N


# --- exhaustive search -----------------------------------------------------

def _forced(T: np.ndarray) -> np.ndarray:
    """Elements that are not products, so lie in every generating set."""
    inS2 = np.zeros(len(T), dtype=bool)
    inS2[np.unique(T)] = True
    return np.flatnonzero(~inS2)


def _exhaustive(S: FiniteSemigroup, G: GreenStructure, candidates: np.ndarray, base: np.ndarray,
                budget: _Budget, start: int = 0):
    """Smallest U within ``candidates`` with <base ∪ U> = S.

    Returns (U or None, finished flag).  Prunes by requiring every R- and
    L-class of each maximal J-class not already reached to be hit.
    """
    T = S.table
    N = len(S)
    closer = _Closer(T)
    base_mask = np.zeros(N, dtype=bool)
    if len(base):
        base_mask = closer.closure_mask(base)
    if base_mask.all():
        return (), True
    forced = [int(x) for x in _forced(T) if not base_mask[x]]
    if any(f not in set(candidates.tolist()) for f in forced):
        return None, True
    D, L, R = G.classes["D"], G.classes["L"], G.classes["R"]
    # required class hits: R and L classes of maximal J-classes not covered by <base>
    req_bits = {}
    nbit = 0
    need_groups = []
    for d in G.j_maximal():
        members = np.flatnonzero(D == d)
        if base_mask[members].all():
            continue
        rs = sorted(set(R[members].tolist()))
        ls = sorted(set(L[members].tolist()))
        rbits = {r: 1 << (nbit + i) for i, r in enumerate(rs)}
        nbit += len(rs)
        lbits = {l: 1 << (nbit + i) for i, l in enumerate(ls)}
        nbit += len(ls)
        need_groups.append((sum(rbits.values()), sum(lbits.values())))
        for x in members:
            req_bits[int(x)] = rbits[int(R[x])] | lbits[int(L[x])]
    all_req = 0
    for rm, lm in need_groups:
        all_req |= rm | lm

    free = [int(c) for c in candidates if int(c) not in forced and not base_mask[c]]
    # candidates in maximal J-classes first so the suffix masks prune early
    free.sort(key=lambda x: (0 if x in req_bits else 1, x))
    bits = [req_bits.get(x, 0) for x in free]
    suffix = [0] * (len(free) + 1)
    for i in range(len(free) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | bits[i]
    forced_bits = 0
    for f in forced:
        forced_bits |= req_bits.get(f, 0)

    def slots_needed(covered):
        need = 0
        for rm, lm in need_groups:
            need += max(bin(rm & ~covered).count("1"), bin(lm & ~covered).count("1"))
        return need

    base_list = [int(x) for x in np.flatnonzero(base_mask)]
    lo = max(len(forced) + slots_needed(forced_bits), start)
    for size in range(lo, len(free) + len(forced) + 1):
        k = size - len(forced)
        chosen = []

        def dfs(pos, covered):
            if not budget.spend():
                raise _OutOfBudget
            if len(chosen) == k:
                if covered & all_req != all_req:
                    return None
                gens = forced + chosen
                if closer.generates(gens + base_list):
                    return tuple(gens)
                return None
            left = k - len(chosen)
            if slots_needed(covered) > left:
                return None
            if (all_req & ~covered) & ~suffix[pos]:
                return None
            for i in range(pos, len(free) - left + 1):
                chosen.append(free[i])
                res = dfs(i + 1, covered | bits[i])
                chosen.pop()
                if res is not None:
                    return res
            return None

        try:
            res = dfs(0, forced_bits)
        except _OutOfBudget:
            return None, False
        if res is not None:
            return res, True
    return None, True


class _OutOfBudget(Exception):
    pass


# --- witness search --------------------------------------------------------

def greedy_witness(S: FiniteSemigroup, G: GreenStructure, candidates: np.ndarray,
                   base: np.ndarray | None = None, restarts: int = 24, seed: int = 0) -> tuple:
    """A small generating set (with ``base``) found by seeded randomised greedy."""
    T = S.table
    N = len(S)
    closer = _Closer(T)
    rng = random.Random(seed)
    D = G.classes["D"]
    # process J-classes from the top down
    depth = G.j_order.sum(axis=1)       # number of classes >= d
    order = sorted(range(G.count("D")), key=lambda d: (int(depth[d]), d))
    cand_mask = np.zeros(N, dtype=bool)
    cand_mask[candidates] = True
    base = np.zeros(0, dtype=np.int64) if base is None else np.asarray(base, dtype=np.int64)
    forced = [int(x) for x in _forced(T) if cand_mask[x]]
    best = None
    for attempt in range(restarts):
        U = list(forced)
        gen = closer.closure_mask(list(U) + base.tolist()) if (U or len(base)) else np.zeros(N, dtype=bool)
        for d in order:
            members = np.flatnonzero(D == d)
            while not gen[members].all():
                pool = [int(x) for x in members if not gen[x] and cand_mask[x]]
                if not pool:
                    pool = [int(x) for x in np.flatnonzero(~gen & cand_mask)]
                if not pool:
                    raise PreconditionError("candidates do not generate the target")
                if len(pool) > 48:
                    pool = rng.sample(pool, 48)
                scored = []
                for x in pool:
                    m = closer.closure_mask(U + [x] + base.tolist())
                    scored.append((int(m[members].sum()), int(m.sum()), rng.random(), x, m))
                scored.sort(reverse=True)
                _, _, _, x, m = scored[0]
                U.append(x)
                gen = m
            if best is not None and len(U) >= len(best):
                break
        if not gen.all():
            continue
        # drop redundant elements
        for x in list(U):
            trial = [y for y in U if y != x]
            if (trial or len(base)) and closer.generates(trial + base.tolist()):
                U = trial
        if best is None or len(U) < len(best):
            best = U
    if best is None:
        raise PreconditionError("no generating set found among candidates")
    return tuple(sorted(best))


# --- public API ------------------------------------------------------------

def _certify(S, G, local_map, candidates, base, budget, method, idempotent=False) -> RankCertificate:
    budget = _Budget(budget)
    N = len(S)
    if method not in ("auto", "exhaustive", "structural"):
        raise ValueError(f"unknown method {method!r}")
    lb, kind = (structural_lower_bound(S, G) if not len(base) else (0, "ideal-decomposition"))
    if method == "exhaustive" or (method == "auto" and N <= EXHAUSTIVE_LIMIT):
        res, finished = _exhaustive(S, G, candidates, base, budget)
        if finished and res is not None:
            return RankCertificate(len(res), tuple(local_map[i] for i in sorted(res)), "exhaustive",
                                   False, len(res))
        if finished:
            raise PreconditionError("candidates do not generate the target")
        w = greedy_witness(S, G, candidates, base)
        return RankCertificate(len(w), tuple(local_map[i] for i in w), kind, True, lb)
    w = greedy_witness(S, G, candidates, base)
    if len(w) == lb:
        return RankCertificate(lb, tuple(local_map[i] for i in w), kind, False, lb)
    # bound and witness disagree: fall back to a budgeted exhaustive search
    res, finished = _exhaustive(S, G, candidates, base, budget, start=lb)
    if finished and res is not None:
        return RankCertificate(len(res), tuple(local_map[i] for i in sorted(res)), "exhaustive", False, len(res))
    return RankCertificate(len(w), tuple(local_map[i] for i in w), kind, True, lb)


def rank_exact(target, budget: int = DEFAULT_BUDGET, method: str = "auto") -> RankCertificate:
    """rank of a FiniteSemigroup or SubSemigroup, with certificate."""
    S, local_map = _as_local(target)
    G = green(S)
    return _certify(S, G, local_map, np.arange(len(S)), np.zeros(0, dtype=np.int64), budget, method)


def idrank_exact(target, budget: int = DEFAULT_BUDGET, method: str = "auto") -> RankCertificate:
    S, local_map = _as_local(target)
    E = idempotents(S)
    if not _Closer(S.table).generates(E.tolist()):
        raise PreconditionError(f"{S.name} is not idempotent-generated")
    G = green(S)
    return _certify(S, G, local_map, E, np.zeros(0, dtype=np.int64), budget, method, idempotent=True)


def _relative(target, A, budget, idempotent=False) -> RankCertificate:
    S, local_map = _as_local(target)
    pos = {p: i for i, p in enumerate(local_map)}
    try:
        base = np.asarray(sorted(pos[int(x)] for x in A), dtype=np.int64)
    except KeyError:
        raise PreconditionError("relative set must lie inside the target") from None
    cands = idempotents(S) if idempotent else np.arange(len(S))
    if idempotent:
        probe = np.union1d(cands, base)
        if not _Closer(S.table).generates(probe.tolist()):
            raise PreconditionError("target is not generated by A together with idempotents")
    G = green(S)
    b = _Budget(budget)
    res, finished = _exhaustive(S, G, cands, base, b)
    if finished and res is not None:
        return RankCertificate(len(res), tuple(local_map[i] for i in sorted(res)), "exhaustive", False, len(res))
    if finished:
        raise PreconditionError("target cannot be generated")
    w = greedy_witness(S, G, cands, base)
    return RankCertificate(len(w), tuple(local_map[i] for i in w), "ideal-decomposition", True, 0)


def relative_rank(target, A, budget: int = DEFAULT_BUDGET) -> RankCertificate:
    """min |U| with <A ∪ U> = target."""
    return _relative(target, A, budget)


def relative_idrank(target, A, budget: int = DEFAULT_BUDGET) -> RankCertificate:
    """min |U| with U idempotent and <A ∪ U> = target."""
    return _relative(target, A, budget, idempotent=True)


def is_ideal_complement(target, T_members) -> bool:
    """Whether target∖T is an ideal of target."""
    S, local_map = _as_local(target)
    pos = {p: i for i, p in enumerate(local_map)}
    inT = np.zeros(len(S), dtype=bool)
    inT[[pos[int(x)] for x in T_members]] = True
    out = np.flatnonzero(~inT)
    tab = S.table
    return bool((~inT[tab[out]]).all() and (~inT[tab[:, out]]).all())
