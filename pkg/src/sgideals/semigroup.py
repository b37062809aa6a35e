"""Finite semigroups as indexed elements plus a multiplication table.

The adjoined identity of S^1 is never materialised; wherever a computation
needs it, the "times 1" case is handled explicitly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import InvariantViolation, PreconditionError, SemigroupError, SizeLimitError

CLOSURE_CAP = 10 ** 6
TABLE_CAP = 10 ** 4


def _canonical_key(x):
    key = getattr(x, "sort_key", None)
    return key() if callable(key) else x


class FiniteSemigroup:
    """Immutable finite semigroup on element indices ``0..N-1``.

    ``elements`` holds opaque payloads (transformations, ints, ...).  The
    table is materialised when ``N <= table_cap``; above that products are
    computed by composing payloads with ``op``.
    """

    def __init__(self, elements: Sequence[Any], table: np.ndarray | None = None,
                 op: Callable[[Any, Any], Any] | None = None, generators: Sequence[int] | None = None,
                 name: str = "S", table_cap: int = TABLE_CAP):
        self.elements = tuple(elements)
        if not self.elements:
            raise PreconditionError("a semigroup needs at least one element")
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PreconditionError("duplicate element payloads")
        self.name = name
        self.op = op
        self.generators = None if generators is None else tuple(generators)
        N = len(self.elements)
        if table is not None:
            table = np.ascontiguousarray(table, dtype=np.int32)
            if table.shape != (N, N):
                raise PreconditionError(f"table shape {table.shape} does not match {N} elements")
            if N and (table.min() < 0 or table.max() >= N):
                raise PreconditionError("table entry out of range")
            table.setflags(write=False)
        elif op is None:
            raise PreconditionError("need a table or a binary operation")
        elif N <= table_cap:
            table = _table_from_op(self.elements, self.index, op)
        self._table = table

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteSemigroup({self.name}, size={len(self)})"

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise SizeLimitError(f"{self.name} has {len(self)} elements; no table is materialised")
        return self._table

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return self.index[self.op(self.elements[i], self.elements[j])]

    def product(self, seq: Iterable[int]) -> int:
        it = iter(seq)
        acc = next(it)
        for j in it:
            acc = self.mul(acc, j)
        return acc

    def index_of(self, payload) -> int:
        try:
            return self.index[payload]
        except KeyError:
            raise PreconditionError(f"{payload} is not an element of {self.name}") from None

    @property
    def identity(self) -> int | None:
        if not hasattr(self, "_identity"):
            T = self.table
            ar = np.arange(len(self))
            ids = np.flatnonzero((T == ar[None, :]).all(axis=1) & (T == ar[:, None]).all(axis=0))
            self._identity = int(ids[0]) if len(ids) else None
        return self._identity

    @property
    def is_monoid(self) -> bool:
        return self.identity is not None

    def is_associative(self, sample: int | None = None, seed: int = 0) -> bool:
        """Exhaustive for small tables, otherwise ``sample`` random triples."""
        T = self.table
        N = len(self)
        if sample is None and N <= 1000:
            # (xy)z == x(yz) for all x, y, z, one x at a time
            for x in range(N):
                if not np.array_equal(T[T[x]], T[x][T]):
                    return False
            return True
        rng = np.random.default_rng(seed)
        k = sample or 100000
        x, y, z = rng.integers(0, N, size=(3, k))
        return bool(np.array_equal(T[T[x, y], z], T[x, T[y, z]]))

    def restrict(self, members: Sequence[int], name: str | None = None) -> "FiniteSemigroup":
        """The subsemigroup on ``members`` (sorted parent indices) as a standalone semigroup."""
        members = np.asarray(sorted(members), dtype=np.int64)
        T = self.table
        sub = T[np.ix_(members, members)]
        pos = np.full(len(self), -1, dtype=np.int64)
        pos[members] = np.arange(len(members))
        local = pos[sub]
        if (local < 0).any():
            raise PreconditionError("member set is not closed under multiplication")
        return FiniteSemigroup([self.elements[i] for i in members], table=local,
                               op=self.op, name=name or f"sub({self.name})")


def _table_from_op(elements, index, op) -> np.ndarray:
    from .transformations import PartialMap, composition_table

    if all(isinstance(e, PartialMap) for e in elements):
        return composition_table(elements)
    N = len(elements)
    table = np.empty((N, N), dtype=np.int32)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            try:
                table[i, j] = index[op(x, y)]
            except KeyError:
                raise PreconditionError("operation leaves the element set") from None
    return table


@dataclass(frozen=True)
class SubSemigroup:
    """A multiplicatively closed index set inside ``parent``."""

    parent: FiniteSemigroup
    members: tuple
    name: str = "T"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(m) for m in self.members)))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        return i in self.member_set

    def __iter__(self):
        return iter(self.members)

    @property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def mask(self) -> np.ndarray:
        m = np.zeros(len(self.parent), dtype=bool)
        m[list(self.members)] = True
        return m

    def is_closed(self) -> bool:
        T = self.parent.table
        idx = np.asarray(self.members)
        return bool(self.mask()[T[np.ix_(idx, idx)]].all())

    def as_semigroup(self) -> FiniteSemigroup:
        return self.parent.restrict(self.members, name=self.name)


# --- construction ----------------------------------------------------------

def closure(gens: Sequence[Any], op: Callable[[Any, Any], Any], cap: int = CLOSURE_CAP,
            table_cap: int = TABLE_CAP, name: str = "S") -> FiniteSemigroup:
    """The semigroup generated by ``gens`` under ``op``.

    Elements are numbered in discovery order of a breadth-first search that
    multiplies on the right by generators taken in canonical order.
    """
    gens = list(dict.fromkeys(gens))
    if not gens:
        raise PreconditionError("the empty generating set is not allowed")
    try:
        gens.sort(key=_canonical_key)
    except TypeError:
        pass
    elements = list(gens)
    index = {g: i for i, g in enumerate(gens)}
    if len(elements) > cap:
        raise SizeLimitError(f"closure exceeds cap of {cap} elements")
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for g in gens:
            y = op(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise SizeLimitError(f"closure exceeds cap of {cap} elements")
    return FiniteSemigroup(elements, op=op, generators=range(len(gens)), name=name,
                           table_cap=table_cap)


def generated(S: FiniteSemigroup, gens: Iterable[int]) -> np.ndarray:
    """Sorted indices of the subsemigroup of S generated by ``gens``."""
    gens = np.unique(np.fromiter(gens, dtype=np.int64))
    if len(gens) == 0:
        raise PreconditionError("the empty generating set is not allowed")
    T = S.table
    seen = np.zeros(len(S), dtype=bool)
    seen[gens] = True
    frontier = gens
    while len(frontier):
        prod = np.unique(T[np.ix_(frontier, gens)])
        frontier = prod[~seen[prod]]
        seen[frontier] = True
    return np.flatnonzero(seen)


def subsemigroup(S: FiniteSemigroup, gens: Iterable[int], name: str = "T") -> SubSemigroup:
    return SubSemigroup(S, tuple(generated(S, gens).tolist()), name)


def _exp_mul(m: int, r: int):
    def op(i, j):
        k = i + j
        if k >= m + r:
            k = m + (k - m) % r
        return k
    return op


def monogenic(index: int, period: int) -> FiniteSemigroup:
    """<a | a^(m+r) = a^m>; element payload k stands for a^k."""
    m, r = index, period
    if m < 1 or r < 1:
        raise PreconditionError("index and period must be at least 1")
    els = list(range(1, m + r))
    return FiniteSemigroup(els, op=_exp_mul(m, r), generators=[0], name=f"monogenic({m},{r})")


def opposite(S: FiniteSemigroup) -> FiniteSemigroup:
    """Same elements with x*y := yx."""
    op = None if S.op is None else (lambda x, y, _op=S.op: _op(y, x))
    table = S.table.T.copy() if S.has_table else None
    name = S.name[4:-1] if S.name.startswith("opp(") else f"opp({S.name})"
    return FiniteSemigroup(S.elements, table=table, op=op, generators=S.generators, name=name)


def from_table(rows: Sequence[Sequence[int]], name: str = "S", check: bool = True) -> FiniteSemigroup:
    table = np.asarray(rows, dtype=np.int64)
    S = FiniteSemigroup(list(range(len(table))), table=table, name=name)
    if check and not S.is_associative():
        raise PreconditionError("multiplication table is not associative")
    return S


def left_zero_band(k: int) -> FiniteSemigroup:
    return from_table([[i] * k for i in range(k)], name=f"LZ{k}")


def right_zero_band(k: int) -> FiniteSemigroup:
    return from_table([list(range(k)) for _ in range(k)], name=f"RZ{k}")


def cyclic_group(k: int) -> FiniteSemigroup:
    return from_table([[(i + j) % k for j in range(k)] for i in range(k)], name=f"C{k}")


# --- Cayley CSV ------------------------------------------------------------

def read_cayley_csv(source, name: str = "cayley") -> FiniteSemigroup:
    """Parse the ``n=<size>`` header plus N rows of 0-based product indices."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ValueError("line 1, column 1: empty Cayley table file")
    head = lines[0].strip().replace(" ", "")
    if not head.startswith("n="):
        raise ValueError("line 1, column 1: expected header 'n=<size>'")
    try:
        N = int(head[2:])
    except ValueError:
        raise ValueError(f"line 1, column 3: bad size {head[2:]!r}") from None
    if N < 1:
        raise ValueError("line 1, column 3: size must be positive")
    if len(lines) - 1 != N:
        raise ValueError(f"line {len(lines) + 1}, column 1: expected {N} rows, found {len(lines) - 1}")
    rows = []
    for ln, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != N:
            raise ValueError(f"line {ln}, column 1: expected {N} entries, found {len(cells)}")
        row = []
        col = 1
        for c in cells:
            try:
                v = int(c)
            except ValueError:
                raise ValueError(f"line {ln}, column {col}: not an integer: {c.strip()!r}") from None
            if not 0 <= v < N:
                raise ValueError(f"line {ln}, column {col}: index {v} out of range 0..{N - 1}")
            row.append(v)
            col += len(c) + 1
        rows.append(row)
    S = FiniteSemigroup(list(range(N)), table=np.array(rows), name=name)
    if not S.is_associative():
        raise ValueError("table is not associative")
    return S


def write_cayley_csv(S: FiniteSemigroup, dest=None) -> str:
    buf = io.StringIO()
    buf.write(f"n={len(S)}\n")
    for row in S.table:
        buf.write(",".join(str(int(v)) for v in row) + "\n")
    text = buf.getvalue()
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w") as fh:
                fh.write(text)
    return text


# --- regularity and idempotents -------------------------------------------

@dataclass(frozen=True)
class Regularity:
    idempotents: tuple
    regular: tuple
    inverse_matrix: np.ndarray = field(repr=False, compare=False)

    def inverses(self, x: int) -> tuple:
        return tuple(np.flatnonzero(self.inverse_matrix[x]).tolist())

    @property
    def is_regular(self) -> bool:
        return len(self.regular) == len(self.inverse_matrix)

    @property
    def is_inverse(self) -> bool:
        return self.is_regular and bool((self.inverse_matrix.sum(axis=1) == 1).all())


def idempotents(S: FiniteSemigroup) -> np.ndarray:
    T = S.table
    ar = np.arange(len(S))
    return np.flatnonzero(T[ar, ar] == ar)


def regularity(S: FiniteSemigroup) -> Regularity:
    """E(S), Reg(S) and the inverse relation V as a boolean matrix."""
    T = S.table
    N = len(S)
    ar = np.arange(N)
    # xyx[x, y] = (xy)x
    xyx = T[T, ar[:, None]]
    fixed = xyx == ar[:, None]
    # y in V(x) iff xyx = x and yxy = y
    inv = fixed & fixed.T
    reg = np.flatnonzero(fixed.any(axis=1))
    E = idempotents(S)
    return Regularity(tuple(E.tolist()), tuple(reg.tolist()), inv)


def idempotent_generated(S: FiniteSemigroup) -> SubSemigroup:
    E = idempotents(S)
    if len(E) == 0:
        raise PreconditionError(f"{S.name} has no idempotents")
    return subsemigroup(S, E, name=f"IG({S.name})")


# --- identities, domination, local monoids --------------------------------

@dataclass(frozen=True)
class IdentitySets:
    RI: tuple
    LI: tuple
    MI: tuple


def _row_classes(T: np.ndarray) -> np.ndarray:
    _, cls = np.unique(T, axis=0, return_inverse=True)
    return cls.ravel()


def identity_elements(S: FiniteSemigroup) -> IdentitySets:
    T = S.table
    ar = np.arange(len(S))
    RI = np.flatnonzero((T == ar[:, None]).all(axis=0))
    LI = np.flatnonzero((T == ar[None, :]).all(axis=1))
    # u is a mid-identity iff row(xu) == row(x) for all x, since (xu)y = xy
    cls = _row_classes(T)
    MI = np.flatnonzero((cls[T] == cls[:, None]).all(axis=0))
    return IdentitySets(tuple(RI.tolist()), tuple(LI.tolist()), tuple(MI.tolist()))


def below_R(S: FiniteSemigroup, targets: Iterable[int]) -> np.ndarray:
    """Mask of x with x <=_R u for some u in ``targets`` (x in uS^1)."""
    T = S.table
    m = np.zeros(len(S), dtype=bool)
    for u in targets:
        m[u] = True
        m[T[u]] = True
    return m


def below_L(S: FiniteSemigroup, targets: Iterable[int]) -> np.ndarray:
    T = S.table
    m = np.zeros(len(S), dtype=bool)
    for u in targets:
        m[u] = True
        m[T[:, u]] = True
    return m


def natural_order(S: FiniteSemigroup, reg: Regularity | None = None) -> np.ndarray:
    """Boolean matrix of x <= y iff x = ey = yf for idempotents e, f (on Reg(S))."""
    T = S.table
    N = len(S)
    reg = reg or regularity(S)
    E = np.asarray(reg.idempotents, dtype=np.int64)
    ar = np.arange(N)
    left = np.zeros((N, N), dtype=bool)
    right = np.zeros((N, N), dtype=bool)
    for e in E:
        left[T[e], ar] = True
        right[T[:, e], ar] = True
    out = left & right
    mask = np.zeros(N, dtype=bool)
    mask[list(reg.regular)] = True
    return out & mask[:, None] & mask[None, :]


@dataclass(frozen=True)
class Domination:
    mi_dominated: bool | None
    ri_dominated: bool
    li_dominated: bool
    union_of_local_monoids: bool
    natural_order: np.ndarray = field(repr=False, compare=False)


def local_monoid(S: FiniteSemigroup, e: int) -> SubSemigroup:
    """eSe = {exe}; a monoid with identity e."""
    T = S.table
    if T[e, e] != e:
        raise PreconditionError(f"element {e} is not idempotent")
    members = np.unique(T[T[e], e])
    return SubSemigroup(S, tuple(members.tolist()), name=f"eSe[{e}]")


def domination(S: FiniteSemigroup) -> Domination:
    """RI/LI/MI-domination flags plus the checks that tie them together."""
    T = S.table
    N = len(S)
    reg = regularity(S)
    ids = identity_elements(S)
    ri = bool(ids.RI) and bool(below_R(S, ids.RI).all())
    li = bool(ids.LI) and bool(below_L(S, ids.LI).all())
    covered = np.zeros(N, dtype=bool)
    for e in ids.MI:
        covered[T[T[e], e]] = True
    union = bool(covered.all())
    mi = None
    if reg.is_regular:
        MI = np.asarray(ids.MI, dtype=np.int64)
        mi = True
        for e in reg.idempotents:
            # e below u in the natural order iff e = ueu
            if not len(MI) or not (T[T[MI, e], MI] == e).any():
                mi = False
                break
        if mi != union:
            raise InvariantViolation("MI-domination disagrees with S = union of eSe over mid-identities")
        if ids.RI and mi != ri:
            raise InvariantViolation("MI-domination disagrees with RI-domination")
        if ids.LI and mi != li:
            raise InvariantViolation("MI-domination disagrees with LI-domination")
    return Domination(mi, ri, li, union, natural_order(S, reg))


def mid_identity_checks(S: FiniteSemigroup) -> dict:
    """Properties of mid-identities that hold when S is regular or has RI/LI."""
    T = S.table
    ids = identity_elements(S)
    reg = regularity(S)
    out = {}
    applicable = reg.is_regular or bool(ids.RI) or bool(ids.LI)
    out["mi_idempotent"] = (all(T[u, u] == u for u in ids.MI) if applicable else None)
    out["mi_equals_ri"] = (set(ids.MI) == set(ids.RI)) if ids.RI else None
    out["mi_equals_li"] = (set(ids.MI) == set(ids.LI)) if ids.LI else None
    out["identities_are_mid"] = set(ids.RI) | set(ids.LI) <= set(ids.MI)
    if reg.is_regular and ids.MI:
        MI = list(ids.MI)
        out["local_monoids_isomorphic"] = all(
            _local_conjugation_ok(S, e, f) for e in MI for f in MI)
        # MSM is closed
        MSM = np.unique(T[np.ix_(np.unique(T[MI]).astype(np.int64), MI)])
        mask = np.zeros(len(S), dtype=bool)
        mask[MSM] = True
        out["MSM_closed"] = bool(mask[T[np.ix_(MSM, MSM)]].all())
    return out


def _local_conjugation_ok(S: FiniteSemigroup, e: int, f: int) -> bool:
    T = S.table
    eSe = np.asarray(local_monoid(S, e).members)
    fSf = np.asarray(local_monoid(S, f).members)
    to_f = T[T[f, eSe], f]
    back = T[T[e, to_f], e]
    if not np.array_equal(back, eSe) or sorted(to_f.tolist()) != fSf.tolist():
        return False
    # multiplicative on eSe
    pos = {int(x): i for i, x in enumerate(eSe)}
    prod = T[np.ix_(eSe, eSe)]
    return all(to_f[pos[int(prod[i, j])]] == T[to_f[i], to_f[j]]
               for i in range(len(eSe)) for j in range(len(eSe)))


def local_monoid_surmorphism(S: FiniteSemigroup, e: int) -> bool:
    """x -> exe is a homomorphism from S onto eSe (e a mid-identity)."""
    T = S.table
    img = T[T[e], e]
    prod = T
    return bool(np.array_equal(img[prod], T[img[:, None], img[None, :]]))


# --- left and right groups -------------------------------------------------

@dataclass(frozen=True)
class GroupProfile:
    is_left_group: bool
    is_right_group: bool
    degree: int | None
    group_part: tuple | None


def left_right_group_profile(S: FiniteSemigroup) -> GroupProfile:
    """Left group: Sx = S for all x.  Right group: xS = S for all x."""
    T = S.table
    N = len(S)
    ar = np.arange(N)
    left = bool((np.sort(T, axis=0) == ar[:, None]).all())
    right = bool((np.sort(T, axis=1) == ar[None, :]).all())
    if not (left or right):
        return GroupProfile(False, False, None, None)
    E = idempotents(S)
    if left and not (T[np.ix_(E, E)] == E[:, None]).all():
        raise InvariantViolation("idempotents of a left group do not form a left-zero band")
    if right and not (T[np.ix_(E, E)] == E[None, :]).all():
        raise InvariantViolation("idempotents of a right group do not form a right-zero band")
    e = int(E[0])
    group = np.unique(T[T[e], e])
    return GroupProfile(left, right, len(E), tuple(group.tolist()))


def left_group_decomposition(S: FiniteSemigroup, members: Sequence[int] | None = None) -> dict:
    """Split each x of a left group as (e_x, g_x) with x = e_x g_x.

    e_x is the idempotent R-related to x and g_x = f x lies in the group
    H_f of the least idempotent f.
    """
    prof = left_right_group_profile(S)
    if not prof.is_left_group:
        raise PreconditionError(f"{S.name} is not a left group")
    T = S.table
    E = idempotents(S)
    f = int(E[0])
    members = range(len(S)) if members is None else members
    out = {}
    for x in members:
        # in U x G the idempotent R-related to x is the unique e with ex = x
        es = [int(e) for e in E if T[e, x] == x]
        if len(es) != 1:
            raise InvariantViolation(f"element {x} has {len(es)} idempotent left parts")
        g = int(T[f, x])
        if T[es[0], g] != x:
            raise InvariantViolation(f"element {x} does not factor as e*g")
        out[int(x)] = (es[0], g)
    return out
