"""Transformations, partial maps and the monoids T_n, PT_n, I_n, S_n.

Points are 0-indexed internally.  Maps act on the right, so arrays compose
left-to-right: ``(f * g).images[x] == g.images[f.images[x]]``.  Literals and
diagrams use 1-indexed points, with ``-`` for an undefined point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, SizeLimitError

UNDEF = -1

KINDS = ("T", "PT", "I", "S")


@dataclass(frozen=True, order=True)
class KernelPartition:
    """A partition of ``{0..n-1}``; blocks sorted by least element."""

    blocks: tuple

    def __init__(self, blocks: Iterable[Iterable[int]]):
        bl = [tuple(sorted(set(b))) for b in blocks]
        bl = [b for b in bl if b]
        bl.sort()
        object.__setattr__(self, "blocks", tuple(bl))
        seen = [p for b in self.blocks for p in b]
        if len(seen) != len(set(seen)):
            raise PreconditionError(f"blocks overlap: {self.blocks}")

    @property
    def points(self) -> tuple:
        return tuple(sorted(p for b in self.blocks for p in b))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise KeyError(x)

    def labels(self, n: int) -> tuple:
        lab = [UNDEF] * n
        for i, b in enumerate(self.blocks):
            for p in b:
                lab[p] = i
        return tuple(lab)

    def restrict(self, points: Iterable[int]) -> "KernelPartition":
        pts = set(points)
        return KernelPartition([[p for p in b if p in pts] for b in self.blocks])

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(str(p + 1) for p in b) + "}" for b in self.blocks) + "}"


def _kernel_of(images: Sequence[int]) -> KernelPartition:
    groups: dict = {}
    for x, y in enumerate(images):
        if y != UNDEF:
            groups.setdefault(y, []).append(x)
    return KernelPartition(groups.values())


@dataclass(frozen=True, eq=False)
class PartialMap:
    """A partial self-map of ``{0..n-1}``; ``UNDEF`` marks undefined points.

    A ``Transformation`` is the total special case.  Ordering is by domain
    first, then by the images on the domain.
    """

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        for y in self.images:
            if not (y == UNDEF or 0 <= y < n):
                raise PreconditionError(f"image {y} out of range for degree {n}")

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def domain(self) -> tuple:
        return tuple(x for x, y in enumerate(self.images) if y != UNDEF)

    @property
    def image(self) -> frozenset:
        return frozenset(y for y in self.images if y != UNDEF)

    @property
    def kernel(self) -> KernelPartition:
        return _kernel_of(self.images)

    @property
    def rank(self) -> int:
        return len(self.image)

    @property
    def is_injective(self) -> bool:
        defined = [y for y in self.images if y != UNDEF]
        return len(defined) == len(set(defined))

    @property
    def is_total(self) -> bool:
        return UNDEF not in self.images

    def __eq__(self, other):
        if not isinstance(other, PartialMap):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def sort_key(self):
        return (self.domain, tuple(self.images[x] for x in self.domain))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "PartialMap") -> "PartialMap":
        return compose(self, other)

    def restrict(self, points: Iterable[int]) -> tuple:
        """Images of ``points`` as a tuple (used for f|_A)."""
        return tuple(self.images[p] for p in points)

    def inverse(self) -> "PartialMap":
        if not self.is_injective:
            raise PreconditionError("only injective partial maps have inverses")
        inv = [UNDEF] * self.n
        for x, y in enumerate(self.images):
            if y != UNDEF:
                inv[y] = x
        return PartialMap(tuple(inv))

    def __str__(self) -> str:
        return format_literal(self)


class Transformation(PartialMap):
    """A total map ``{0..n-1} -> {0..n-1}``."""

    def __post_init__(self):
        super().__post_init__()
        if UNDEF in self.images:
            raise PreconditionError("a transformation must be total")

    def sort_key(self):
        return self.images

    def __lt__(self, other):
        return self.images < other.images


def _make(images: Sequence[int]) -> PartialMap:
    images = tuple(images)
    return Transformation(images) if UNDEF not in images else PartialMap(images)


def compose(f: PartialMap, g: PartialMap) -> PartialMap:
    """``x(fg) = (xf)g``; undefined wherever either step is undefined."""
    if f.n != g.n:
        raise PreconditionError(f"degree mismatch: {f.n} vs {g.n}")
    gi = g.images
    out = tuple(UNDEF if y == UNDEF else gi[y] for y in f.images)
    if isinstance(f, Transformation) and isinstance(g, Transformation):
        return Transformation(out)
    return PartialMap(out)


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(n)))


def partial_identity(points: Iterable[int], n: int) -> PartialMap:
    pts = set(points)
    return PartialMap(tuple(x if x in pts else UNDEF for x in range(n)))


def parse_literal(text: str, partial: bool | None = None) -> PartialMap:
    """Parse ``"[1,1,3,3,5]"`` (1-indexed); ``-`` marks an undefined point."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"transformation literal must be bracketed: {text!r}")
    parts = [p.strip() for p in body[1:-1].split(",") if p.strip()]
    if not parts:
        raise ValueError("empty transformation literal")
    images = []
    for p in parts:
        if p == "-":
            images.append(UNDEF)
        else:
            try:
                v = int(p)
            except ValueError:
                raise ValueError(f"bad entry {p!r} in literal {text!r}") from None
            if not 1 <= v <= len(parts):
                raise ValueError(f"entry {v} out of range 1..{len(parts)}")
            images.append(v - 1)
    if partial:
        return PartialMap(tuple(images))
    return _make(images)


def format_literal(f: PartialMap) -> str:
    return "[" + ",".join("-" if y == UNDEF else str(y + 1) for y in f.images) + "]"


# --- combinatorics ---------------------------------------------------------

@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def set_partitions(points: Sequence[int]):
    """All partitions of ``points`` (restricted growth order)."""
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def saturates(B: Iterable[int], sigma: KernelPartition) -> bool:
    """Every block of ``sigma`` meets ``B``."""
    B = set(B)
    return all(any(p in B for p in blk) for blk in sigma.blocks)


def separates(sigma: KernelPartition, B: Iterable[int]) -> bool:
    """Every block of ``sigma`` meets ``B`` at most once."""
    B = set(B)
    return all(sum(p in B for p in blk) <= 1 for blk in sigma.blocks)


def is_cross_section(B: Iterable[int], sigma: KernelPartition) -> bool:
    B = set(B)
    return saturates(B, sigma) and separates(sigma, B)


def idempotent_from(partition: KernelPartition, transversal: Sequence[int], n: int | None = None) -> Transformation:
    """The idempotent with kernel ``partition`` mapping block i onto ``transversal[i]``."""
    if n is None:
        n = len(partition.points)
    if sorted(partition.points) != list(range(n)):
        raise PreconditionError("partition must cover {0..n-1}")
    if len(transversal) != len(partition):
        raise PreconditionError("need exactly one transversal point per block")
    images = [UNDEF] * n
    for blk, t in zip(partition.blocks, transversal):
        if t not in blk:
            raise PreconditionError(f"transversal point {t + 1} is outside block {[p + 1 for p in blk]}")
        for p in blk:
            images[p] = t
    return Transformation(tuple(images))


# --- enumeration and tables ------------------------------------------------

def enumerate_kind(kind: str, n: int) -> list:
    """All elements of T_n / PT_n / I_n / S_n in canonical order."""
    if kind == "T":
        return [Transformation(t) for t in itertools.product(range(n), repeat=n)]
    if kind == "S":
        return [Transformation(t) for t in itertools.permutations(range(n))]
    if kind == "PT":
        els = [_make(t) for t in itertools.product(range(-1, n), repeat=n)]
    elif kind == "I":
        els = [_make(t) for t in itertools.product(range(-1, n), repeat=n)
               if len([y for y in t if y != UNDEF]) == len({y for y in t if y != UNDEF})]
    else:
        raise ValueError(f"unknown monoid kind {kind!r}; expected one of {KINDS}")
    els = [PartialMap(e.images) for e in els]
    els.sort(key=lambda e: e.sort_key())
    return els


def expected_order(kind: str, n: int) -> int:
    if kind == "T":
        return n ** n
    if kind == "PT":
        return (n + 1) ** n
    if kind == "I":
        return sum(binomial(n, k) ** 2 * math.factorial(k) for k in range(n + 1))
    if kind == "S":
        return math.factorial(n)
    raise ValueError(kind)


def composition_table(elements: Sequence[PartialMap]) -> np.ndarray:
    """Multiplication table of a composition-closed list of maps (vectorised)."""
    N = len(elements)
    n = elements[0].n
    E = np.array([e.images for e in elements], dtype=np.int64).reshape(N, n)
    ext = np.concatenate([E, np.full((N, 1), UNDEF, dtype=np.int64)], axis=1)
    base = n + 1
    weights = base ** np.arange(n, dtype=np.int64)
    codes = (E + 1) @ weights
    lookup = np.full(base ** n, -1, dtype=np.int64)
    lookup[codes] = np.arange(N)
    table = np.empty((N, N), dtype=np.int32)
    for i in range(N):
        # row i: element i followed by every element g, i.e. g[f[x]]
        prod = ext[:, E[i]]
        table[i] = lookup[(prod + 1) @ weights]
    if (table < 0).any():
        raise PreconditionError("element list is not closed under composition")
    return table


def build_monoid(kind: str, n: int, cap: int = 10 ** 4):
    """T_n, PT_n, I_n or S_n as a ``FiniteSemigroup`` in canonical order."""
    from .semigroup import FiniteSemigroup

    if n < 1:
        raise PreconditionError("degree must be at least 1")
    size = expected_order(kind, n)
    if size > cap:
        raise SizeLimitError(f"{kind}_{n} has {size} elements, above the cap of {cap}")
    els = enumerate_kind(kind, n)
    return FiniteSemigroup(els, table=composition_table(els), name=f"{kind}_{n}")


# --- formula-level Green's relations (Q in {T, PT, I}) ---------------------

def leq_L(f: PartialMap, g: PartialMap) -> bool:
    return f.image <= g.image


def leq_R(f: PartialMap, g: PartialMap) -> bool:
    df, dg = set(f.domain), set(g.domain)
    if not df <= dg:
        return False
    # ker(f) contains ker(g) restricted to dom(f)
    return all(f.images[x] == f.images[y]
               for x in df for y in df if g.images[x] == g.images[y])


def leq_J(f: PartialMap, g: PartialMap) -> bool:
    return f.rank <= g.rank


def green_formula_profile(f: PartialMap, g: PartialMap) -> dict:
    """All clauses of the image/kernel/rank description of Green's relations."""
    L = f.image == g.image
    R = f.kernel == g.kernel and set(f.domain) == set(g.domain)
    J = f.rank == g.rank
    return {
        "leq_L": leq_L(f, g),
        "leq_R": leq_R(f, g),
        "leq_J": leq_J(f, g),
        "L": L,
        "R": R,
        "H": L and R,
        "D": J,
        "J": J,
    }


def formula_labels(elements: Sequence[PartialMap]) -> dict:
    """Class labels of L, R, H, D=J on a full monoid from image/kernel/rank."""
    L = [tuple(sorted(e.image)) for e in elements]
    R = [(e.domain, e.kernel) for e in elements]
    return {
        "L": L,
        "R": R,
        "H": list(zip(L, R)),
        "D": [e.rank for e in elements],
        "J": [e.rank for e in elements],
    }


def dclass_combinatorics(kind: str, n: int) -> list:
    """Closed-form per-rank counts of L-, R-, H-classes for Q_n."""
    z = 1 if kind == "T" else 0
    rows = []
    for mu in range(z, n + 1):
        nL = binomial(n, mu)
        if kind == "T":
            nR = stirling2(n, mu)
        elif kind == "PT":
            nR = stirling2(n + 1, mu + 1)
        elif kind == "I":
            nR = binomial(n, mu)
        else:
            raise ValueError(kind)
        if kind == "T":
            groups = nL * mu ** (n - mu)
        elif kind == "PT":
            groups = nL * (mu + 1) ** (n - mu)
        else:
            groups = nL
        rows.append({
            "rank": mu,
            "group_H": groups,
            "L_classes": nL,
            "R_classes": nR,
            "H_classes": nL * nR,
            "H_size": math.factorial(mu),
            "size": nL * nR * math.factorial(mu),
        })
    return rows


def ig_TX_check(n: int, budget: int | None = None) -> dict:
    """IG(T_n) against {id} ∪ (T_n ∖ S_n), and its rank and idempotent rank.

    The closed value is 3 for n = 2 and C(n, 2) + 1 otherwise.
    """
    from .rank import DEFAULT_BUDGET, idrank_exact, rank_exact
    from .semigroup import idempotent_generated

    if n < 2:
        raise PreconditionError("need n >= 2")
    S = build_monoid("T", n)
    IG = idempotent_generated(S)
    predicted = tuple(i for i, f in enumerate(S.elements) if f.rank < n or i == S.identity)
    budget = budget or DEFAULT_BUDGET
    r = rank_exact(IG, budget)
    ir = idrank_exact(IG, budget)
    formula = 3 if n == 2 else binomial(n, 2) + 1
    return {
        "n": n,
        "size": len(IG),
        "membership_ok": IG.members == predicted,
        "formula": formula,
        "rank": r,
        "idrank": ir,
        "ok": IG.members == predicted and r.value == formula == ir.value,
    }
