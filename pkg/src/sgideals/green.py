"""Green's preorders, relations and egg-box diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation
from .semigroup import FiniteSemigroup, idempotents

RELATIONS = ("L", "R", "H", "D", "J")


def _labels_from_equiv(eq: np.ndarray) -> np.ndarray:
    # each x is labelled by the least element of its class
    return np.argmax(eq, axis=1)


def _relabel(keys) -> np.ndarray:
    """Class ids numbered by first occurrence, i.e. by least member."""
    ids: dict = {}
    out = np.empty(len(keys), dtype=np.int64)
    for i, k in enumerate(keys):
        out[i] = ids.setdefault(k, len(ids))
    return out


def _union_find_join(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    N = len(a)
    parent = list(range(N))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lab in (a, b):
        for x in range(N):
            rx, ry = find(x), find(int(lab[x]))
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    return _relabel([find(x) for x in range(N)])


@dataclass
class GreenStructure:
    """Preorders and class partitions of one semigroup.

    ``classes[K][x]`` is the id of the K-class of x; ids are numbered in
    order of each class's least element.  ``leq_J`` is expanded from the
    class-level order.
    """

    size: int
    leq_L: np.ndarray = field(repr=False)
    leq_R: np.ndarray = field(repr=False)
    leq_J: np.ndarray = field(repr=False)
    classes: dict = field(repr=False)
    j_order: np.ndarray = field(repr=False)

    def label(self, K: str) -> np.ndarray:
        return self.classes[K]

    def count(self, K: str) -> int:
        return int(self.classes[K].max()) + 1

    def members(self, K: str, x: int) -> np.ndarray:
        lab = self.classes[K]
        return np.flatnonzero(lab == lab[x])

    def class_list(self, K: str) -> list:
        lab = self.classes[K]
        order = np.argsort(lab, kind="stable")
        bounds = np.flatnonzero(np.diff(lab[order])) + 1
        return [tuple(c.tolist()) for c in np.split(order, bounds)]

    def representatives(self, K: str) -> list:
        return [c[0] for c in self.class_list(K)]

    def related(self, K: str, x: int, y: int) -> bool:
        return bool(self.classes[K][x] == self.classes[K][y])

    def j_maximal(self) -> list:
        """D-class ids that are maximal in the J-order."""
        strict = self.j_order & ~np.eye(len(self.j_order), dtype=bool)
        return [int(c) for c in np.flatnonzero(~strict.any(axis=1))]


def green(S: FiniteSemigroup, check: bool = True) -> GreenStructure:
    """All five Green's relations of S, with D checked against L∘R and J."""
    T = S.table
    N = len(S)
    ar = np.arange(N)
    eye = np.eye(N, dtype=bool)
    # x <=_R y iff x in yS^1; row y of T lists yS
    leq_R = eye.copy()
    leq_R[T.ravel(), np.repeat(ar, N)] = True
    # x <=_L y iff x in S^1 y; column y of T lists Sy
    leq_L = eye.copy()
    leq_L[T.ravel(), np.tile(ar, N)] = True

    L = _relabel(_labels_from_equiv(leq_L & leq_L.T).tolist())
    R = _relabel(_labels_from_equiv(leq_R & leq_R.T).tolist())
    H = _relabel(list(zip(L.tolist(), R.tolist())))
    D = _union_find_join(_labels_from_equiv(leq_L & leq_L.T), _labels_from_equiv(leq_R & leq_R.T))

    nD = int(D.max()) + 1
    if check:
        # D = L o R: inside each D-class every L-class meets every R-class
        for d in range(nD):
            idx = D == d
            nl = len(np.unique(L[idx]))
            nr = len(np.unique(R[idx]))
            nh = len(np.unique(H[idx]))
            if nl * nr != nh:
                raise InvariantViolation(f"D-class {d} is not an L x R grid ({nl} x {nr} != {nh} cells)")

    # J-order between D-classes from two-sided ideals S^1 y S^1 = S^1 (y S^1)
    reps = np.array([np.flatnonzero(D == d)[0] for d in range(nD)])
    j_order = np.zeros((nD, nD), dtype=bool)
    for d, y in enumerate(reps):
        right = np.flatnonzero(leq_R[:, y])
        ideal = leq_L[:, right].any(axis=1)
        j_order[np.unique(D[ideal]), d] = True
    J_eq = j_order & j_order.T
    J_cls = _relabel(_labels_from_equiv(J_eq).tolist())
    J = J_cls[D]
    if check and not np.array_equal(J, D):
        raise InvariantViolation("J differs from D on a finite semigroup")
    leq_J = j_order[D[:, None], D[None, :]]
    return GreenStructure(N, leq_L, leq_R, leq_J, {"L": L, "R": R, "H": H, "D": D, "J": J}, j_order)


def classes_equal(S: FiniteSemigroup, G: GreenStructure, labels: dict) -> dict:
    """Compare engine partitions with externally supplied class keys per element."""
    out = {}
    for K, keys in labels.items():
        out[K] = bool(np.array_equal(_relabel(list(keys)), G.classes[K]))
    return out


# --- egg-box ---------------------------------------------------------------

@dataclass
class DClassBox:
    index: int
    rows: list          # R-classes as sorted element tuples
    cols: list          # L-classes
    cells: list         # cells[i][j] = sorted tuple (H-class)
    group: list         # group[i][j] = cell contains an idempotent
    cell_size: int

    @property
    def size(self) -> int:
        return len(self.rows) * len(self.cols) * self.cell_size

    @property
    def is_regular(self) -> bool:
        return any(any(r) for r in self.group)

    @property
    def min_element(self) -> int:
        return self.rows[0][0]


@dataclass
class EggBox:
    dclasses: list
    hasse: list          # (upper, lower) pairs of D-class indices

    def dclass_of(self, x: int) -> DClassBox:
        for d in self.dclasses:
            if any(x in r for r in d.rows):
                return d
        raise KeyError(x)


def eggbox(S: FiniteSemigroup, G: GreenStructure | None = None) -> EggBox:
    """Egg-box diagram; rows/columns and D-classes ordered by least element."""
    G = G or green(S)
    E = set(idempotents(S).tolist())
    L, R, D = G.classes["L"], G.classes["R"], G.classes["D"]
    boxes = []
    for d in range(G.count("D")):
        members = np.flatnonzero(D == d)
        rids = list(dict.fromkeys(R[members].tolist()))
        lids = list(dict.fromkeys(L[members].tolist()))
        rows = [tuple(np.flatnonzero(R == r).tolist()) for r in rids]
        cols = [tuple(np.flatnonzero(L == c).tolist()) for c in lids]
        rows.sort()
        cols.sort()
        cells, group = [], []
        sizes = set()
        for row in rows:
            rset = set(row)
            crow, grow = [], []
            for col in cols:
                cell = tuple(sorted(rset.intersection(col)))
                sizes.add(len(cell))
                crow.append(cell)
                grow.append(any(x in E for x in cell))
            cells.append(crow)
            group.append(grow)
        if len(sizes) != 1:
            raise InvariantViolation(f"D-class {d} has H-cells of different sizes {sorted(sizes)}")
        box = DClassBox(d, rows, cols, cells, group, sizes.pop())
        if box.is_regular:
            if not all(any(g) for g in group) or not all(any(g[j] for g in group) for j in range(len(cols))):
                raise InvariantViolation(f"regular D-class {d} has a row or column with no group cell")
        boxes.append(box)
    return EggBox(boxes, hasse_edges(G.j_order))


def hasse_edges(order: np.ndarray) -> list:
    """Transitive reduction of a partial order given as order[x, y] = x <= y."""
    n = len(order)
    strict = order & ~np.eye(n, dtype=bool)
    if (strict & strict.T).any():
        raise InvariantViolation("J-order is not antisymmetric")
    via = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    cover = strict & ~via
    return sorted((int(hi), int(lo)) for lo, hi in zip(*np.nonzero(cover)))
