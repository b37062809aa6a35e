"""Egg-box diagrams as plain text or graphviz dot.

The renderer only lays out what ``green.eggbox`` computed; inflation
separators come from the hat relations of ``ideals``.
"""

from __future__ import annotations

from dataclasses import dataclass
from html import escape

import numpy as np

from .errors import PreconditionError
from .green import EggBox, eggbox, green
from .ideals import Context, hat_relations, regular_substitute
from .semigroup import FiniteSemigroup, opposite
from .transformations import PartialMap, format_literal

TARGETS = ("S", "Sa", "aS", "RegSa", "RegaS")
MAX_CELL_LABELS = 6


@dataclass
class Diagram:
    semigroup: FiniteSemigroup
    box: EggBox
    names: list                  # cluster name per D-class
    order: list                  # D-class indices, top of the J-order first
    row_breaks: dict             # D index -> set of row positions preceded by a heavy rule
    col_breaks: dict

    @property
    def counts(self) -> dict:
        return {"D": len(self.box.dclasses),
                "L": sum(len(d.cols) for d in self.box.dclasses),
                "R": sum(len(d.rows) for d in self.box.dclasses),
                "H": sum(len(d.rows) * len(d.cols) for d in self.box.dclasses)}


def label(payload) -> str:
    if isinstance(payload, PartialMap):
        return format_literal(payload)
    return str(payload)


def _levels(hasse: list, n: int) -> list:
    """Longest distance from a maximal class."""
    depth = [0] * n
    changed = True
    while changed:
        changed = False
        for hi, lo in hasse:
            if depth[lo] < depth[hi] + 1:
                depth[lo] = depth[hi] + 1
                changed = True
    return depth


def _names(S: FiniteSemigroup, box: EggBox) -> list:
    if not all(isinstance(e, PartialMap) for e in S.elements):
        return [f"D{d.index}" for d in box.dclasses]
    ranks = [S.elements[d.min_element].rank for d in box.dclasses]
    seen: dict = {}
    names = []
    for d, r in zip(box.dclasses, ranks):
        if ranks.count(r) == 1:
            names.append(f"D{r}")
        else:
            k = seen.get(r, 0)
            seen[r] = k + 1
            names.append(f"D{r}_{k}")
    return names


def _target(S: FiniteSemigroup, target: str, a: int | None, ctx: Context | None):
    """(semigroup to draw, hat labels by parent index for rows, for columns)."""
    if target == "S":
        return S, None, None
    if a is None:
        raise PreconditionError(f"target {target} needs an element a")
    ctx = ctx or Context(S)
    T = ctx.T
    if target == "Sa":
        return S.restrict(np.unique(T[:, a]), name=f"{S.name}a"), None, None
    if target == "aS":
        return S.restrict(np.unique(T[a]), name=f"a{S.name}"), None, None
    e, _ = regular_substitute(S, a, ctx)
    if T[e, e] != e:
        raise PreconditionError("Reg targets need a regular element a")
    if target == "RegSa":
        hat = hat_relations(S, e, ctx)
        rows = dict(zip(hat.P, hat.hat["R"].tolist()))
        return S.restrict(hat.P, name=f"Reg({S.name}a)"), rows, None
    if target == "RegaS":
        op = opposite(S)
        hat = hat_relations(op, e, Context(op))
        cols = dict(zip(hat.P, hat.hat["R"].tolist()))
        return S.restrict(hat.P, name=f"Reg(a{S.name})"), None, cols
    raise PreconditionError(f"unknown target {target!r}; expected one of {', '.join(TARGETS)}")


def build_diagram(S: FiniteSemigroup, target: str = "S", a: int | None = None,
                  ctx: Context | None = None) -> Diagram:
    sub, row_hat, col_hat = _target(S, target, a, ctx)
    box = eggbox(sub, green(sub))
    depth = _levels(box.hasse, len(box.dclasses))
    order = sorted(range(len(box.dclasses)), key=lambda i: (depth[i], i))
    # parent index of each local element, for the hat labels
    parent = [S.index_of(p) for p in sub.elements] if (row_hat or col_hat) else None
    row_breaks, col_breaks = {}, {}
    for d in box.dclasses:
        if row_hat is not None:
            key = lambda r: (row_hat[parent[r[0]]], r)
            d.rows.sort(key=key)
            row_breaks[d.index] = {i for i in range(1, len(d.rows))
                                   if row_hat[parent[d.rows[i][0]]] != row_hat[parent[d.rows[i - 1][0]]]}
        if col_hat is not None:
            key = lambda c: (col_hat[parent[c[0]]], c)
            d.cols.sort(key=key)
            col_breaks[d.index] = {j for j in range(1, len(d.cols))
                                   if col_hat[parent[d.cols[j][0]]] != col_hat[parent[d.cols[j - 1][0]]]}
        if row_hat is not None or col_hat is not None:
            _rebuild_cells(d)
    return Diagram(sub, box, _names(sub, box), order, row_breaks, col_breaks)


def _rebuild_cells(d):
    E = {x for row, g in zip(d.cells, d.group) for c, gg in zip(row, g) if gg for x in c}
    d.cells = [[tuple(sorted(set(r) & set(c))) for c in d.cols] for r in d.rows]
    d.group = [[any(x in E for x in cell) for cell in row] for row in d.cells]


def _cell_text(sub, cell, group) -> str:
    mark = "*" if group else ""
    if len(cell) <= MAX_CELL_LABELS:
        return mark + " ".join(label(sub.elements[x]) for x in cell)
    return f"{mark}[{len(cell)}]"


def to_text(diag: Diagram) -> str:
    sub = diag.semigroup
    out = [f"# {sub.name}: {len(sub)} elements, {len(diag.box.dclasses)} D-classes",
           "# * marks a group H-class; == and || mark inflation boundaries"]
    for i in diag.order:
        d = diag.box.dclasses[i]
        name = diag.names[i]
        kind = "regular" if d.is_regular else "non-regular"
        out.append(f"{name}: {len(d.rows)} x {len(d.cols)}, cell size {d.cell_size}, {kind}")
        texts = [[_cell_text(sub, c, g) for c, g in zip(row, grow)] for row, grow in zip(d.cells, d.group)]
        width = max(len(t) for row in texts for t in row)
        rb = diag.row_breaks.get(i, set())
        cb = diag.col_breaks.get(i, set())
        for r, row in enumerate(texts):
            if r in rb:
                out.append("  " + "=" * (len(row) * (width + 3)))
            line = "  "
            for c, t in enumerate(row):
                sep = "||" if c in cb else "| " if c else ""
                line += sep + t.ljust(width) + " "
            out.append(line.rstrip())
    names = diag.names
    for hi, lo in diag.box.hasse:
        out.append(f"{names[hi]} > {names[lo]}")
    return "\n".join(out) + "\n"


def to_dot(diag: Diagram) -> str:
    sub = diag.semigroup
    names = diag.names
    out = ["digraph eggbox {", "  rankdir=TB;", "  node [shape=plaintext, fontname=\"monospace\"];"]
    for i in diag.order:
        d = diag.box.dclasses[i]
        name = names[i]
        rb = diag.row_breaks.get(i, set())
        cb = diag.col_breaks.get(i, set())
        rows = []
        for r, (row, grow) in enumerate(zip(d.cells, d.group)):
            if r in rb:
                rows.append("<HR/>")
            tds = []
            for c, (cell, g) in enumerate(zip(row, grow)):
                if c in cb:
                    tds.append("<VR/>")
                color = ' BGCOLOR="lightgray"' if g else ""
                tds.append(f"<TD{color}>{escape(_cell_text(sub, cell, False))}</TD>")
            rows.append("<TR>" + "".join(tds) + "</TR>")
        table = '<TABLE BORDER="0" CELLBORDER="1" CELLSPACING="0">' + "".join(rows) + "</TABLE>"
        out.append(f"  subgraph cluster_{name} {{")
        out.append(f"    label=\"{name}\";")
        out.append(f"    {name} [label=<{table}>];")
        out.append("  }")
    for hi, lo in diag.box.hasse:
        out.append(f"  {names[hi]} -> {names[lo]};")
    out.append("}")
    return "\n".join(out) + "\n"


def render(S: FiniteSemigroup, target: str = "S", a: int | None = None, fmt: str = "text",
           ctx: Context | None = None) -> str:
    diag = build_diagram(S, target, a, ctx)
    if fmt == "text":
        return to_text(diag)
    if fmt == "dot":
        return to_dot(diag)
    raise PreconditionError(f"unknown format {fmt!r}")
