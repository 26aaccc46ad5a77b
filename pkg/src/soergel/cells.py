"""Cells, the a-function, top structure constants, and the asymptotic ring.

Everything here needs a finite group: the preorders close over the
whole element list, and the a-function is a global maximum

    a(z) = max over x, y of deg_v mu_{x,y}^z.

The top coefficients gamma_{x,y}^z (of v^{a(z)} inside mu_{x,y}^z) are
the structure constants of the asymptotic ring J = (+) Z j_x with
j_x j_y = sum_z gamma_{x,y}^z j_z; `jring_verify` checks the ring laws
that survive decategorification — associativity, the distinguished
involutions summing to per-cell units, and the cyclic/inverse
symmetries of (x, y, z) -> gamma_{x,y}^{z^{-1}}.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable

import networkx as nx

from .coxeter import CapExceeded, CoxElt, CoxeterSystem, format_word
from .hecke import KLScan, KLTable, mu


def _finite_elements(system: CoxeterSystem) -> list[CoxElt]:
    try:
        return system.enumerate()
    except CapExceeded as exc:
        raise CapExceeded(
            "cell data is only defined for finite groups here; " + str(exc)
        ) from exc


class CellPartition:
    """Cells per side with the induced preorder on cell indices.

    `cells(side)` lists frozensets in a deterministic order;
    `leq(side, i, j)` says whether cell i lies below cell j in the
    preorder that the basis-product support closure generates.
    """

    def __init__(self, data: dict[str, tuple[list[frozenset[CoxElt]], set]]):
        self._data = data
        self._where = {
            side: {x: i for i, cell in enumerate(cells) for x in cell}
            for side, (cells, _) in data.items()
        }

    def sides(self) -> list[str]:
        return sorted(self._data)

    def cells(self, side: str) -> list[frozenset[CoxElt]]:
        return self._data[side][0]

    def leq(self, side: str, i: int, j: int) -> bool:
        return i == j or (i, j) in self._data[side][1]

    def cell_index(self, side: str, x: CoxElt) -> int:
        return self._where[side][x]

    def cell_of(self, side: str, x: CoxElt) -> frozenset[CoxElt]:
        return self.cells(side)[self.cell_index(side, x)]


def _cells_of_digraph(graph: nx.DiGraph, order_key) -> tuple[list[frozenset], set]:
    cells = sorted(
        (frozenset(c) for c in nx.strongly_connected_components(graph)),
        key=order_key,
    )
    position = {x: i for i, cell in enumerate(cells) for x in cell}
    cond = nx.condensation(graph)
    # condensation numbers its own nodes; translate through any member
    mine_of_cond = {
        node: position[next(iter(members))]
        for node, members in cond.nodes(data="members")
    }
    leq = set()
    for node in cond.nodes:
        for below in nx.descendants(cond, node):
            leq.add((mine_of_cond[below], mine_of_cond[node]))
    return cells, leq


def compute_cells(table: KLTable) -> CellPartition:
    """Left/right/two-sided cells from generator-product support closure.

    x <=_L y exactly when b_x appears in some b_w b_y; edges from simple
    w already generate that preorder, so the graph has an edge y -> z
    for every z in the support of b_s b_y."""
    W = table.system
    els = _finite_elements(W)
    key = lambda cell: min((x.length, x.word) for x in cell)

    left = nx.DiGraph()
    right = nx.DiGraph()
    both = nx.DiGraph()
    for g in (left, right, both):
        g.add_nodes_from(els)
    for y in els:
        y_inv = y.inverse()
        for s in range(W.rank):
            for z in mu(table, W.simple(s), y):
                left.add_edge(y, z)
                both.add_edge(y, z)
            for z in mu(table, W.simple(s), y_inv):
                right.add_edge(y, z.inverse())
                both.add_edge(y, z.inverse())

    return CellPartition(
        {
            "L": _cells_of_digraph(left, key),
            "R": _cells_of_digraph(right, key),
            "LR": _cells_of_digraph(both, key),
        }
    )


def a_function(table: KLTable) -> dict[CoxElt, int]:
    """a(z) = max over all pairs of deg_v mu_{x,y}^z, by exhaustive sweep."""
    W = table.system
    els = _finite_elements(W)
    scan = KLScan(table)
    amax = [0] * scan.n
    for y in range(scan.n):
        for _x, expansion in scan.sweep(y):
            for z, m in expansion.items():
                d = max(m)
                if d > amax[z]:
                    amax[z] = d
    return {els[i]: amax[i] for i in range(scan.n)}


def gamma(table: KLTable, atable: dict[CoxElt, int], x: CoxElt, y: CoxElt, z: CoxElt) -> int:
    """Single top coefficient: v^{a(z)} inside mu_{x,y}^z."""
    m = mu(table, x, y).get(table.system.element(z))
    if m is None:
        return 0
    return m.coeff(atable[table.system.element(z)])


class GammaTable:
    """Sparse (x, y) -> {z: gamma_{x,y}^z != 0} over one finite system."""

    def __init__(self, system: CoxeterSystem, rows: dict):
        self.system = system
        self.rows = rows

    def get(self, x: CoxElt, y: CoxElt, z: CoxElt) -> int:
        return self.rows.get((x, y), {}).get(z, 0)

    def jmul(self, x: CoxElt, y: CoxElt) -> dict[CoxElt, int]:
        """The product j_x j_y as a sparse integer vector."""
        return dict(self.rows.get((x, y), {}))

    def entries(self):
        for (x, y), row in self.rows.items():
            for z, g in row.items():
                yield x, y, z, g


def gamma_table(table: KLTable, atable: dict[CoxElt, int]) -> GammaTable:
    """All nonzero gamma constants by a full second sweep."""
    W = table.system
    els = _finite_elements(W)
    scan = KLScan(table)
    avals = [atable[x] for x in els]
    rows: dict = {}
    for y in range(scan.n):
        for x, expansion in scan.sweep(y):
            row = {}
            for z, m in expansion.items():
                g = m.get(avals[z], 0)
                if g:
                    row[els[z]] = g
            if row:
                rows[(els[x], els[y])] = row
    return GammaTable(W, rows)


def distinguished_involutions(
    gtable: GammaTable, cells: CellPartition
) -> list[CoxElt]:
    """Per left cell, the unique d with gamma_{x^{-1}, x}^d = 1 for all x.

    Existence, uniqueness, and d^2 = e are all asserted: this is a
    definition-by-verification, so a convention bug shows up here as an
    error rather than as silently wrong data."""
    W = gtable.system
    found = []
    for cell in cells.cells("L"):
        members = sorted(cell)
        hits = [
            d
            for d in members
            if all(gtable.get(x.inverse(), x, d) == 1 for x in members)
        ]
        if len(hits) != 1:
            raise ValueError(
                f"left cell {{{', '.join(map(str, members))}}} has "
                f"{len(hits)} distinguished candidates; expected exactly 1"
            )
        d = hits[0]
        if not (d * d).is_identity:
            raise ValueError(f"distinguished candidate {d} is not an involution")
        found.append(d)
    return sorted(found)


def jring_verify(
    gtable: GammaTable,
    cells: CellPartition,
    distinguished: Iterable[CoxElt],
    atable: dict[CoxElt, int] | None = None,
) -> list[dict]:
    """Ring laws of J, checked exhaustively cell by cell.

    Returns one report entry per (check, two-sided cell); an entry with
    status "violated" carries the first counterexample as its witness."""
    dset = set(distinguished)
    report = []

    # gamma must never couple different two-sided cells
    stray = None
    for x, y, z, g in gtable.entries():
        i = cells.cell_index("LR", x)
        if cells.cell_index("LR", y) != i or cells.cell_index("LR", z) != i:
            stray = f"gamma[{x},{y}]^{z}={g}"
            break
    report.append(
        {
            "check": "gamma-cross-cell-vanishing",
            "scope": "all nonzero entries",
            "status": "violated" if stray else "ok",
            "witness": stray,
        }
    )

    for i, cell in enumerate(cells.cells("LR")):
        members = sorted(cell)
        label = f"two-sided cell #{i} (size {len(members)}"
        if atable is not None:
            label += f", a={atable[members[0]]}"
        label += ")"

        def row(x, y):
            return gtable.rows.get((x, y), {})

        assoc = None
        for x in members:
            for y in members:
                xy = row(x, y)
                for z in members:
                    lhs: dict = {}
                    for u, c in xy.items():
                        for w, g in row(u, z).items():
                            lhs[w] = lhs.get(w, 0) + c * g
                    rhs: dict = {}
                    for u, c in row(y, z).items():
                        for w, g in row(x, u).items():
                            rhs[w] = rhs.get(w, 0) + c * g
                    if {k: v for k, v in lhs.items() if v} != {
                        k: v for k, v in rhs.items() if v
                    }:
                        assoc = f"(j_{x} j_{y}) j_{z} != j_{x} (j_{y} j_{z})"
                        break
                if assoc:
                    break
            if assoc:
                break
        report.append(
            {
                "check": "jring-associativity",
                "scope": label,
                "status": "violated" if assoc else "ok",
                "witness": assoc,
            }
        )

        local_d = [d for d in members if d in dset]
        unit_bad = None
        for x in members:
            left_acc: dict = {}
            right_acc: dict = {}
            for d in local_d:
                for w, g in row(d, x).items():
                    left_acc[w] = left_acc.get(w, 0) + g
                for w, g in row(x, d).items():
                    right_acc[w] = right_acc.get(w, 0) + g
            want = {x: 1}
            if {k: v for k, v in left_acc.items() if v} != want:
                unit_bad = f"sum_d j_d j_{x} != j_{x}"
                break
            if {k: v for k, v in right_acc.items() if v} != want:
                unit_bad = f"j_{x} sum_d j_d != j_{x}"
                break
        report.append(
            {
                "check": "jring-unit",
                "scope": label,
                "status": "violated" if unit_bad else "ok",
                "witness": unit_bad,
            }
        )

        cyc_bad = None
        inv_bad = None
        for x in members:
            for y in members:
                for z in members:
                    tilde = gtable.get(x, y, z.inverse())
                    if tilde != gtable.get(y, z, x.inverse()):
                        cyc_bad = cyc_bad or f"({x},{y},{z})"
                    if tilde != gtable.get(y.inverse(), x.inverse(), z):
                        inv_bad = inv_bad or f"({x},{y},{z})"
        report.append(
            {
                "check": "jring-cyclicity",
                "scope": label,
                "status": "violated" if cyc_bad else "ok",
                "witness": cyc_bad,
            }
        )
        report.append(
            {
                "check": "jring-inversion-symmetry",
                "scope": label,
                "status": "violated" if inv_bad else "ok",
                "witness": inv_bad,
            }
        )
    return report


# -- tabular exports ---------------------------------------------------------


def a_function_csv(system: CoxeterSystem, atable: dict[CoxElt, int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["element", "length", "a"])
    for x in system.enumerate():
        writer.writerow([format_word(x.word), x.length, atable[x]])
    return buf.getvalue()


def cell_membership_csv(
    system: CoxeterSystem, partition: CellPartition, atable: dict[CoxElt, int] | None = None
) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["element", "length", "left_cell", "right_cell", "two_sided_cell"]
    if atable is not None:
        header.append("a")
    writer.writerow(header)
    for x in system.enumerate():
        row = [
            format_word(x.word),
            x.length,
            partition.cell_index("L", x),
            partition.cell_index("R", x),
            partition.cell_index("LR", x),
        ]
        if atable is not None:
            row.append(atable[x])
        writer.writerow(row)
    return buf.getvalue()
