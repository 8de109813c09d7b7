"""Directed wedge/triangle taxonomy, exact census and closure statistics.

Wedge types are named from the center vertex:

    out        two basic out-edges            C(dout, 2)
    path       one basic in, one basic out    din * dout
    in         two basic in-edges             C(din, 2)
    recip_in   reciprocal + basic in-edge     din * drec
    recip_out  reciprocal + basic out-edge    dout * drec
    recip_tot  two reciprocal edges           C(drec, 2)

Triangles have exactly one relation per vertex pair and fall into seven
types: trans, loop (directed 3-cycle), out_recip / path_recip / in_recip
(one reciprocal edge; the third vertex is a source / on a path / a sink),
two_recip and three_recip.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import NotATriangleError, SizeCapError, UndefinedValueError
from .graph import DegreeTriple, Digraph, EdgeRelation, relations

F, B, R = EdgeRelation.FORWARD, EdgeRelation.BACKWARD, EdgeRelation.RECIPROCAL


class WedgeType(enum.IntEnum):
    OUT = 0
    PATH = 1
    IN = 2
    RECIP_IN = 3
    RECIP_OUT = 4
    RECIP_TOT = 5

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def numeral(self) -> str:
        return ("i", "ii", "iii", "iv", "v", "vi")[self]

    @property
    def homogeneous(self) -> bool:
        return self in (WedgeType.OUT, WedgeType.IN, WedgeType.RECIP_TOT)

    @property
    def reciprocal_edges(self) -> int:
        return (0, 0, 0, 1, 1, 2)[self]


class TriangleType(enum.IntEnum):
    TRANS = 0
    LOOP = 1
    OUT_RECIP = 2
    PATH_RECIP = 3
    IN_RECIP = 4
    TWO_RECIP = 5
    THREE_RECIP = 6

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def letter(self) -> str:
        return "abcdefg"[self]


CYCLIC_TYPES = (TriangleType.LOOP, TriangleType.PATH_RECIP, TriangleType.TWO_RECIP, TriangleType.THREE_RECIP)

RECIP_GROUPS = {
    0: (WedgeType.OUT, WedgeType.PATH, WedgeType.IN),
    1: (WedgeType.RECIP_IN, WedgeType.RECIP_OUT),
    2: (WedgeType.RECIP_TOT,),
}

# rows: triangle type, columns: wedge type (out, path, in, recip_in, recip_out, recip_tot)
_CHI = np.array(
    [
        [1, 1, 1, 0, 0, 0],  # trans
        [0, 3, 0, 0, 0, 0],  # loop
        [1, 0, 0, 2, 0, 0],  # out_recip: source vertex has an out-wedge, the pair has recip_in
        [0, 1, 0, 1, 1, 0],  # path_recip
        [0, 0, 1, 0, 2, 0],  # in_recip: sink vertex has an in-wedge, the pair has recip_out
        [0, 0, 0, 1, 1, 1],  # two_recip
        [0, 0, 0, 0, 0, 3],  # three_recip
    ],
    dtype=np.int64,
)
_CHI.setflags(write=False)

CLOSURE_PAIRS: tuple[tuple[WedgeType, TriangleType], ...] = tuple(
    (psi, tau) for psi in WedgeType for tau in TriangleType if _CHI[tau, psi]
)


def chi(psi: WedgeType, tau: TriangleType) -> int:
    """Number of ``psi``-wedges inside one ``tau``-triangle."""
    return int(_CHI[TriangleType(tau), WedgeType(psi)])


def chi_matrix() -> np.ndarray:
    """Read-only (7, 6) array indexed ``[tau, psi]``."""
    return _CHI


def wedge_type_at(rel_a: EdgeRelation, rel_b: EdgeRelation) -> WedgeType:
    """Wedge type given the relations (center, end) for both ends."""
    kinds = sorted((EdgeRelation(rel_a), EdgeRelation(rel_b)))
    return {
        (F, F): WedgeType.OUT,
        (F, B): WedgeType.PATH,
        (B, B): WedgeType.IN,
        (B, R): WedgeType.RECIP_IN,
        (F, R): WedgeType.RECIP_OUT,
        (R, R): WedgeType.RECIP_TOT,
    }[tuple(kinds)]


def wedge_counts_at_vertex(d: DegreeTriple) -> dict[WedgeType, int]:
    din, dout, drec = d[:3]
    return {
        WedgeType.OUT: math.comb(dout, 2),
        WedgeType.PATH: din * dout,
        WedgeType.IN: math.comb(din, 2),
        WedgeType.RECIP_IN: din * drec,
        WedgeType.RECIP_OUT: dout * drec,
        WedgeType.RECIP_TOT: math.comb(drec, 2),
    }


def wedge_count_arrays(G: Digraph) -> np.ndarray:
    """Per-vertex wedge counts, shape ``(6, n)`` indexed by :class:`WedgeType`."""
    din, dout, drec = G.din, G.dout, G.drec
    return np.stack(
        [
            dout * (dout - 1) // 2,
            din * dout,
            din * (din - 1) // 2,
            din * drec,
            dout * drec,
            drec * (drec - 1) // 2,
        ]
    ).astype(np.int64)


def total_wedge_counts(G: Digraph) -> tuple[dict[WedgeType, int], int]:
    per_type = wedge_count_arrays(G).sum(axis=1)
    counts = {psi: int(per_type[psi]) for psi in WedgeType}
    return counts, sum(counts.values())


def classify_triangle(rel12, rel13, rel23) -> TriangleType:
    """Type of the triangle on ordered vertices ``(1, 2, 3)``.

    ``relXY`` is the relation of the pair (X, Y) seen from X.
    """
    rels = {(0, 1): EdgeRelation(rel12), (0, 2): EdgeRelation(rel13), (1, 2): EdgeRelation(rel23)}
    if any(r is EdgeRelation.NONE for r in rels.values()):
        raise NotATriangleError("every vertex pair of a triangle needs an edge")

    recip = [pair for pair, r in rels.items() if r is R]
    if len(recip) == 3:
        return TriangleType.THREE_RECIP
    if len(recip) == 2:
        return TriangleType.TWO_RECIP

    outdeg = [0, 0, 0]
    for (x, y), r in rels.items():
        if r is F:
            outdeg[x] += 1
        elif r is B:
            outdeg[y] += 1
    if not recip:
        return TriangleType.LOOP if outdeg == [1, 1, 1] else TriangleType.TRANS
    (third,) = {0, 1, 2} - set(recip[0])
    return {2: TriangleType.OUT_RECIP, 1: TriangleType.PATH_RECIP, 0: TriangleType.IN_RECIP}[outdeg[third]]


def _build_pattern_table() -> np.ndarray:
    # index [rel12, rel13, rel23] with codes 0..3; -1 marks "not a triangle"
    table = np.full((4, 4, 4), -1, dtype=np.int8)
    for a, b, c in itertools.product((F, B, R), repeat=3):
        table[a, b, c] = classify_triangle(a, b, c)
    table.setflags(write=False)
    return table


PATTERN_TABLE = _build_pattern_table()


def classify_many(rel12: np.ndarray, rel13: np.ndarray, rel23: np.ndarray) -> np.ndarray:
    """Vectorized :func:`classify_triangle`; -1 where some pair has no edge."""
    return PATTERN_TABLE[rel12, rel13, rel23]


def _counts_dict(counts) -> dict[TriangleType, int]:
    return {tau: int(counts[tau]) for tau in TriangleType}


def default_threads() -> int:
    env = os.environ.get("TRIADIC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


_PAIR_CHUNK = 1 << 22


def _oriented_adjacency(G: Digraph):
    """Keep each edge at the endpoint with the smaller (total degree, id)."""
    rank = np.empty(G.n, dtype=np.int64)
    rank[np.lexsort((np.arange(G.n), G.dtotal))] = np.arange(G.n)
    rows = np.repeat(np.arange(G.n, dtype=np.int64), np.diff(G.nbr_ptr))
    keep = rank[rows] < rank[G.nbr_idx]
    ptr = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows[keep], minlength=G.n), out=ptr[1:])
    return ptr, G.nbr_idx[keep].astype(np.int64), G.nbr_rel[keep]


def _vertex_chunks(ptr: np.ndarray, budget: int) -> list[tuple[int, int]]:
    deg = np.diff(ptr)
    pairs = np.cumsum(deg * (deg - 1) // 2)
    chunks, start, n = [], 0, deg.size
    while start < n:
        base = pairs[start - 1] if start else 0
        stop = int(np.searchsorted(pairs, base + budget, side="right"))
        stop = max(stop, start + 1)
        chunks.append((start, min(stop, n)))
        start = stop
    return chunks


def _census_chunk(G, ptr, nbr, rel, lo: int, hi: int) -> np.ndarray:
    a, b = ptr[lo], ptr[hi]
    if b - a < 2:
        return np.zeros(7, dtype=np.int64)
    seg_end = np.repeat(ptr[lo + 1 : hi + 1], np.diff(ptr[lo : hi + 1]))
    pos = np.arange(a, b, dtype=np.int64)
    later = seg_end - pos - 1
    total = int(later.sum())
    if total == 0:
        return np.zeros(7, dtype=np.int64)
    first = np.repeat(pos, later)
    starts = np.cumsum(later) - later
    second = first + 1 + (np.arange(total, dtype=np.int64) - np.repeat(starts, later))

    r_xy = relations(G, nbr[first], nbr[second])
    closed = r_xy != 0
    types = classify_many(rel[first[closed]], rel[second[closed]], r_xy[closed])
    return np.bincount(types, minlength=7).astype(np.int64)


def enumerate_triangle_census(G: Digraph, threads: int | None = None) -> dict[TriangleType, int]:
    """Exact triangle counts per type.

    Each edge is assigned to its endpoint of smaller total degree (ties broken
    by vertex id) and each vertex checks only the wedges formed by its own
    assigned edges, so every triangle is found once, at its lowest-ranked
    vertex.  Work is split into vertex chunks; counts are summed, so the
    result does not depend on ``threads``.
    """
    ptr, nbr, rel = _oriented_adjacency(G)
    chunks = _vertex_chunks(ptr, _PAIR_CHUNK)
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(chunks) == 1:
        parts = [_census_chunk(G, ptr, nbr, rel, lo, hi) for lo, hi in chunks]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: _census_chunk(G, ptr, nbr, rel, *c), chunks))
    return _counts_dict(np.sum(parts, axis=0) if parts else np.zeros(7, dtype=np.int64))


BRUTE_FORCE_CAP = 2000


def brute_force_census(G: Digraph, cap: int = BRUTE_FORCE_CAP) -> dict[TriangleType, int]:
    """O(n^3) reference census over every vertex triple (testing oracle)."""
    if G.n > cap:
        raise SizeCapError(f"brute force census refused: n={G.n} exceeds cap {cap}")
    n = G.n
    rel = np.zeros((n, n), dtype=np.int8)
    rows = np.repeat(np.arange(n), np.diff(G.nbr_ptr))
    rel[rows, G.nbr_idx] = G.nbr_rel

    counts = np.zeros(7, dtype=np.int64)
    for a in range(n - 2):
        # every triple a < b < c, as a dense (b, c) grid
        r_ab = rel[a, a + 1 :]
        grid = rel[a + 1 :, a + 1 :]
        mask = np.triu((r_ab[:, None] != 0) & (r_ab[None, :] != 0) & (grid != 0), k=1)
        b, c = np.nonzero(mask)
        if b.size:
            counts += np.bincount(PATTERN_TABLE[r_ab[b], r_ab[c], grid[b, c]], minlength=7)
    return _counts_dict(counts)


@dataclass
class CensusReport:
    """Wedge/triangle counts and the closure statistics derived from them.

    ``triangle_counts`` holds ints for an exact census and floats for an
    estimated one.  ``undefined`` names values that were set to 0 because of
    a zero denominator.
    """

    n: int
    m_basic: int
    m_rec: int
    wedge_counts: dict[WedgeType, int]
    triangle_counts: dict[TriangleType, float]
    closures: dict[tuple[WedgeType, TriangleType], float]
    reciprocity: float
    transitivity: float
    undefined: list[str] = field(default_factory=list)
    estimation: dict[str, Any] | None = None

    @property
    def total_wedges(self) -> int:
        return sum(self.wedge_counts.values())

    @property
    def total_triangles(self) -> float:
        return sum(self.triangle_counts.values())

    @property
    def estimated(self) -> bool:
        return self.estimation is not None

    @property
    def wedge_percentages(self) -> dict[WedgeType, float]:
        total = self.total_wedges
        return {psi: (100.0 * c / total if total else 0.0) for psi, c in self.wedge_counts.items()}

    @property
    def triangle_percentages(self) -> dict[TriangleType, float]:
        total = self.total_triangles
        return {tau: (100.0 * c / total if total else 0.0) for tau, c in self.triangle_counts.items()}

    def total_closure(self, psi: WedgeType) -> float:
        return sum(self.closures[(psi, tau)] for tau in TriangleType if chi(psi, tau))


def make_report(
    G: Digraph,
    wedge_counts: dict[WedgeType, int],
    triangle_counts: dict[TriangleType, float],
    closures: dict[tuple[WedgeType, TriangleType], float] | None = None,
    estimation: dict[str, Any] | None = None,
) -> CensusReport:
    """Assemble a report; closures default to chi * |T_tau| / |W_psi|."""
    undefined = []
    if closures is None:
        closures = {}
        for psi, tau in CLOSURE_PAIRS:
            w = wedge_counts[psi]
            closures[(psi, tau)] = chi(psi, tau) * triangle_counts[tau] / w if w else 0.0
    for psi in WedgeType:
        if wedge_counts[psi] == 0:
            undefined.append(f"closures.{psi.label}")
    total_w = sum(wedge_counts.values())
    if total_w:
        kappa = 3 * sum(triangle_counts.values()) / total_w
    else:
        kappa = 0.0
        undefined.append("transitivity")
    if G.m:
        r = G.m_rec / G.m
    else:
        r = 0.0
        undefined.append("reciprocity")
    return CensusReport(
        n=G.n,
        m_basic=G.m_basic,
        m_rec=G.m_rec,
        wedge_counts=dict(wedge_counts),
        triangle_counts=dict(triangle_counts),
        closures=closures,
        reciprocity=r,
        transitivity=kappa,
        undefined=undefined,
        estimation=estimation,
    )


def closures(G: Digraph, threads: int | None = None) -> CensusReport:
    """Exact census report with all 15 closure values."""
    wedges, _ = total_wedge_counts(G)
    return make_report(G, wedges, enumerate_triangle_census(G, threads=threads))


def _as_report(G_or_report, threads=None) -> CensusReport:
    if isinstance(G_or_report, CensusReport):
        return G_or_report
    return closures(G_or_report, threads=threads)


def recip_group_closure(G: Digraph | CensusReport, k: int) -> float:
    """Fraction of wedges with ``k`` reciprocal edges that close into any triangle."""
    if k not in RECIP_GROUPS:
        raise ValueError("k must be 0, 1 or 2")
    rep = _as_report(G)
    group = RECIP_GROUPS[k]
    wedges = sum(rep.wedge_counts[psi] for psi in group)
    if wedges == 0:
        raise UndefinedValueError(f"no wedges with {k} reciprocal edge(s)")
    closed = sum(chi(psi, tau) * rep.triangle_counts[tau] for psi in group for tau in TriangleType)
    return closed / wedges


def cyclic_breakdown(G: Digraph | CensusReport) -> dict[TriangleType, float]:
    """Share of loop, path_recip, two_recip and three_recip among cyclic triangles."""
    rep = _as_report(G)
    total = sum(rep.triangle_counts[tau] for tau in CYCLIC_TYPES)
    if total == 0:
        raise UndefinedValueError("graph has no triangle containing a cycle")
    return {tau: rep.triangle_counts[tau] / total for tau in CYCLIC_TYPES}
