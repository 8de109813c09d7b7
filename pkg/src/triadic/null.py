"""Random-direction null model.

Each undirected edge independently becomes reciprocal with probability ``r``
and otherwise gets one of its two directions with probability ``(1 - r)/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .census import (
    CLOSURE_PAIRS,
    CensusReport,
    TriangleType,
    WedgeType,
    closures,
    make_report,
)
from .errors import UndefinedValueError
from .graph import Digraph


def _check_r(r: float) -> float:
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reciprocity must lie in [0, 1], got {r}")
    return r


def null_wedge_probs(r: float) -> dict[WedgeType, float]:
    r = _check_r(r)
    q = 1.0 - r
    return {
        WedgeType.OUT: q * q / 4,
        WedgeType.PATH: q * q / 2,
        WedgeType.IN: q * q / 4,
        WedgeType.RECIP_IN: r * q,
        WedgeType.RECIP_OUT: r * q,
        WedgeType.RECIP_TOT: r * r,
    }


def null_triangle_probs(r: float) -> dict[TriangleType, float]:
    r = _check_r(r)
    q = 1.0 - r
    return {
        TriangleType.TRANS: 3 * q**3 / 4,
        TriangleType.LOOP: q**3 / 4,
        TriangleType.OUT_RECIP: 3 * r * q**2 / 4,
        TriangleType.PATH_RECIP: 3 * r * q**2 / 2,
        TriangleType.IN_RECIP: 3 * r * q**2 / 4,
        TriangleType.TWO_RECIP: 3 * r**2 * q,
        TriangleType.THREE_RECIP: r**3,
    }


@dataclass(frozen=True)
class NullPrediction:
    r: float
    wedge_probs: dict[WedgeType, float]
    triangle_probs: dict[TriangleType, float]


def null_prediction(r: float) -> NullPrediction:
    return NullPrediction(float(r), null_wedge_probs(r), null_triangle_probs(r))


def undirect(G: Digraph) -> np.ndarray:
    """Undirected projection as a sorted ``(m, 2)`` array of pairs ``u < w``."""
    rows = np.repeat(np.arange(G.n, dtype=np.int64), np.diff(G.nbr_ptr))
    cols = G.nbr_idx.astype(np.int64)
    keep = rows < cols
    return np.column_stack([rows[keep], cols[keep]])


_M64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x + np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def pair_uniforms(a: np.ndarray, b: np.ndarray, seed: int) -> np.ndarray:
    """Uniform [0, 1) variate per unordered pair, keyed by ``(min, max, seed)``."""
    lo = np.minimum(a, b).astype(np.uint64)
    hi = np.maximum(a, b).astype(np.uint64)
    seed_key = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
    h = _splitmix64(_splitmix64(lo ^ seed_key) ^ hi)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def randomize_directions(pairs, r: float, seed: int = 0, n: int | None = None) -> Digraph:
    """Assign reciprocity/direction to undirected pairs independently per edge.

    The outcome for an edge depends only on its vertex pair and the seed, not
    on the order of ``pairs``.  Duplicate pairs are treated as one edge.
    """
    r = _check_r(r)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    a = np.minimum(pairs[:, 0], pairs[:, 1])
    b = np.maximum(pairs[:, 0], pairs[:, 1])
    if n is None:
        n = int(b.max()) + 1 if b.size else 0
    u = pair_uniforms(a, b, seed)
    rec = u < r
    forward = ~rec & (u < r + (1.0 - r) / 2)
    backward = ~rec & ~forward
    src = np.concatenate([a[rec], b[rec], a[forward], b[backward]])
    dst = np.concatenate([b[rec], a[rec], b[forward], a[backward]])
    return Digraph.from_edges(n, src, dst)


@dataclass
class DeviationReport:
    reciprocity: float
    total_triangles: int
    observed: dict[TriangleType, float]
    predicted: dict[TriangleType, float]

    @property
    def ratios(self) -> dict[TriangleType, float | None]:
        return {
            tau: (self.observed[tau] / p if p > 0 else None) for tau, p in self.predicted.items()
        }


def deviation_report(G: Digraph | CensusReport, threads: int | None = None) -> DeviationReport:
    """Observed triangle-type fractions against the null model at the graph's own r."""
    rep = G if isinstance(G, CensusReport) else closures(G, threads=threads)
    total = rep.total_triangles
    if total == 0:
        raise UndefinedValueError("graph has no triangles")
    observed = {tau: rep.triangle_counts[tau] / total for tau in TriangleType}
    return DeviationReport(rep.reciprocity, total, observed, null_triangle_probs(rep.reciprocity))


def randomized_report(
    G: Digraph,
    r: float | None = None,
    seed: int = 0,
    repeats: int = 1,
    threads: int | None = None,
) -> CensusReport:
    """Exact census of ``G`` with directions re-drawn from the null model.

    ``r`` defaults to the reciprocity of ``G``.  With ``repeats > 1`` counts,
    closures and reciprocity are averaged over independent assignments with
    seeds ``seed, seed + 1, ...``.
    """
    if repeats < 1:
        raise ValueError("repeats must be positive")
    if r is None:
        r = G.m_rec / G.m if G.m else 0.0
    pairs = undirect(G)
    reports = [
        closures(randomize_directions(pairs, r, seed + i, n=G.n), threads=threads) for i in range(repeats)
    ]
    if repeats == 1:
        return reports[0]
    wedges = {psi: sum(rep.wedge_counts[psi] for rep in reports) / repeats for psi in WedgeType}
    tris = {tau: sum(rep.triangle_counts[tau] for rep in reports) / repeats for tau in TriangleType}
    closure = {
        pair: sum(rep.closures[pair] for rep in reports) / repeats for pair in CLOSURE_PAIRS
    }
    out = make_report(G, wedges, tris, closures=closure)
    out.m_rec = round(sum(rep.m_rec for rep in reports) / repeats)
    out.m_basic = G.m - out.m_rec
    out.reciprocity = sum(rep.reciprocity for rep in reports) / repeats
    return out
