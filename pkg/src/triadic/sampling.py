"""Uniform wedge sampling and Hoeffding-bounded closure/triangle estimates.

A ``psi``-wedge is drawn in two stages: a center ``v`` with probability
``|W_{v,psi}| / |W_psi|`` (binary search over prefix sums), then a uniform
wedge at ``v``.  For homogeneous types this is an unordered pair of distinct
neighbors from one list; for heterogeneous types it is one neighbor from each
of the two lists.  Each wedge of ``W_psi`` is therefore drawn with
probability exactly ``1 / |W_psi|``.

Randomness comes from counter-based Philox streams, one per block of
``BLOCK`` samples, keyed by ``(seed, wedge type, block index)``.  Counts are
reduced by integer sums, so results depend only on the seed and ``k``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .census import (
    CLOSURE_PAIRS,
    CensusReport,
    TriangleType,
    WedgeType,
    chi,
    classify_many,
    default_threads,
    make_report,
    total_wedge_counts,
    wedge_count_arrays,
)
from .errors import IncompatibleTypesError, NoWedgesError
from .graph import Digraph, EdgeRelation, relations

BLOCK = 1 << 16

# wedge covering set: every triangle type contains at least one of these
COVER = (WedgeType.PATH, WedgeType.RECIP_IN, WedgeType.RECIP_OUT, WedgeType.RECIP_TOT)

_F, _B, _R = EdgeRelation.FORWARD, EdgeRelation.BACKWARD, EdgeRelation.RECIPROCAL

# (list for end1, list for end2, relation center->end1, relation center->end2)
_LAYOUT = {
    WedgeType.OUT: ("out", "out", _F, _F),
    WedgeType.PATH: ("in", "out", _B, _F),
    WedgeType.IN: ("in", "in", _B, _B),
    WedgeType.RECIP_IN: ("rec", "in", _R, _B),
    WedgeType.RECIP_OUT: ("rec", "out", _R, _F),
    WedgeType.RECIP_TOT: ("rec", "rec", _R, _R),
}


@dataclass(frozen=True)
class Wedge:
    center: int
    end1: int
    end2: int
    wtype: WedgeType


@dataclass(frozen=True, eq=False)
class WedgeSampler:
    graph: Digraph
    wtype: WedgeType
    cumulative: np.ndarray
    total: int

    def center_probabilities(self) -> np.ndarray:
        return np.diff(self.cumulative, prepend=0) / self.total


def build_sampler(G: Digraph, psi: WedgeType) -> WedgeSampler:
    psi = WedgeType(psi)
    cumulative = np.cumsum(wedge_count_arrays(G)[psi])
    total = int(cumulative[-1]) if cumulative.size else 0
    if total == 0:
        raise NoWedgesError(psi)
    cumulative.setflags(write=False)
    return WedgeSampler(G, psi, cumulative, total)


def _lists(G: Digraph, which: str):
    return {"out": (G.out_ptr, G.out_idx), "in": (G.in_ptr, G.in_idx), "rec": (G.rec_ptr, G.rec_idx)}[which]


def sample_wedges(s: WedgeSampler, rng: np.random.Generator, size: int):
    """Draw ``size`` wedges with replacement; returns ``(center, end1, end2)`` arrays.

    For homogeneous types ``end1 < end2``.  For heterogeneous types ``end1``
    is the in/reciprocal endpoint as listed in the wedge layout.
    """
    G = s.graph
    draws = rng.integers(0, s.total, size=size, dtype=np.int64)
    center = np.searchsorted(s.cumulative, draws, side="right")

    first, second, _, _ = _LAYOUT[s.wtype]
    ptr1, idx1 = _lists(G, first)
    start1 = ptr1[center]
    deg1 = ptr1[center + 1] - start1
    i = rng.integers(0, deg1)
    if first == second:
        j = rng.integers(0, deg1 - 1)
        j += j >= i
        lo, hi = np.minimum(i, j), np.maximum(i, j)
        end1, end2 = idx1[start1 + lo], idx1[start1 + hi]
    else:
        ptr2, idx2 = _lists(G, second)
        start2 = ptr2[center]
        j = rng.integers(0, ptr2[center + 1] - start2)
        end1, end2 = idx1[start1 + i], idx2[start2 + j]
    return center, end1.astype(np.int64), end2.astype(np.int64)


def sample_wedge(s: WedgeSampler, rng: np.random.Generator) -> Wedge:
    c, a, b = sample_wedges(s, rng, 1)
    return Wedge(int(c[0]), int(a[0]), int(b[0]), s.wtype)


def closure_types(G: Digraph, psi: WedgeType, end1: np.ndarray, end2: np.ndarray) -> np.ndarray:
    """Triangle type closed by each wedge, or -1 for open wedges."""
    _, _, r1, r2 = _LAYOUT[WedgeType(psi)]
    r12 = relations(G, end1, end2)
    return classify_many(np.full(r12.shape, r1, dtype=np.int8), np.full(r12.shape, r2, dtype=np.int8), r12)


def is_closed(G: Digraph, w: Wedge) -> TriangleType | None:
    """Type of the triangle the wedge closes into, or None when it is open."""
    code = int(closure_types(G, w.wtype, np.array([w.end1]), np.array([w.end2]))[0])
    return None if code < 0 else TriangleType(code)


def hoeffding_error(k: int, delta: float) -> float:
    """Half-width ``eps`` with ``P(|kappa_hat - kappa| >= eps) <= delta`` after ``k`` samples."""
    if k < 1:
        raise ValueError("k must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.sqrt(math.log(2 / delta) / (2 * k))


def hoeffding_k(eps: float, delta: float) -> int:
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil(0.5 * eps**-2 * math.log(2 / delta))


@dataclass(frozen=True)
class ClosureEstimate:
    """Sampled closure; ``tau`` is None for the total closure of ``psi``."""

    psi: WedgeType
    tau: TriangleType | None
    k: int
    k_closed: int
    delta: float

    @property
    def kappa_hat(self) -> float:
        return self.k_closed / self.k

    @property
    def eps_bound(self) -> float:
        return hoeffding_error(self.k, self.delta)


@dataclass(frozen=True)
class TriangleEstimate:
    tau: TriangleType
    psi_used: WedgeType | None
    k: int
    k_closed: int
    wedges: int
    delta: float

    @property
    def kappa_hat(self) -> float:
        return self.k_closed / self.k if self.k else 0.0

    @property
    def t_hat(self) -> float:
        if self.psi_used is None or self.wedges == 0:
            return 0.0
        return self.kappa_hat * self.wedges / chi(self.psi_used, self.tau)

    @property
    def abs_error_bound(self) -> float:
        if self.psi_used is None or self.wedges == 0:
            return 0.0
        return hoeffding_error(self.k, self.delta) * self.wedges / chi(self.psi_used, self.tau)


def _block_rng(seed: int, psi: WedgeType, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(int(psi), block))
    return np.random.Generator(np.random.Philox(ss))


def _count_block(s: WedgeSampler, seed: int, block: int, size: int) -> np.ndarray:
    rng = _block_rng(seed, s.wtype, block)
    _, end1, end2 = sample_wedges(s, rng, size)
    types = closure_types(s.graph, s.wtype, end1, end2)
    return np.bincount(types + 1, minlength=8)


def closed_counts(s: WedgeSampler, k: int, seed: int, threads: int | None = None) -> np.ndarray:
    """Sample ``k`` wedges; returns counts ``[open, trans, ..., three_recip]``."""
    if k < 1:
        raise ValueError("k must be positive")
    sizes = [min(BLOCK, k - b * BLOCK) for b in range(-(-k // BLOCK))]
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(sizes) == 1:
        parts = [_count_block(s, seed, b, size) for b, size in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda a: _count_block(s, seed, *a), enumerate(sizes)))
    return np.sum(parts, axis=0)


def estimate_closures(
    G: Digraph,
    psi: WedgeType,
    k: int,
    seed: int = 0,
    delta: float = 0.001,
    threads: int | None = None,
) -> list[ClosureEstimate]:
    psi = WedgeType(psi)
    counts = closed_counts(build_sampler(G, psi), k, seed, threads)
    out = [
        ClosureEstimate(psi, tau, k, int(counts[tau + 1]), delta)
        for tau in TriangleType
        if chi(psi, tau)
    ]
    out.append(ClosureEstimate(psi, None, k, int(k - counts[0]), delta))
    return out


def _best_wedge_type(tau: TriangleType, wedges: dict[WedgeType, int], candidates) -> WedgeType | None:
    eligible = [psi for psi in candidates if chi(psi, tau) and wedges[psi]]
    if not eligible:
        return None
    return min(eligible, key=lambda psi: (wedges[psi] / chi(psi, tau), psi))


def estimate_triangles(
    G: Digraph,
    tau: TriangleType,
    psi: WedgeType | None = None,
    k: int = 20000,
    seed: int = 0,
    delta: float = 0.001,
    threads: int | None = None,
) -> TriangleEstimate:
    """Estimate ``|T_tau|`` from ``psi``-wedge samples.

    With ``psi=None`` the wedge type with the smallest error scale
    ``|W_psi| / chi(psi, tau)`` is used.  When no eligible wedge exists the
    count is exactly 0 and no sampling happens.
    """
    tau = TriangleType(tau)
    if k < 1:
        raise ValueError("k must be positive")
    wedges, _ = total_wedge_counts(G)
    if psi is None:
        psi = _best_wedge_type(tau, wedges, WedgeType)
        if psi is None:
            return TriangleEstimate(tau, None, 0, 0, 0, delta)
    else:
        psi = WedgeType(psi)
        if not chi(psi, tau):
            raise IncompatibleTypesError(f"{psi.label} wedges never occur in {tau.label} triangles")
        if not wedges[psi]:
            return TriangleEstimate(tau, psi, 0, 0, 0, delta)
    counts = closed_counts(build_sampler(G, psi), k, seed, threads)
    return TriangleEstimate(tau, psi, k, int(counts[tau + 1]), wedges[psi], delta)


def full_estimated_census(
    G: Digraph,
    k: int,
    delta: float = 0.001,
    seed: int = 0,
    threads: int | None = None,
) -> CensusReport:
    """Estimated census from ``k`` samples of each covering wedge type.

    Path, recip_in, recip_out and recip_tot wedges are sampled once each.
    Each triangle count comes from the covering type with the smallest error
    scale.  Closures of the sampled types are the direct sample fractions;
    out and in closures are rebuilt as ``chi * T_hat / |W_psi|`` from exact
    wedge counts and clipped to [0, 1].
    """
    if k < 1:
        raise ValueError("k must be positive")
    wedges, _ = total_wedge_counts(G)
    sampled = [psi for psi in COVER if wedges[psi]]
    counts = {psi: closed_counts(build_sampler(G, psi), k, seed, threads) for psi in sampled}

    estimates = {}
    for tau in TriangleType:
        psi = _best_wedge_type(tau, wedges, sampled)
        if psi is None:
            estimates[tau] = TriangleEstimate(tau, None, 0, 0, 0, delta)
        else:
            estimates[tau] = TriangleEstimate(tau, psi, k, int(counts[psi][tau + 1]), wedges[psi], delta)
    t_hat = {tau: e.t_hat for tau, e in estimates.items()}

    closures = {}
    for psi, tau in CLOSURE_PAIRS:
        if psi in counts:
            closures[(psi, tau)] = counts[psi][tau + 1] / k
        elif wedges[psi]:
            closures[(psi, tau)] = min(1.0, chi(psi, tau) * t_hat[tau] / wedges[psi])
        else:
            closures[(psi, tau)] = 0.0

    estimation = {
        "k": k,
        "delta": delta,
        "eps_bound": hoeffding_error(k, delta),
        "seed": seed,
        "wedge_types_used": [psi.label for psi in sampled],
        "triangle_sources": {
            tau.label: (e.psi_used.label if e.psi_used is not None else None) for tau, e in estimates.items()
        },
        "triangle_error_bounds": {tau.label: e.abs_error_bound for tau, e in estimates.items()},
        "closed_counts": {
            psi.label: {"open": int(c[0]), **{tau.label: int(c[tau + 1]) for tau in TriangleType}}
            for psi, c in counts.items()
        },
    }
    return make_report(G, wedges, t_hat, closures=closures, estimation=estimation)
