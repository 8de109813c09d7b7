"""Immutable directed graph with basic and reciprocal edges.

Every mutual pair ``(u, v), (v, u)`` of the input is merged into a single
reciprocal edge; what remains are basic (one-way) edges.  Each vertex keeps
three sorted neighbor lists in compressed-sparse-row form (basic out, basic
in, reciprocal), plus a combined sorted neighbor list tagged with the edge
relation, used for O(log d) edge lookups.

Edge-count convention: a merged reciprocal edge counts as ONE edge, so
``|E| = m_basic + m_rec`` and reciprocity is ``m_rec / |E|``.
"""

from __future__ import annotations

import enum
import logging
import operator
from collections.abc import Iterable
from typing import NamedTuple

import numpy as np

from .errors import IngestionError, UndefinedValueError

log = logging.getLogger(__name__)


class EdgeRelation(enum.IntEnum):
    """Relation of the ordered pair ``(u, w)``."""

    NONE = 0
    FORWARD = 1  # u -> w
    BACKWARD = 2  # w -> u
    RECIPROCAL = 3

    def mirror(self) -> EdgeRelation:
        if self is EdgeRelation.FORWARD:
            return EdgeRelation.BACKWARD
        if self is EdgeRelation.BACKWARD:
            return EdgeRelation.FORWARD
        return self


class DegreeTriple(NamedTuple):
    din: int
    dout: int
    drec: int

    @property
    def dtotal(self) -> int:
        return self.din + self.dout + self.drec


def _csr(n: int, rows: np.ndarray, cols: np.ndarray, *extra: np.ndarray):
    order = np.lexsort((cols, rows))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=ptr[1:])
    return (ptr, cols[order]) + tuple(e[order] for e in extra)


class Digraph:
    """Read-only tri-adjacency digraph on vertices ``0..n-1``.

    Use :func:`build_digraph` for raw labelled input, or
    :meth:`Digraph.from_edges` when vertices are already dense ids.
    """

    __slots__ = (
        "n",
        "labels",
        "out_ptr",
        "out_idx",
        "in_ptr",
        "in_idx",
        "rec_ptr",
        "rec_idx",
        "nbr_ptr",
        "nbr_idx",
        "nbr_rel",
        "m_basic",
        "m_rec",
        "self_loops_dropped",
        "duplicates_dropped",
        "_frozen",
    )

    @classmethod
    def from_edges(
        cls,
        n: int,
        src: np.ndarray,
        dst: np.ndarray,
        labels: np.ndarray | None = None,
    ) -> Digraph:
        """Build from dense ordered pairs ``src[i] -> dst[i]`` in ``[0, n)``.

        Self-loops are dropped, duplicates removed and mutual pairs merged.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("vertex id out of range [0, n)")

        loops = src == dst
        n_loops = int(loops.sum())
        if n_loops:
            log.warning("dropped %d self-loop(s)", n_loops)
            src, dst = src[~loops], dst[~loops]

        keys = np.unique(src * n + dst)
        n_dups = int(src.size - keys.size)
        src, dst = keys // n, keys % n

        rev = dst * n + src
        pos = np.searchsorted(keys, rev)
        pos[pos == keys.size] = 0
        mutual = keys[pos] == rev if keys.size else np.zeros(0, dtype=bool)

        basic = ~mutual
        bsrc, bdst = src[basic], dst[basic]
        rmask = mutual & (src < dst)
        ra, rb = src[rmask], dst[rmask]

        idx_t = np.int32 if n < 2**31 else np.int64
        g = object.__new__(cls)
        g.n = int(n)
        g.labels = np.arange(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        # keys are sorted by (src, dst) so the out lists come out sorted already
        g.out_ptr, g.out_idx = _csr(n, bsrc, bdst)
        g.in_ptr, g.in_idx = _csr(n, bdst, bsrc)
        g.rec_ptr, g.rec_idx = _csr(n, np.concatenate([ra, rb]), np.concatenate([rb, ra]))
        rel = np.concatenate(
            [
                np.full(bsrc.size, EdgeRelation.FORWARD, dtype=np.int8),
                np.full(bsrc.size, EdgeRelation.BACKWARD, dtype=np.int8),
                np.full(2 * ra.size, EdgeRelation.RECIPROCAL, dtype=np.int8),
            ]
        )
        g.nbr_ptr, g.nbr_idx, g.nbr_rel = _csr(
            n,
            np.concatenate([bsrc, bdst, ra, rb]),
            np.concatenate([bdst, bsrc, rb, ra]),
            rel,
        )
        for name in ("out_idx", "in_idx", "rec_idx", "nbr_idx"):
            setattr(g, name, getattr(g, name).astype(idx_t, copy=False))
        g.m_basic = int(bsrc.size)
        g.m_rec = int(ra.size)
        g.self_loops_dropped = n_loops
        g.duplicates_dropped = n_dups
        g._frozen = True
        return g

    def __setattr__(self, name, value):
        if hasattr(self, "_frozen"):
            raise AttributeError("Digraph is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m_basic={self.m_basic}, m_rec={self.m_rec})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        if (self.n, self.m_basic, self.m_rec) != (other.n, other.m_basic, other.m_rec):
            return False
        return all(
            np.array_equal(getattr(self, a), getattr(other, a))
            for a in ("labels", "out_ptr", "out_idx", "in_ptr", "in_idx", "rec_ptr", "rec_idx")
        )

    __hash__ = None

    @property
    def m(self) -> int:
        """Edge count with each reciprocal edge counted once."""
        return self.m_basic + self.m_rec

    def out_adj(self, v: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[v] : self.out_ptr[v + 1]]

    def in_adj(self, v: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[v] : self.in_ptr[v + 1]]

    def rec_adj(self, v: int) -> np.ndarray:
        return self.rec_idx[self.rec_ptr[v] : self.rec_ptr[v + 1]]

    @property
    def din(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    @property
    def dout(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    @property
    def drec(self) -> np.ndarray:
        return np.diff(self.rec_ptr)

    @property
    def dtotal(self) -> np.ndarray:
        return np.diff(self.nbr_ptr)

    def edge_list(self, original_labels: bool = True) -> np.ndarray:
        """Ordered pairs (shape ``(m_basic + 2*m_rec, 2)``) that rebuild this graph.

        Vertices without any edge are not representable in an edge list.
        """
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))
        basic = np.column_stack([rows, self.out_idx])
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.rec_ptr))
        rec = np.column_stack([rows, self.rec_idx])
        pairs = np.concatenate([basic, rec]).astype(np.int64)
        return self.labels[pairs] if original_labels else pairs


def _coerce_pairs(pairs) -> np.ndarray:
    if isinstance(pairs, np.ndarray):
        arr = pairs
        if arr.size == 0:
            return np.zeros((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise IngestionError(f"expected an (m, 2) array of pairs, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            bad = np.flatnonzero(~np.all(np.equal(np.mod(arr, 1), 0), axis=1))
            if bad.size:
                raise IngestionError(f"non-integer vertex label in pair at offset {bad[0]}", bad[0])
        return arr.astype(np.int64)

    flat: list[int] = []
    for i, pair in enumerate(pairs):
        try:
            u, w = pair
            flat.append(operator.index(u))
            flat.append(operator.index(w))
        except (TypeError, ValueError) as exc:
            raise IngestionError(f"malformed pair at offset {i}: {pair!r}", i) from exc
    return np.array(flat, dtype=np.int64).reshape(-1, 2)


def build_digraph(pairs: Iterable[tuple[int, int]] | np.ndarray) -> Digraph:
    """Build a :class:`Digraph` from ordered vertex-label pairs.

    Labels are densely remapped in sorted order; ``G.labels[v]`` recovers the
    original label of vertex ``v``.  A label seen only in a self-loop still
    becomes an (isolated) vertex.
    """
    arr = _coerce_pairs(pairs)
    labels, inverse = np.unique(arr.ravel(), return_inverse=True)
    inverse = inverse.reshape(-1, 2)
    return Digraph.from_edges(labels.size, inverse[:, 0], inverse[:, 1], labels=labels)


def _check_vertex(G: Digraph, v: int) -> int:
    v = operator.index(v)
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} out of range [0, {G.n})")
    return v


def degrees(G: Digraph, v: int) -> DegreeTriple:
    v = _check_vertex(G, v)
    return DegreeTriple(
        int(G.in_ptr[v + 1] - G.in_ptr[v]),
        int(G.out_ptr[v + 1] - G.out_ptr[v]),
        int(G.rec_ptr[v + 1] - G.rec_ptr[v]),
    )


def reciprocity(G: Digraph) -> float:
    """Fraction of edges that are reciprocal, reciprocal pairs counted once."""
    if G.m == 0:
        raise UndefinedValueError("reciprocity of a graph without edges is undefined")
    return G.m_rec / G.m


def connecting_edge(G: Digraph, u: int, w: int) -> EdgeRelation:
    u, w = _check_vertex(G, u), _check_vertex(G, w)
    if u == w:
        raise ValueError("connecting_edge needs two distinct vertices")
    lo, hi = G.nbr_ptr[u], G.nbr_ptr[u + 1]
    i = lo + int(np.searchsorted(G.nbr_idx[lo:hi], w))
    if i < hi and G.nbr_idx[i] == w:
        return EdgeRelation(int(G.nbr_rel[i]))
    return EdgeRelation.NONE


def relations(G: Digraph, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized :func:`connecting_edge`; returns int8 relation codes.

    Runs one binary search per query inside the row of ``u``.
    """
    u = np.asarray(u, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    lo = G.nbr_ptr[u]
    end = G.nbr_ptr[u + 1]
    hi = end.copy()
    act = np.flatnonzero(lo < hi)
    idx = G.nbr_idx
    while act.size:
        a_lo, a_hi = lo[act], hi[act]
        mid = (a_lo + a_hi) >> 1
        right = idx[mid] < w[act]
        a_lo = np.where(right, mid + 1, a_lo)
        a_hi = np.where(right, a_hi, mid)
        lo[act], hi[act] = a_lo, a_hi
        act = act[a_lo < a_hi]
    out = np.zeros(u.shape, dtype=np.int8)
    hit = lo < end
    hit[hit] = idx[lo[hit]] == w[hit]
    out[hit] = G.nbr_rel[lo[hit]]
    return out
