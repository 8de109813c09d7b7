import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triadic import (
    CLOSURE_PAIRS,
    DegreeTriple,
    EdgeRelation,
    NotATriangleError,
    SizeCapError,
    TriangleType,
    UndefinedValueError,
    WedgeType,
    brute_force_census,
    build_digraph,
    chi,
    classify_triangle,
    closures,
    cyclic_breakdown,
    enumerate_triangle_census,
    recip_group_closure,
    total_wedge_counts,
    wedge_counts_at_vertex,
)
from triadic.census import PATTERN_TABLE, chi_matrix

from factories import (
    CANONICAL_TRIANGLES,
    G1_PAIRS,
    arcs_of,
    brute_triangles,
    brute_wedges,
    random_digraph,
    triangle_name_by_isomorphism,
    wedge_profile,
)

W, T = WedgeType, TriangleType
F, B, R = EdgeRelation.FORWARD, EdgeRelation.BACKWARD, EdgeRelation.RECIPROCAL
TRANS_TRIANGLE = [(1, 2), (2, 3), (1, 3)]
LOOP_TRIANGLE = [(1, 2), (2, 3), (3, 1)]


def both(u, w):
    return [(u, w), (w, u)]


def test_chi_examples():
    assert chi(W.PATH, T.LOOP) == 3
    assert chi(W.OUT, T.IN_RECIP) == 0
    assert len(CLOSURE_PAIRS) == 15
    assert all(chi_matrix().sum(axis=1) == 3)


def test_chi_matches_wedges_inside_each_canonical_triangle():
    for name, arcs in CANONICAL_TRIANGLES.items():
        tau = T[name.upper()]
        prof = wedge_profile(arcs)
        assert {psi: chi(psi, tau) for psi in W} == {psi: prof.get(psi.label, 0) for psi in W}, name


def test_wedge_counts_at_vertex():
    assert wedge_counts_at_vertex(DegreeTriple(3, 2, 1)) == {
        W.OUT: 1, W.PATH: 6, W.IN: 3, W.RECIP_IN: 3, W.RECIP_OUT: 2, W.RECIP_TOT: 0,
    }
    assert set(wedge_counts_at_vertex(DegreeTriple(0, 0, 0)).values()) == {0}
    c = wedge_counts_at_vertex(DegreeTriple(0, 0, 4))
    assert c[W.RECIP_TOT] == 6 and sum(c.values()) == 6


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_wedge_counts_sum_to_undirected_pairs(din, dout, drec):
    d = din + dout + drec
    assert sum(wedge_counts_at_vertex(DegreeTriple(din, dout, drec)).values()) == math.comb(d, 2)


def test_total_wedge_counts_examples():
    counts, total = total_wedge_counts(build_digraph([(1, 2), (2, 3)]))
    assert counts[W.PATH] == 1 and total == 1
    star = build_digraph([p for leaf in (1, 2, 3) for p in both(0, leaf)])
    assert total_wedge_counts(star)[0][W.RECIP_TOT] == 3


def test_total_wedge_counts_g1():
    G = build_digraph(G1_PAIRS)
    oracle = brute_wedges(G.n, arcs_of(G))
    counts, total = total_wedge_counts(G)
    assert counts == {psi: len(oracle[psi.label]) for psi in W}
    # vertex 3 has two basic in-edges and one reciprocal edge: two recip_in wedges
    assert counts == {W.OUT: 1, W.PATH: 1, W.IN: 1, W.RECIP_IN: 2, W.RECIP_OUT: 0, W.RECIP_TOT: 0}
    assert total == 5


@pytest.mark.parametrize("seed", range(5))
def test_total_wedge_counts_random(seed):
    G = random_digraph(25, 0.3, 0.4, seed)
    oracle = brute_wedges(G.n, arcs_of(G))
    assert total_wedge_counts(G)[0] == {psi: len(oracle[psi.label]) for psi in W}


@pytest.mark.parametrize(
    "rels, expected",
    [
        ((F, F, F), T.TRANS),
        ((F, B, F), T.LOOP),
        ((R, R, R), T.THREE_RECIP),
        ((R, F, F), T.IN_RECIP),
        ((R, B, B), T.OUT_RECIP),
        ((R, F, B), T.PATH_RECIP),
        ((F, R, F), T.PATH_RECIP),
        ((R, R, F), T.TWO_RECIP),
        ((B, B, B), T.TRANS),
        ((B, F, B), T.LOOP),
    ],
)
def test_classify_hand_checked(rels, expected):
    assert classify_triangle(*rels) is expected


def test_classify_all_27_patterns_by_isomorphism():
    def arcs(rel, x, y):
        return {F: {(x, y)}, B: {(y, x)}, R: {(x, y), (y, x)}}[rel]

    for r12, r13, r23 in itertools.product((F, B, R), repeat=3):
        a = arcs(r12, 0, 1) | arcs(r13, 0, 2) | arcs(r23, 1, 2)
        assert classify_triangle(r12, r13, r23).label == triangle_name_by_isomorphism(a)
        assert PATTERN_TABLE[r12, r13, r23] == classify_triangle(r12, r13, r23)


def test_classify_rejects_missing_edge():
    with pytest.raises(NotATriangleError):
        classify_triangle(F, EdgeRelation.NONE, F)


def _census(pairs):
    return enumerate_triangle_census(build_digraph(pairs))


def test_enumeration_examples():
    assert _census(G1_PAIRS)[T.TRANS] == 1 and sum(_census(G1_PAIRS).values()) == 1
    k4 = [p for u, w in itertools.combinations(range(4), 2) for p in both(u, w)]
    assert _census(k4) == {**{t: 0 for t in T}, T.THREE_RECIP: 4}
    assert _census(LOOP_TRIANGLE)[T.LOOP] == 1


def test_brute_force_examples():
    assert set(brute_force_census(build_digraph([])).values()) == {0}
    assert brute_force_census(build_digraph(LOOP_TRIANGLE))[T.LOOP] == 1
    assert brute_force_census(build_digraph(G1_PAIRS))[T.TRANS] == 1
    with pytest.raises(SizeCapError):
        brute_force_census(random_digraph(30, 0.1, 0.5, 0), cap=20)


@pytest.mark.parametrize("seed", range(6))
def test_enumeration_matches_independent_oracle(seed):
    rng = np.random.default_rng(seed)
    G = random_digraph(40, rng.uniform(0.05, 0.6), rng.choice([0, 0.25, 0.5, 0.75, 1]), seed)
    oracle = brute_triangles(G.n, arcs_of(G))
    assert enumerate_triangle_census(G) == {tau: oracle.get(tau.label, 0) for tau in T}


def test_enumeration_thread_count_independent():
    G = random_digraph(150, 0.3, 0.4, 3)
    from triadic import census

    old = census._PAIR_CHUNK
    census._PAIR_CHUNK = 500
    try:
        assert enumerate_triangle_census(G, threads=1) == enumerate_triangle_census(G, threads=4)
    finally:
        census._PAIR_CHUNK = old


def test_closures_trans_triangle():
    rep = closures(build_digraph(TRANS_TRIANGLE))
    for psi in (W.OUT, W.PATH, W.IN):
        assert rep.closures[(psi, T.TRANS)] == 1
    assert rep.transitivity == 1
    assert "closures.recip_tot" in rep.undefined


def test_closures_g1():
    rep = closures(build_digraph(G1_PAIRS))
    assert rep.closures[(W.PATH, T.TRANS)] == 1
    assert all(rep.closures[(W.RECIP_IN, tau)] == 0 for tau in T if chi(W.RECIP_IN, tau))
    assert rep.transitivity == pytest.approx(3 / 5)


def test_closures_loop():
    rep = closures(build_digraph(LOOP_TRIANGLE))
    assert rep.wedge_counts[W.PATH] == 3
    assert rep.closures[(W.PATH, T.LOOP)] == 1


def test_recip_group_closure():
    assert recip_group_closure(build_digraph(TRANS_TRIANGLE), 0) == 1
    assert recip_group_closure(build_digraph(G1_PAIRS), 1) == 0
    with pytest.raises(UndefinedValueError):
        recip_group_closure(build_digraph(TRANS_TRIANGLE), 2)


def test_recip_group_closure_matches_brute_force():
    G = random_digraph(30, 0.35, 0.5, 9)
    arcs = arcs_of(G)
    wedges = brute_wedges(G.n, arcs)
    groups = {0: ("out", "path", "in"), 1: ("recip_in", "recip_out"), 2: ("recip_tot",)}
    for k, names in groups.items():
        ws = [w for name in names for w in wedges[name]]
        closed = sum(1 for _, x, y in ws if (x, y) in arcs or (y, x) in arcs)
        assert recip_group_closure(G, k) == pytest.approx(closed / len(ws))


def test_cyclic_breakdown():
    assert cyclic_breakdown(build_digraph(LOOP_TRIANGLE))[T.LOOP] == 1.0
    three = both(1, 2) + both(2, 3) + both(1, 3)
    assert cyclic_breakdown(build_digraph(three))[T.THREE_RECIP] == 1.0
    # one loop on {0,1,2} plus three disjoint two_recip triangles
    pairs = [(0, 1), (1, 2), (2, 0)]
    for base in (10, 20, 30):
        pairs += both(base, base + 1) + both(base, base + 2) + [(base + 1, base + 2)]
    brk = cyclic_breakdown(build_digraph(pairs))
    assert brk == {T.LOOP: 0.25, T.PATH_RECIP: 0.0, T.TWO_RECIP: 0.75, T.THREE_RECIP: 0.0}
    with pytest.raises(UndefinedValueError):
        cyclic_breakdown(build_digraph(TRANS_TRIANGLE))


def _check_identities(G):
    rep = closures(G)
    t = rep.triangle_counts
    for psi in W:
        closed = sum(chi(psi, tau) * t[tau] for tau in T)
        assert closed <= rep.wedge_counts[psi]
        assert 0 <= rep.total_closure(psi) <= 1 + 1e-12
    assert sum(chi(psi, tau) * t[tau] for psi in W for tau in T) == 3 * rep.total_triangles
    if rep.total_wedges:
        assert rep.transitivity == 3 * rep.total_triangles / rep.total_wedges
    assert all(0 <= v <= 1 for v in rep.closures.values())
    return rep


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 40), st.floats(0.05, 1.0), st.sampled_from([0, 0.25, 0.5, 0.75, 1]), st.integers(0, 2**16))
def test_identities_property(n, p, r, seed):
    _check_identities(random_digraph(n, p, r, seed))


def test_undirected_consistency():
    import networkx as nx

    G = random_digraph(80, 0.15, 0.5, 21)
    H = nx.Graph()
    H.add_edges_from(map(tuple, G.edge_list(original_labels=False)))
    assert sum(enumerate_triangle_census(G).values()) == sum(nx.triangles(H).values()) // 3


def test_permutation_invariance():
    G = random_digraph(50, 0.25, 0.4, 8)
    perm = np.random.default_rng(1).permutation(G.n)
    H = build_digraph(perm[G.edge_list(original_labels=False)])
    a, b = closures(G), closures(H)
    assert a.triangle_counts == b.triangle_counts
    assert a.wedge_counts == b.wedge_counts
    assert a.closures == b.closures
