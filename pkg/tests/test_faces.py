import pytest
from hypothesis import given

import oracles
from dijoinlat import fixtures
from dijoinlat.digraph import (
    Digraph,
    dicut_shore_masks,
    is_dijoin_mask,
    is_strengthening_mask,
)
from dijoinlat.errors import InvalidInput, PreconditionError
from dijoinlat.faces import (
    analyze,
    classify,
    closure,
    closure_sets,
    enumerate_dij_face_points,
    enumerate_scr_face_points,
    equivalent_inequalities,
    is_facet_defining,
)
from strategies import as_lists, digrafts

P2 = fixtures.p2()
K22 = fixtures.k22()


def arcsets(fp):
    return {frozenset(s) for s in fp.arcsets()}


def test_dij_face_examples():
    fp = enumerate_dij_face_points(P2.digraph, P2.family)
    assert arcsets(fp) == {frozenset({"a1"}), frozenset({"a2"})}
    fp = enumerate_dij_face_points(K22.digraph, K22.family)
    assert arcsets(fp) == {frozenset({"u1v1", "u2v2"}), frozenset({"u1v2", "u2v1"})}


def test_dij_face_rejects_non_bipartite():
    d = Digraph(("a", "b", "c"), (("x", "a", "b"), ("y", "b", "c"), ("z", "a", "c")))
    with pytest.raises(InvalidInput):
        enumerate_dij_face_points(d, [])


def test_dij_face_cap():
    with pytest.raises(PreconditionError):
        enumerate_dij_face_points(K22.digraph, K22.family, cap=3)


def test_scr_face_examples():
    fp = enumerate_scr_face_points(P2.digraph, P2.family)
    assert arcsets(fp) == {frozenset({"a1"}), frozenset({"a2"})}
    cyc = Digraph(("x", "y", "z"), (("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")))
    fp = enumerate_scr_face_points(cyc, [])
    # reversing every arc of a directed cycle leaves it strongly connected
    assert arcsets(fp) == {frozenset(), frozenset({"a", "b", "c"})}
    assert arcsets(fp) == set(oracles.scr_face(*as_lists(cyc), []))


def test_scr_face_cap():
    with pytest.raises(PreconditionError):
        enumerate_scr_face_points(P2.digraph, P2.family, max_arcs=1)


def test_analyze_examples():
    an = analyze(enumerate_dij_face_points(P2.digraph, P2.family))
    assert an.tight_nodes == {"u", "v"} and an.dim == 1 and an.kappa_t == 1 and an.slack == 0
    an = analyze(enumerate_dij_face_points(K22.digraph, K22.family))
    assert an.tight_nodes == {"u1", "u2", "v1", "v2"}
    assert (an.dim, an.kappa_t, an.slack) == (1, 1, 0)


def test_closure_examples():
    assert closure_sets(P2.digraph, P2.family) == [{"u"}]
    cl = {frozenset(s) for s in closure_sets(K22.digraph, K22.family)}
    assert cl == {frozenset(s) for s in [{"u1"}, {"u2"}, {"u1", "u2", "v1"}, {"u1", "u2", "v2"}]}
    d = K22.digraph
    again = closure(d, closure(d, K22.family))
    assert again == closure(d, K22.family)


def test_facet_examples():
    fp = enumerate_dij_face_points(P2.digraph, P2.family)
    assert not is_facet_defining(fp, {"u"})
    fp = enumerate_dij_face_points(K22.digraph, K22.family)
    assert not is_facet_defining(fp, {"u1", "u2"})
    assert equivalent_inequalities(fp, {"u1"}, {"u2"})
    with pytest.raises(InvalidInput):
        is_facet_defining(fp, {"v1"})


def test_classify_examples():
    for fx in (P2, K22):
        cl = classify(enumerate_dij_face_points(fx.digraph, fx.family))
        assert cl.basic and cl.robust


def test_serial_join_classification():
    fx = fixtures.serial_join()
    fp = enumerate_dij_face_points(fx.digraph, fx.family)
    cl = classify(fp)
    assert not cl.basic  # the middle shore is a tight non-trivial dicut


@given(digrafts(max_vertices=6, max_arcs=9))
def test_dij_face_matches_brute_force(g):
    d = g.digraph
    vs, arcs = as_lists(d)
    fam = g.family_sets()
    assert arcsets(g.face) == set(oracles.dij_face(vs, arcs, fam))


@given(digrafts(max_vertices=6, max_arcs=9))
def test_scr_face_matches_brute_force(g):
    d = g.digraph
    vs, arcs = as_lists(d)
    fam = g.family_sets()
    assert arcsets(enumerate_scr_face_points(d, fam)) == set(oracles.scr_face(vs, arcs, fam))


@given(digrafts())
def test_face_point_invariants(g):
    d, fp, an = g.digraph, g.face, g.analysis
    covered = 0
    for p in fp.points:
        assert is_dijoin_mask(d, p) and is_strengthening_mask(d, p)
        # minimal dijoin
        assert all(not is_dijoin_mask(d, p & ~(1 << a)) for a in range(d.m) if p >> a & 1)
        for v in range(d.n):
            k = (p & d.inc_arcs[v]).bit_count()
            if an.tight_mask >> v & 1:
                assert k == 1
            elif not d.in_arcs[v]:
                assert k >= 1
        covered |= p
    assert covered == d.full_amask  # every arc lies in some face point
    assert an.slack == d.m - an.tight_mask.bit_count() + an.kappa_t - an.dim >= 0
    assert an.dim == oracles.rank([v + [1] for v in fp.vectors()]) - 1
    assert an.tight_mask | an.active_mask == d.full_vmask
    assert not an.tight_mask & an.active_mask


@given(digrafts())
def test_closure_contains_family_and_is_crossing(g):
    cl = set(g.closure)
    assert set(g.family) <= cl
    full = g.digraph.full_vmask
    for u in cl:
        for w in cl:
            if u & w and u | w != full and u & ~w and w & ~u:
                assert u & w in cl and u | w in cl


@given(digrafts())
def test_facet_test_matches_definition(g):
    fp = g.face
    for u in dicut_shore_masks(g.digraph):
        sub = [p for p in fp.points if (p & g.digraph.out_of(u)).bit_count() == 1]
        aff = lambda ps: oracles.rank([[p >> a & 1 for a in range(fp.m)] + [1] for p in ps])  # noqa: E731
        expect = bool(sub) and aff(sub) == aff(fp.points) - 1
        assert is_facet_defining(fp, u) == expect
