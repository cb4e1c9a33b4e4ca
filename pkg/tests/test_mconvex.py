import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dijoinlat import fixtures
from dijoinlat.digraft import validate
from dijoinlat.digraph import dicut_shore_masks, disc_mask
from dijoinlat.errors import PreconditionError
from dijoinlat.faces import indicator
from dijoinlat.mconvex import (
    exchange_walk,
    jump_free,
    lift_z,
    lift_z_with_arc,
    point_to_z,
    split_sum,
    z_membership,
)
from strategies import digrafts


def load(fx):
    return validate(fx.digraph, fx.family)


P2 = load(fixtures.p2())
K22 = load(fixtures.k22())
K23 = load(fixtures.k23())
K24 = load(fixtures.k24())


def test_point_to_z_examples():
    assert point_to_z(K22, {"u1v1", "u2v2"}) == (0, 0, 0, 0)
    j = {"u1v1", "u1v2", "u2v3"}
    assert point_to_z(K23, j) == (1, 0, 0, 0, 0)
    with pytest.raises(PreconditionError):
        point_to_z(K22, {"u1v1"})


def test_z_membership_examples():
    assert z_membership(K22, (0, 0, 0, 0))
    assert z_membership(K23, (1, 0, 0, 0, 0))
    assert not z_membership(K22, (0, 0, 1, 0))  # a sink entry
    # moving one unit across keeps z(V) but breaks the equality at a sink complement
    assert not z_membership(K23, (1, 1, -1, 0, 0))
    assert not z_membership(K23, (2, 0, 0, 0, 0))


def test_lift_examples():
    assert lift_z(K22, (0, 0, 0, 0)) in set(K22.face.points)
    assert P2.digraph.arc_ids(lift_z(P2, (0, 0))) in ({"a1"}, {"a2"})
    for a in K22.digraph.arcs:
        p = lift_z_with_arc(K22, (0, 0, 0, 0), a.id)
        ids = K22.digraph.arc_ids(p)
        assert a.id in ids and p in set(K22.face.points)
    assert P2.digraph.arc_ids(lift_z_with_arc(P2, (0, 0), "a2")) == {"a2"}
    with pytest.raises(PreconditionError):
        lift_z(K22, (1, 0, 0, 0))


def test_exchange_walk_examples():
    z = (0, 0, 0, 0)
    assert exchange_walk(K22, z, z) == [z]
    # all four sinks on u1 versus all four on u2 is infeasible (u2 needs one); use 3/1 and 1/3
    z, t = (2, 0, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0)
    assert z_membership(K24, z) and z_membership(K24, t)
    walk = exchange_walk(K24, z, t)
    assert len(walk) - 1 == 2 and walk[0] == z and walk[-1] == t
    assert all(z_membership(K24, w) for w in walk)


def test_jump_free_k24():
    d = K24.digraph
    u = d.vmask({"u1"})
    cut = d.out_of(u)
    one = next(p for p in K24.face.points if (p & cut).bit_count() == 1)
    three = next(p for p in K24.face.points if (p & cut).bit_count() == 3)
    assert any((p & cut).bit_count() == 2 for p in K24.face.points)
    p = jump_free(K24, one, three, {"u1"}, 2)
    assert p in set(K24.face.points) and (p & cut).bit_count() == 2
    with pytest.raises(PreconditionError):
        jump_free(K24, one, three, {"u1"}, 1)
    with pytest.raises(PreconditionError):
        jump_free(K24, one, three, {"v1"}, 2)


def test_split_sum_examples():
    pts = K22.face.points
    y = [a + b for a, b in zip(indicator(pts[0], 4), indicator(pts[1], 4))]
    parts = split_sum(K22, y, 2)
    assert sorted(parts) == sorted(pts)
    with pytest.raises(PreconditionError):
        split_sum(K22, [1, 0, 0, 0], 1)


@given(digrafts())
def test_degree_map_is_exact(g):
    pts = set(g.face.points)
    zs = {point_to_z(g, p) for p in pts}
    for p in pts:
        z = point_to_z(g, p)
        assert z_membership(g, z)
        assert sum(z) == disc_mask(g.digraph, g.digraph.full_vmask)
        back = lift_z(g, z)
        assert back in pts and point_to_z(g, back) == z
    # the image is exactly the integral points of P(D, F) in a bounding box
    d = g.digraph
    hi = [d.out_arcs[v].bit_count() - 1 if d.out_arcs[v] else 0 for v in range(d.n)]
    lo = [-1 if d.out_arcs[v] else 0 for v in range(d.n)]
    box = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
    assert {z for z in itertools.islice(box, 4000) if z_membership(g, z)} <= zs


@given(digrafts())
def test_every_arc_in_some_lift(g):
    d = g.digraph
    z = point_to_z(g, g.face.points[0])
    pts = set(g.face.points)
    for a in range(d.m):
        zs = [point_to_z(g, p) for p in g.face.points if p >> a & 1]
        p = lift_z_with_arc(g, zs[0], a)
        assert p >> a & 1 and p in pts and point_to_z(g, p) == zs[0]
    assert lift_z(g, z) in pts


@given(digrafts(), st.data())
def test_exchange_walk_properties(g, data):
    pts = g.face.points
    z = point_to_z(g, data.draw(st.sampled_from(pts)))
    t = point_to_z(g, data.draw(st.sampled_from(pts)))
    walk = exchange_walk(g, z, t)
    assert walk[0] == z and walk[-1] == t
    assert len(walk) - 1 == sum(max(a - b, 0) for a, b in zip(z, t))
    for a, b in zip(walk, walk[1:]):
        diff = [y - x for x, y in zip(a, b)]
        assert sorted(diff).count(0) == len(diff) - 2 and min(diff) == -1 and max(diff) == 1
        assert z_membership(g, b)


@given(digrafts())
def test_jump_free_every_level(g):
    d = g.digraph
    pts = g.face.points
    for u in dicut_shore_masks(d):
        cut = d.out_of(u)
        vals = {p: (p & cut).bit_count() for p in pts}
        lo = min(pts, key=vals.get)
        hi = max(pts, key=vals.get)
        for lam in range(vals[lo] + 1, vals[hi]):
            p = jump_free(g, lo, hi, u, lam)
            assert p in set(pts) and (p & cut).bit_count() == lam
