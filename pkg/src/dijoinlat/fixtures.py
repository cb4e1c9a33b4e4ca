"""Bundled small instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .apps import Hypergraph
from .digraph import Digraph
from .errors import PreconditionError


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # "digraph" | "hypergraph"
    description: str
    digraph: Optional[Digraph] = None
    family: tuple = ()  # tuples of vertex ids
    hypergraph: Optional[Hypergraph] = None
    capacity_arcs: Optional[tuple] = None  # arcs of capacity one (others zero)
    meta: dict = field(default_factory=dict)


def _sink_complements(vertices, sinks):
    return tuple(tuple(v for v in vertices if v != t) for t in sinks)


def _complete_bipartite(k: int):
    srcs = ("u1", "u2")
    snks = tuple(f"v{i}" for i in range(1, k + 1))
    arcs = tuple((f"{u}{v}", u, v) for u in srcs for v in snks)
    return Digraph(srcs + snks, arcs), _sink_complements(srcs + snks, snks)


def p2() -> Fixture:
    d = Digraph(("u", "v"), (("a1", "u", "v"), ("a2", "u", "v")))
    return Fixture("p2", "digraph", "two parallel arcs u->v", d, (("u",),))


def k22() -> Fixture:
    d, fam = _complete_bipartite(2)
    return Fixture("k22", "digraph", "complete bipartite u1,u2 -> v1,v2", d, fam)


def k23() -> Fixture:
    d, fam = _complete_bipartite(3)
    return Fixture("k23", "digraph", "complete bipartite u1,u2 -> v1,v2,v3", d, fam)


def k24() -> Fixture:
    d, fam = _complete_bipartite(4)
    return Fixture("k24", "digraph", "complete bipartite u1,u2 -> v1..v4", d, fam)


def _serial_vertices():
    return ("u1", "u2", "v1", "v2", "w1", "w2", "y1", "y2", "y3")


def _serial_arcs():
    return (
        ("a1", "u1", "v1"), ("a2", "u1", "v2"), ("a3", "u2", "v1"), ("a4", "u2", "v2"),
        ("b1", "w1", "y1"), ("b2", "w1", "y2"), ("b3", "w1", "y3"),
        ("b4", "w2", "y1"), ("b5", "w2", "y2"), ("b6", "w2", "y3"),
        ("c1", "u1", "y1"), ("c2", "u2", "y2"),
    )


def serial_join() -> Fixture:
    """A k22 gadget joined to a K_{2,3} gadget through the 2-arc dicut {c1, c2}."""
    verts = _serial_vertices()
    d = Digraph(verts, _serial_arcs())
    fam = _sink_complements(verts, ("v1", "v2", "y1", "y2", "y3")) + (("u1", "u2", "v1", "v2"),)
    return Fixture("serial-join", "digraph",
                   "k22 and K_{2,3} gadgets joined by a tight 2-arc dicut", d, fam,
                   meta={"middle_shore": ("u1", "u2", "v1", "v2")})


def triangle() -> Fixture:
    h = Hypergraph(("1", "2", "3"), (("1", "2"), ("2", "3"), ("1", "3")))
    return Fixture("triangle", "hypergraph", "triangle graph as a 2-uniform hypergraph",
                   hypergraph=h)


def four_cycle() -> Fixture:
    h = Hypergraph(("1", "2", "3", "4"), (("1", "2"), ("2", "3"), ("3", "4"), ("1", "4")))
    return Fixture("four-cycle", "hypergraph", "4-cycle graph as a 2-uniform hypergraph",
                   hypergraph=h)


# Solid arcs (capacity one) are "e*"; dashed arcs (capacity zero) are "d*".
SCHRIJVER_VERSION = "1"
_SCHRIJVER_VERTICES = ()
_SCHRIJVER_ARCS = ()


def schrijver() -> Fixture:
    if not _SCHRIJVER_ARCS:
        raise PreconditionError("the capacitated counterexample is not bundled: its arc "
                                "list has not been transcribed")
    d = Digraph(_SCHRIJVER_VERTICES, _SCHRIJVER_ARCS)
    cap = tuple(a.id for a in d.arcs if a.id.startswith("e"))
    return Fixture("schrijver", "digraph",
                   "0,1-capacitated digraph with minimum dicut capacity 2 whose "
                   "capacity-one arcs admit no partition into two dijoins",
                   d, capacity_arcs=cap, meta={"version": SCHRIJVER_VERSION})


REGISTRY = {
    "p2": p2,
    "k22": k22,
    "k23": k23,
    "k24": k24,
    "serial-join": serial_join,
    "triangle": triangle,
    "four-cycle": four_cycle,
    "schrijver": schrijver,
}


def get(name: str) -> Fixture:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(REGISTRY)}") from None
