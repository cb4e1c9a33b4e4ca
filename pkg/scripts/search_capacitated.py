"""Search for a 0,1-capacitated digraph whose capacity-one arcs do not split into two dijoins.

The search works in the planar dual H. Dicuts of a connected plane digraph
are the directed cycles of its dual, so the targets become

* six degree-2 terminals, i.e. six digons in H. Their union is a bidirected
  simple graph G0 with six edges.
* minimum capacity 2 at the terminals only, i.e. every other directed cycle of H
  carries at least three solid arcs.
* no 2-partition, i.e. for every choice of one arc per digon (plus a subset of
  the extra solid arcs), J or its complement leaves a directed cycle in H - J.

Dashed arcs only matter through their reachability relation on the vertices of
G0, so the search runs over transitively closed acyclic relations instead of
arc sets. Hits are dualised and checked with ``capacitated_report``.

Needs networkx (install the ``test`` extra).

    python3 scripts/search_capacitated.py --extra-arcs 1
"""

import argparse
import itertools
import sys

import networkx as nx

from dijoinlat.apps import capacitated_report
from dijoinlat.cli import Instance, dump_instance
from dijoinlat.digraph import Digraph

INF = 10**6


def underlying_graphs(max_vertices):
    seen = set()
    for n in range(4, max_vertices + 1):
        for es in itertools.combinations(itertools.combinations(range(n), 2), 6):
            g = nx.Graph(es)
            if g.number_of_nodes() != n or not nx.is_connected(g):
                continue
            if any(nx.is_isomorphic(g, h) for h in seen):
                continue
            seen.add(g)
            yield n, list(es)


def acyclic(n, arcs):
    succ = [set() for _ in range(n)]
    for a, b in arcs:
        succ[a].add(b)
    indeg = [0] * n
    for a in range(n):
        for b in succ[a]:
            indeg[b] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == n


def short_cycles_absent(n, solid, rel):
    """Every directed cycle other than a digon has at least three solid arcs."""
    if not acyclic(n, rel):
        return False
    arcs = [(a, b, 1, i) for i, (a, b, _) in enumerate(solid)] + [(a, b, 0, None) for a, b in rel]
    for i, (a, b, k) in enumerate(solid):
        skip = {i} | ({j for j, s in enumerate(solid) if s[2] == k} if k is not None else set())
        dist = [INF] * n
        dist[b] = 0
        for _ in range(n):  # Bellman-Ford; weights are 0 or 1
            changed = False
            for x, y, w, j in arcs:
                if j not in skip and dist[x] + w < dist[y]:
                    dist[y] = dist[x] + w
                    changed = True
            if not changed:
                break
        if 1 + dist[a] < 3:
            return False
    return True


def transitive_closure(rel):
    rel = set(rel)
    while True:
        new = {(a, d) for a, b in rel for c, d in rel if b == c and a != d} - rel
        if not new:
            return frozenset(rel)
        rel |= new


def splits(n, solid, rel):
    """Return the face points if no 2-partition exists, else None."""
    groups = {}
    extra = []
    for i, (_, _, k) in enumerate(solid):
        (extra if k is None else groups.setdefault(k, [])).append(i)
    dijoins = set()
    for choice in itertools.product(*groups.values()):
        for sub in range(1 << len(extra)):
            j = set(choice) | {extra[t] for t in range(len(extra)) if sub >> t & 1}
            rest = [s[:2] for i, s in enumerate(solid) if i not in j] + list(rel)
            if acyclic(n, rest):
                dijoins.add(frozenset(j))
    everything = frozenset(range(len(solid)))
    if any(everything - j in dijoins for j in dijoins):
        return None
    points = []
    for j in dijoins:
        flipped = [(s[1], s[0]) if i in j else s[:2] for i, s in enumerate(solid)] + list(rel)
        if acyclic(n, flipped):
            points.append(sorted(j))
    return sorted(points)


def search(extra_arcs, max_vertices):
    for n, es in underlying_graphs(max_vertices):
        base = [(a, b, k) for k, (a, b) in enumerate(es)] + [(b, a, k) for k, (a, b) in enumerate(es)]
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for extra in itertools.combinations(pairs, extra_arcs):
            solid = base + [(a, b, None) for a, b in extra]
            if not short_cycles_absent(n, solid, ()):
                continue
            usable = [p for p in pairs if short_cycles_absent(n, solid, [p])]
            seen = set()
            stack = [frozenset()]
            while stack:
                rel = stack.pop()
                if rel:
                    points = splits(n, solid, rel)
                    if points is not None:
                        yield n, solid, sorted(rel), points
                for p in usable:
                    if p in rel:
                        continue
                    nxt = transitive_closure(rel | {p})
                    if nxt not in seen:
                        seen.add(nxt)
                        if short_cycles_absent(n, solid, nxt):
                            stack.append(nxt)


def dualise(n, solid, rel):
    """Planar dual of H: one vertex per face, one arc per arc of H crossing it left to right."""
    arcs = [(a, b, f"e{i}") for i, (a, b, _) in enumerate(solid)]
    arcs += [(a, b, f"d{i}") for i, (a, b) in enumerate(rel)]
    g = nx.Graph()
    g.add_nodes_from(range(n))
    # subdivide every arc so parallel arcs stay distinct in a simple embedding
    for a, b, name in arcs:
        g.add_edge(a, name)
        g.add_edge(name, b)
    ok, emb = nx.check_planarity(g)
    if not ok:
        return None
    face_of = {}
    faces = []
    for u, v in emb.edges():
        if (u, v) in face_of:
            continue
        face = emb.traverse_face(u, v, mark_half_edges=set())
        k = len(faces)
        faces.append(face)
        for i in range(len(face)):
            face_of[(face[i], face[(i + 1) % len(face)])] = k
    out = []
    for a, b, name in arcs:
        left = face_of[(a, name)]    # face to the left of a -> name traversal
        right = face_of[(name, a)]
        out.append((name, f"f{right}", f"f{left}"))
    verts = tuple(sorted({t for _, t, _ in out} | {h for _, _, h in out}))
    return Digraph(verts, tuple(out))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--extra-arcs", type=int, default=0, help="solid arcs outside the digons")
    p.add_argument("--max-vertices", type=int, default=7)
    p.add_argument("--out", default="capacitated.jsonl")
    args = p.parse_args(argv)
    tried = 0
    for n, solid, rel, points in search(args.extra_arcs, args.max_vertices):
        tried += 1
        d = dualise(n, solid, rel)
        if d is None:
            continue
        cap = [a.id for a in d.arcs if a.id.startswith("e")]
        rep = capacitated_report(d, cap)
        print(f"candidate: min capacity {rep.min_capacity}, {len(rep.restricted_points)} points, "
              f"partition {rep.partition_into_two is not None}, index {rep.lattice_index}")
        if (rep.min_capacity == 2 and rep.min_shores_are_terminals and rep.partition_into_two is None
                and len(rep.restricted_points) == 4 and not rep.ones_in_lattice):
            weights = {a.id: int(a.id in cap) for a in d.arcs}
            inst = Instance("digraph", "capacitated", digraph=Digraph(d.vertices, d.arcs, weights))
            with open(args.out, "w") as fh:
                fh.write(dump_instance(inst))
            print(f"instance written to {args.out}")
            return 0
    print(f"no instance found ({tried} non-partitionable duals)")
    return 1


if __name__ == "__main__":
    sys.exit(main())
