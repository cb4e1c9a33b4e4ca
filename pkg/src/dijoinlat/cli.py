"""Command-line front end: instance files, commands and self-checking certificates.

Instance files are line-oriented JSON. The first record is a header, then one
record per vertex, arc (or hyperedge) and family member::

    {"format": "dijoinlat-instance", "version": 1, "kind": "digraph"}
    {"vertex": "u"}
    {"vertex": "v"}
    {"arc": "a1", "tail": "u", "head": "v"}
    {"arc": "a2", "tail": "u", "head": "v", "weight": 1}
    {"family": ["u"]}

Hypergraph files use ``{"edge": "e1", "vertices": ["1", "2"]}`` records instead
of arcs. Blank lines and lines starting with ``#`` are ignored.

Certificates are JSON documents whose ``checks`` are recomputed from the
``result`` payload alone (see :func:`recheck`), never copied from the solver.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import apps, exactla, fixtures, generators
from .basis import verify_integral_basis
from .digraft import validate
from .digraph import (
    DEFAULT_MAX_VERTICES,
    Digraph,
    dicut_shore_masks,
    is_bipartite,
    is_dijoin_mask,
    is_strengthening_mask,
    min_dicut,
)
from .errors import DijoinLatError, InvalidInput, TheoremViolation
from .faces import enumerate_scr_face_points, indicator

FORMAT = "dijoinlat-instance"
VERSION = 1


@dataclass(frozen=True)
class Instance:
    kind: str  # "digraph" | "hypergraph"
    name: str = ""
    digraph: Optional[Digraph] = None
    family: tuple = ()  # tuples of vertex ids
    hypergraph: Optional[apps.Hypergraph] = None

    @property
    def capacity_arcs(self):
        """Arcs of weight 1 when every weight is 0 or 1 and some weight is 0."""
        w = self.digraph.weights if self.digraph is not None else None
        if not w or set(w.values()) - {0, 1} or 0 not in w.values():
            return None
        return tuple(a.id for a in self.digraph.arcs if w.get(a.id, 1) == 1)


# -- instance files ---------------------------------------------------------------

def q(x) -> str:
    """Exact rational as "num/den"."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InvalidInput(f"rational must be a 'p/q' string, got {s!r}")
    try:
        return Fraction(s)
    except ValueError:
        raise InvalidInput(f"bad rational {s!r}") from None


def _records(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"line {lineno}: {exc.msg}") from None
        if not isinstance(rec, dict):
            raise InvalidInput(f"line {lineno}: expected a JSON object")
        yield lineno, rec


def _str_list(val, what, lineno):
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        raise InvalidInput(f"line {lineno}: {what} must be a list of strings")
    return tuple(val)


def parse_instance(text: str, name: str = "") -> Instance:
    recs = list(_records(text))
    if not recs:
        raise InvalidInput("empty instance file")
    lineno, head = recs[0]
    if head.get("format") != FORMAT:
        raise InvalidInput(f"line {lineno}: header must have format {FORMAT!r}")
    if head.get("version") != VERSION:
        raise InvalidInput(f"line {lineno}: unsupported version {head.get('version')!r}")
    kind = head.get("kind")
    if kind not in ("digraph", "hypergraph"):
        raise InvalidInput(f"line {lineno}: kind must be 'digraph' or 'hypergraph'")
    verts, arcs, edges, family, weights = [], [], [], [], {}
    for lineno, rec in recs[1:]:
        keys = set(rec)
        if keys == {"vertex"} and isinstance(rec["vertex"], str):
            verts.append(rec["vertex"])
        elif kind == "digraph" and "arc" in rec and keys <= {"arc", "tail", "head", "weight"}:
            try:
                arcs.append((rec["arc"], rec["tail"], rec["head"]))
            except KeyError as exc:
                raise InvalidInput(f"line {lineno}: arc record lacks {exc.args[0]!r}") from None
            if not all(isinstance(x, str) for x in arcs[-1]):
                raise InvalidInput(f"line {lineno}: arc fields must be strings")
            if "weight" in rec:
                w = parse_q(rec["weight"])
                if w.denominator != 1:
                    raise InvalidInput(f"line {lineno}: weights must be integers")
                weights[rec["arc"]] = int(w)
        elif kind == "hypergraph" and keys == {"edge", "vertices"}:
            edges.append(_str_list(rec["vertices"], "edge vertices", lineno))
        elif keys == {"family"}:
            family.append(_str_list(rec["family"], "family member", lineno))
        else:
            raise InvalidInput(f"line {lineno}: unrecognised record {sorted(keys)}")
    if kind == "hypergraph":
        if family:
            raise InvalidInput("hypergraph instances take no family")
        return Instance(kind, name, hypergraph=apps.Hypergraph(tuple(verts), tuple(edges)))
    d = Digraph(tuple(verts), tuple(arcs), weights or None)
    for member in family:
        d.vmask(member)  # referential integrity
    return Instance(kind, name, digraph=d, family=tuple(family))


def dump_instance(inst: Instance) -> str:
    lines = [{"format": FORMAT, "version": VERSION, "kind": inst.kind}]
    if inst.kind == "hypergraph":
        h = inst.hypergraph
        lines += [{"vertex": v} for v in h.vertices]
        lines += [{"edge": f"e{k}", "vertices": list(e)} for k, e in enumerate(h.edges)]
    else:
        d = inst.digraph
        lines += [{"vertex": v} for v in d.vertices]
        for a in d.arcs:
            rec = {"arc": a.id, "tail": a.tail, "head": a.head}
            if d.weights is not None and a.id in d.weights:
                rec["weight"] = d.weights[a.id]
            lines.append(rec)
        lines += [{"family": list(f)} for f in inst.family]
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in lines)


def instance_hash(inst: Instance) -> str:
    return hashlib.sha256(dump_instance(inst).encode()).hexdigest()


def fixture_instance(name: str) -> Instance:
    fx = fixtures.get(name)
    if fx.kind == "hypergraph":
        return Instance("hypergraph", name, hypergraph=fx.hypergraph)
    d = fx.digraph
    if fx.capacity_arcs is not None:
        cap = set(fx.capacity_arcs)
        d = Digraph(d.vertices, d.arcs, {a.id: int(a.id in cap) for a in d.arcs})
    return Instance("digraph", name, digraph=d, family=tuple(tuple(f) for f in fx.family))


def random_instance(kind: str, seed: int) -> Instance:
    rng = random.Random(seed)
    if kind == "digraft":
        g = generators.random_digraft(rng)
        fam = tuple(tuple(sorted(s, key=g.digraph.vindex.get)) for s in g.family_sets())
        return Instance("digraph", f"random-digraft-{seed}", digraph=g.digraph, family=fam)
    if kind == "digraph":
        return Instance("digraph", f"random-digraph-{seed}",
                        digraph=generators.random_tau_digraph(rng))
    verts, edges = generators.random_2ec_graph(rng)
    return Instance("hypergraph", f"random-graph-{seed}",
                    hypergraph=apps.Hypergraph(verts, tuple(edges)))


# -- payload helpers ------------------------------------------------------------------

def _ids(d: Digraph, mask: int):
    return sorted(d.arc_ids(mask), key=d.aindex.get)


def _vids(d: Digraph, mask_or_ids):
    ids = d.vertex_ids(mask_or_ids) if isinstance(mask_or_ids, int) else mask_or_ids
    return sorted(ids, key=d.vindex.get)


def _need(inst: Instance, kind: str):
    if inst.kind != kind:
        raise InvalidInput(f"this command needs a {kind} instance, got {inst.kind}")


def _digraft(inst: Instance, max_vertices: int):
    _need(inst, "digraph")
    if not inst.family:
        raise InvalidInput("a digraft instance needs family records")
    return validate(inst.digraph, inst.family, max_vertices=max_vertices)


def _basis_check(fp, arcsets) -> dict:
    d = fp.digraph
    masks = [d.amask(s) for s in arcsets]
    pts = set(fp.points)
    if not all(m in pts for m in masks):
        return {"face_points": False}
    cert = verify_integral_basis(fp, masks)
    return {"face_points": True, "independent": cert.independent,
            "size_is_rank": cert.size == cert.expected_size, "index_one": cert.index == 1}


def _mutual_check(d: Digraph, b1, b2) -> bool:
    rows1 = [indicator(d.amask(s), d.m) for s in b1]
    rows2 = [indicator(d.amask(s), d.m) for s in b2]
    for rows, other in ((rows1, rows2), (rows2, rows1)):
        for v in other:
            c = exactla.express(rows, v)
            if c is None or not exactla.is_integral(c):
                return False
    return True


# -- commands ---------------------------------------------------------------------------

def cmd_verify(inst: Instance, args) -> dict:
    g = _digraft(inst, args.max_vertices)
    d, an, cl = g.digraph, g.analysis, g.classification
    return {
        "points": [_ids(d, p) for p in g.face.points],
        "tight_nodes": _vids(d, an.tight_nodes),
        "active_nodes": _vids(d, an.active_nodes),
        "dim": an.dim,
        "kappa_t": an.kappa_t,
        "slack": an.slack,
        "closure": [_vids(d, u) for u in g.closure],
        "basic": cl.basic,
        "robust": cl.robust,
    }


def _basis_payload(inst: Instance, method: str, max_vertices: int) -> dict:
    d = inst.digraph
    methods = ["oracle", "recursive"] if method == "both" else [method]
    if is_bipartite(d):
        g = _digraft(inst, max_vertices)
        fp = g.face
        bases = {m: apps.digraft_basis(g, m) for m in methods}
        face = "dij"
    else:
        if not inst.family:
            raise InvalidInput("a basis instance needs family records")
        gval = apps.family_gcd(d, inst.family)
        if gval != 1:
            rep = apps.lattice_report(d, inst.family, method=methods[0],
                                      max_vertices=max_vertices)
            return {"face": "scr", "g": gval, "lattice": rep.to_dict(d),
                    "note": f"gcd of the right-hand sides is {gval}; "
                            "reporting a lattice basis and the g-scaling instead"}
        bases = {m: apps.scr_integral_basis(d, inst.family, m, max_vertices) for m in methods}
        fp = enumerate_scr_face_points(d, inst.family)
        face = "scr"
    out = {"face": face, "num_points": len(fp.points)}
    for m, b in bases.items():
        cert = verify_integral_basis(fp, b)
        out[m] = {"basis": [_ids(d, p) for p in b.points], "divisors": list(cert.divisors),
                  "provenance": b.provenance.get("case", "")}
    return out


def _capacitated_payload(inst: Instance, max_vertices: int) -> dict:
    d = inst.digraph
    cap = inst.capacity_arcs
    rep = apps.capacitated_report(d, cap, max_vertices)
    terminals = [v for i, v in enumerate(d.vertices) if not d.in_arcs[i] or not d.out_arcs[i]]
    fam = [[v] if d.out_arcs[d.vindex[v]] else [u for u in d.vertices if u != v]
           for v in terminals]
    lat = apps.lattice_report(d, fam, points=rep.restricted_points, max_vertices=max_vertices)
    return {
        "face": "scr-capacitated",
        "capacity_arcs": list(cap),
        "min_capacity": rep.min_capacity,
        "restricted_points": [_ids(d, p) for p in rep.restricted_points],
        "lattice_basis": [_ids(d, p) for p in lat.lattice_basis],
        "lattice_index": rep.lattice_index,
        "ones_in_span": rep.ones_in_span,
        "ones_in_lattice": rep.ones_in_lattice,
        "span_coefficients": ([q(c) for c in rep.extra["coefficients"]]
                              if rep.extra["coefficients"] is not None else None),
        "partition_into_two": ([_ids(d, j) for j in rep.partition_into_two]
                               if rep.partition_into_two else None),
        "note": "the capacity-one vector lies in the span of the restricted points "
                "but not in their lattice" if rep.ones_in_span and not rep.ones_in_lattice
                else "",
    }


def cmd_basis(inst: Instance, args) -> dict:
    _need(inst, "digraph")
    if inst.capacity_arcs is not None:
        return _capacitated_payload(inst, args.max_vertices)
    return _basis_payload(inst, args.method, args.max_vertices)


def cmd_partition(inst: Instance, args) -> dict:
    _need(inst, "digraph")
    w = apps.woodall_partition(inst.digraph, "oracle", args.max_vertices)
    d = inst.digraph
    return {"tau": w.tau, "min_dicut_shores": [_vids(d, u) for u in w.shores],
            "terms": [{"dijoin": _ids(d, j), "lambda": lam} for j, lam in w.terms()]}


def cmd_padic(inst: Instance, args) -> dict:
    _need(inst, "digraph")
    pk = apps.p_adic_packing(inst.digraph, args.prime, max_vertices=args.max_vertices)
    d = inst.digraph
    return {"prime": pk.prime, "value": q(pk.value),
            "terms": [{"dijoin": _ids(d, j), "y": q(y)} for j, y in pk.entries]}


def cmd_orient(inst: Instance, args) -> dict:
    _need(inst, "hypergraph")
    oa = apps.hypergraph_orientation_assignment(inst.hypergraph,
                                                max_vertices=args.max_vertices)
    return {"tau": inst.hypergraph.tau,
            "terms": [{"heads": list(o), "lambda": lam}
                      for o, lam in zip(oa.orientations, oa.coefficients)]}


COMMANDS = {
    "verify": cmd_verify,
    "basis": cmd_basis,
    "partition": cmd_partition,
    "padic": cmd_padic,
    "orient": cmd_orient,
}


# -- rechecking a payload ------------------------------------------------------------------

def _recheck_verify(inst, res, mv):
    g = _digraft(inst, mv)
    d = g.digraph
    pts = [d.amask(s) for s in res["points"]]
    rows = [indicator(p, d.m) + [1] for p in pts]
    tight = [v for v in d.vertices
             if all((p & d.inc_arcs[d.vindex[v]]).bit_count() == 1 for p in pts)]
    kappa = int(len(tight) == d.n)
    dim = exactla.rank(rows) - 1
    return {
        "points_match_face": sorted(pts) == sorted(g.face.points),
        "tight_nodes": tight == res["tight_nodes"],
        "dim": dim == res["dim"],
        "slack_formula": res["slack"] == d.m - len(tight) + kappa - dim,
        "closure_tight": all(
            all((p & d.out_of(d.vmask(u))).bit_count() == 1 for p in pts)
            for u in res["closure"]),
    }


def _recheck_basis(inst, res, mv):
    d = inst.digraph
    if res["face"] == "scr-capacitated":
        cap = d.amask(res["capacity_arcs"])
        shores = dicut_shore_masks(d, mv)
        pts = [d.amask(s) for s in res["restricted_points"]]
        rows = [indicator(p, d.m) for p in pts]
        ones = indicator(cap, d.m)
        coeffs = exactla.express(rows, ones)
        lat = [indicator(d.amask(s), d.m) for s in res["lattice_basis"]]
        lc = exactla.express(lat, ones) if lat else None
        out = {
            "min_capacity": min((d.out_of(u) & cap).bit_count() for u in shores)
            == res["min_capacity"],
            "points_strengthening": all(is_strengthening_mask(d, p) and p & ~cap == 0
                                        for p in pts),
            "lattice_basis_spans": exactla.sublattice_index(lat, exactla.lattice_basis(rows))
            == 1 if lat else not rows,
            "ones_in_span": (coeffs is not None) == res["ones_in_span"],
            "ones_in_lattice": (lc is not None and exactla.is_integral(lc))
            == res["ones_in_lattice"],
            "index": exactla.lattice_index(rows) == res["lattice_index"],
        }
        part = res["partition_into_two"]
        if part is not None:
            j1, j2 = (d.amask(s) for s in part)
            out["partition"] = (j1 | j2 == cap and not j1 & j2
                                and is_dijoin_mask(d, j1) and is_dijoin_mask(d, j2))
        return out
    if "lattice" in res:
        lat = res["lattice"]
        return {"g": apps.family_gcd(d, inst.family) == res["g"],
                "index": exactla.lattice_index(
                    [indicator(d.amask(s), d.m) for s in lat["latticeBasis"]]) >= 1}
    if res["face"] == "dij":
        fp = _digraft(inst, mv).face
    else:
        fp = enumerate_scr_face_points(d, inst.family)
    out = {}
    bases = [m for m in ("oracle", "recursive") if m in res]
    for m in bases:
        for k, ok in _basis_check(fp, res[m]["basis"]).items():
            out[f"{m}.{k}"] = ok
    if len(bases) == 2:
        out["mutually_integral"] = _mutual_check(d, res["oracle"]["basis"],
                                                 res["recursive"]["basis"])
    return out


def _recheck_partition(inst, res, mv):
    d = inst.digraph
    tau, _ = min_dicut(d, max_vertices=mv)
    shores = [d.vmask(u) for u in res["min_dicut_shores"]]
    terms = [(d.amask(t["dijoin"]), t["lambda"]) for t in res["terms"]]
    total = [0] * d.m
    for j, lam in terms:
        for a in range(d.m):
            total[a] += lam * (j >> a & 1)
    fp = enumerate_scr_face_points(d, shores)
    return {
        "tau": tau == res["tau"],
        "integral": all(isinstance(lam, int) for _, lam in terms),
        "sum_is_ones": total == [1] * d.m,
        "lambda_sum_is_tau": sum(lam for _, lam in terms) == tau,
        "dijoins_meet_min_dicuts_once": all(
            is_dijoin_mask(d, j) and all((d.out_of(u) & j).bit_count() == 1 for u in shores)
            for j, _ in terms),
        **{f"support.{k}": ok for k, ok in _basis_check(fp, [t["dijoin"] for t in res["terms"]]).items()},
    }


def _recheck_padic(inst, res, mv):
    d = inst.digraph
    tau, _ = min_dicut(d, max_vertices=mv)
    entries = tuple((d.amask(t["dijoin"]), parse_q(t["y"])) for t in res["terms"])
    pk = apps.PAdicPacking(d, res["prime"], entries, Fraction(tau))
    return {"value_is_tau": parse_q(res["value"]) == tau, **pk.check()}


def _recheck_orient(inst, res, mv):
    h = inst.hypergraph
    oa = apps.OrientationAssignment(h, None, tuple(tuple(t["heads"]) for t in res["terms"]),
                                    tuple(t["lambda"] for t in res["terms"]))
    return oa.check()


_RECHECK = {
    "verify": _recheck_verify,
    "basis": _recheck_basis,
    "partition": _recheck_partition,
    "padic": _recheck_padic,
    "orient": _recheck_orient,
}


def recheck(inst: Instance, command: str, result: dict,
            max_vertices: int = DEFAULT_MAX_VERTICES) -> dict:
    """Recompute the checklist of a certificate from its payload and the instance."""
    return _RECHECK[command](inst, result, max_vertices)


def certificate(inst: Instance, command: str, argv, result: dict, max_vertices: int) -> dict:
    checks = recheck(inst, command, result, max_vertices)
    return {"command": list(argv), "instance": {"name": inst.name, "sha256": instance_hash(inst)},
            "result": result, "checks": checks, "ok": all(checks.values())}


# -- argument parsing ---------------------------------------------------------------------

def _load(args) -> Instance:
    if args.fixture:
        return fixture_instance(args.fixture)
    if args.instance is None:
        raise InvalidInput("give an instance file or --fixture NAME")
    if args.instance == "-":
        return parse_instance(sys.stdin.read(), "<stdin>")
    try:
        with open(args.instance, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.instance}: {exc.strerror}") from None
    return parse_instance(text, args.instance)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dijoinlat",
                                description="Integral bases of dijoin faces and their uses.")
    p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                   help="cap on |V| for dicut enumeration (default %(default)s)")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("instance", nargs="?", help="instance file, or - for stdin")
        sp.add_argument("--fixture", help="use a bundled fixture instead of a file")
        return sp

    instance_cmd("verify", "check digraft axioms and analyse the face")
    instance_cmd("basis", "integral basis of the face").add_argument(
        "--method", choices=["oracle", "recursive", "both"], default="both")
    instance_cmd("partition", "integer dijoin combination summing to the all-ones vector")
    instance_cmd("padic", "p-adic optimal dijoin packing").add_argument(
        "--prime", type=int, default=2)
    instance_cmd("orient", "strongly connected hypergraph orientations")
    fx = sub.add_parser("fixtures", help="bundled and generated instances")
    fsub = fx.add_subparsers(dest="action", required=True)
    fsub.add_parser("list", help="list bundled fixtures")
    show = fsub.add_parser("show", help="print a fixture as an instance file")
    show.add_argument("name")
    rnd = fsub.add_parser("random", help="print a seeded random instance")
    rnd.add_argument("--kind", choices=["digraft", "digraph", "graph"], default="digraft")
    rnd.add_argument("--seed", type=int, default=0)
    return p


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def run(argv, out=sys.stdout, err=sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    inst = None
    try:
        if args.command == "fixtures":
            if args.action == "list":
                for name, make in fixtures.REGISTRY.items():
                    try:
                        fx = make()
                    except DijoinLatError as exc:
                        out.write(f"{name}\tunavailable\t{exc}\n")
                        continue
                    out.write(f"{name}\t{fx.kind}\t{fx.description}\n")
            elif args.action == "show":
                try:
                    out.write(dump_instance(fixture_instance(args.name)))
                except KeyError as exc:
                    raise InvalidInput(exc.args[0]) from None
            else:
                out.write(dump_instance(random_instance(args.kind, args.seed)))
            return 0
        if getattr(args, "fixture", None) and args.fixture not in fixtures.REGISTRY:
            raise InvalidInput(f"unknown fixture {args.fixture!r}")
        inst = _load(args)
        result = COMMANDS[args.command](inst, args)
        cert = certificate(inst, args.command, argv, result, args.max_vertices)
        _emit(cert, out)
        return 0 if cert["ok"] else TheoremViolation.exit_code
    except DijoinLatError as exc:
        report = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        if isinstance(exc, TheoremViolation) and exc.instance is not None:
            report["instance"] = exc.instance
        _emit(report, err)
        return exc.exit_code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
