"""Run the recursive basis construction over a seeded stream of random digrafts.

Each instance is built with ``integral_basis_recursive`` and checked with
``verify_integral_basis``. The first failure is written to ``--dump`` as an
instance file and the script exits with code 4.

    python3 scripts/property_suite.py --seed 2026 --count 500
"""

import argparse
import sys
import time

from dijoinlat.basis import integral_basis_recursive, verify_integral_basis
from dijoinlat.cli import Instance, dump_instance
from dijoinlat.errors import DijoinLatError, TheoremViolation
from dijoinlat.generators import GenConfig, digraft_stream


def as_instance(g, name):
    d = g.digraph
    fam = tuple(tuple(sorted(s, key=d.vindex.get)) for s in g.family_sets())
    return Instance("digraph", name, digraph=d, family=fam)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--max-vertices", type=int, default=8)
    p.add_argument("--max-arcs", type=int, default=14)
    p.add_argument("--dump", default="falsifier.jsonl")
    args = p.parse_args(argv)

    cfg = GenConfig(max_vertices=args.max_vertices, max_arcs=args.max_arcs)
    t0 = time.perf_counter()
    cases = {}
    for k, g in enumerate(digraft_stream(args.seed, args.count, cfg)):
        try:
            basis = integral_basis_recursive(g)
            cert = verify_integral_basis(g.face, basis.points)
            if not cert.ok:
                raise TheoremViolation(f"verification failed: {cert.reason}")
        except DijoinLatError as exc:
            with open(args.dump, "w") as fh:
                fh.write(dump_instance(as_instance(g, f"seed{args.seed}-case{k}")))
            print(f"case {k}: {type(exc).__name__}: {exc}; instance written to {args.dump}")
            return TheoremViolation.exit_code
        case = basis.provenance.get("case", "?")
        cases[case] = cases.get(case, 0) + 1
    dt = time.perf_counter() - t0
    print(f"{args.count} digrafts, 0 failures, {dt:.1f}s; top-level cases {cases}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
