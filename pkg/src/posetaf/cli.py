"""Command-line entry point.

Subcommands mirror the library: ``poset`` inspection, ``quotient``,
``af`` (diagram building and ideal theory), ``bl`` (the classification
construction), and ``homology``.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import behncke_leptin as bl
from . import bratteli, homology, poset_to_af
from .errors import DomainError
from .exprs import render_algebra, render_hilbert
from .poset import Poset, parse_poset, render_subset
from .quotient import parse_covered_space, quotient_poset, topology_of

DEFAULTS = {
    "closed-bound": 20,
    "autos-bound": 12,
    "ideals-bound": 16,
    "homology-bound": 14,
}


def _load_poset(path: str) -> Poset:
    return parse_poset(_read(path))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot read {path}: {e.strerror}") from None


def _load_diagram(path: str) -> bratteli.BrattelliDiagram:
    return bratteli.BrattelliDiagram.from_json(_read(path))


def _config(pairs: list[str]) -> dict[str, int]:
    conf = dict(DEFAULTS)
    for pair in pairs or []:
        key, _, val = pair.partition("=")
        if key not in conf or not val:
            raise DomainError(
                f"bad --config entry {pair!r}; known keys: {', '.join(sorted(conf))}"
            )
        conf[key] = int(val)
    return conf


# -- poset subcommands -------------------------------------------------------


def cmd_poset(args) -> int:
    p = _load_poset(args.file)
    conf = _config(args.config)
    if args.action == "show":
        print("elements: " + " ".join(p.elements))
        print("cover pairs:")
        for a, b in sorted(p.covers):
            print(f"  {a} < {b}")
        print("maximal: " + render_subset(p.maximal_points()))
        print("minimal: " + render_subset(p.minimal_points()))
    elif args.action == "dot":
        print(p.hasse_dot(), end="")
    elif args.action == "closed":
        family = p.all_closed_sets(max_elements=conf["closed-bound"])
        print(f"closed sets ({len(family)}):")
        for s in family:
            print("  " + render_subset(s))
    elif args.action == "chains":
        chains = p.maximal_chains()
        print(f"maximal chains ({len(chains)}):")
        for c in chains:
            print("  " + " < ".join(c))
    else:
        assert args.action == "autos"
        autos = p.automorphisms(max_elements=conf["autos-bound"])
        print(f"automorphisms ({len(autos)}):")
        for f in autos:
            print("  " + ", ".join(f"{x}->{f[x]}" for x in p.elements))
    return 0


def cmd_quotient(args) -> int:
    space = parse_covered_space(_read(args.file))
    poset, projection = quotient_poset(space)
    opens = topology_of(space)
    print(f"# quotient of {len(space.points)} sample points, "
          f"{len(opens)} opens in the generated topology")
    classes: dict[str, list[str]] = {}
    for pt, cls in projection.items():
        classes.setdefault(cls, []).append(pt)
    for cls in poset.elements:
        print(f"# class {cls} = " + render_subset(classes[cls]))
    print(poset.to_text(), end="")
    return 0


# -- af subcommands ----------------------------------------------------------


def cmd_af(args) -> int:
    conf = _config(args.config)
    if args.action == "build":
        return _af_build(args)
    d = _load_diagram(args.file)
    if args.action == "validate":
        report = d.validate()
        print(f"levels stored: {d.stored}" + (f", tail from {d.tail.start} period {d.tail.period}" if d.tail else " (finite)"))
        for w in report.warnings:
            print("warning: " + w)
        for prob in report.problems:
            print("problem: " + prob)
        print("valid: " + ("yes" if report.ok else "no"))
    elif args.action == "ideals":
        marks = bratteli.enumerate_ideals(d, max_period_nodes=conf["ideals-bound"])
        print(f"ideal marks ({len(marks)}):")
        for i, mark in enumerate(marks):
            print(f"  I{i}: {_mark_text(mark)}  [{_mark_flags(d, mark)}]")
    elif args.action == "prim":
        labeled = bratteli.prim_marks(d, max_period_nodes=conf["ideals-bound"])
        for name, mark in labeled:
            print(f"# {name}: {_mark_text(mark)}")
        print(bratteli.prim_poset(d, max_period_nodes=conf["ideals-bound"]).to_text(), end="")
    elif args.action == "commutative":
        print("commutative: " + ("yes" if bratteli.is_commutative(d) else "no"))
    else:
        assert args.action == "dot"
        levels = args.levels or (d.stored + 2 if d.tail else d.stored)
        print(bratteli.diagram_dot(d, levels), end="")
    return 0


def _mark_text(mark: bratteli.IdealMark) -> str:
    return " | ".join(
        "{" + ",".join(str(i) for i in sorted(s)) + "}" for s in mark.levels
    )


def _mark_flags(d: bratteli.BrattelliDiagram, mark: bratteli.IdealMark) -> str:
    if not bratteli.is_proper(d, mark):
        return "improper"
    if mark.marked_count() == 0:
        tag = "zero ideal, "
    else:
        tag = ""
    return tag + ("primitive" if bratteli.is_primitive(d, mark) else "not primitive")


def _af_build(args) -> int:
    p = _load_poset(args.file)
    report = poset_to_af.build_report(p)
    d = report.diagram
    if args.json:
        print(d.to_json(), end="")
        return 0
    if args.dot:
        levels = args.levels or report.stable_start + 2
        print(bratteli.diagram_dot(d, levels), end="")
        return 0
    print(f"elements: {len(p)}; closed sets scheduled: {len(report.schedule)}")
    print("schedule:")
    for i, k in enumerate(report.schedule, start=1):
        print(f"  K{i} = " + render_subset(k))
    print(f"stabilization level n0 = {report.n0}")
    s = report.stable_start
    stable = report.partitions[s - 1]
    nxt = report.partitions[s]
    ywidth = max(len(render_subset(y)) for y in stable.Y)
    print("stable partition:")
    for j, (y, f) in enumerate(zip(stable.Y, nxt.F), start=1):
        print(
            f"  Y({s},{j}) = {render_subset(y):<{ywidth}}   "
            f"F({s + 1},{j}) = {render_subset(f)}"
        )
    print("stable edge matrix (rows: level n+1 nodes, cols: level n nodes):")
    for row in d.edge_matrix(s):
        print("  [" + " ".join(str(v) for v in row) + "]")
    top = args.levels or s + 2
    print("level dimensions:")
    for n in range(1, top + 1):
        print(f"  level {n}: [" + ", ".join(str(v) for v in d.dims(n)) + "]")
    assert d.tail is not None
    print(f"tail: repeats from level {d.tail.start} with period {d.tail.period}")
    return 0


# -- bl subcommands ----------------------------------------------------------


def cmd_bl(args) -> int:
    p = _load_poset(args.file)
    uni = args.unicode
    if args.action == "construct":
        d = bl.parse_defector(args.defector)
        print("defector (given): " + d.render())
        c = bl.construct(p, d, override=args.override_51)
        for note in c.notes:
            print("note: " + note)
        if c.notes:
            print("defector (used): " + c.defector.render())
        print(f"covering forest ropes ({len(c.cover.ropes)}):")
        for rope in c.cover.ropes:
            print("  " + " < ".join(rope))
        atoms = c.atom_list()
        named = [a for a in atoms if a.name is not None]
        if named:
            print("components:")
            for a in named:
                print(
                    f"  H{a.name} = {render_hilbert(a.concrete, uni)}"
                    f"   [chain {' < '.join(a.rope)}]"
                )
        print("H(P,d) = " + render_hilbert(c.total_space(), uni))
        print("point algebras (terms supported in H(x)):")
        for x in p.elements:
            print(f"  A[{x}] = " + render_algebra(c.point_table(x), uni))
        print("A(P,d) = " + render_algebra(c.algebra, uni))
        print("A(P,d), fused identity blocks = " + render_algebra(c.fused_algebra, uni))
    else:
        assert args.action == "equiv"
        d1 = bl.parse_defector(args.d1)
        d2 = bl.parse_defector(args.d2)
        verdict = bl.equivalent_defectors(d1, d2, p, bound=args.bound)
        print("equivalent: " + ("yes" if verdict.equivalent else verdict.message))
    return 0


def cmd_homology(args) -> int:
    conf = _config(args.config)
    p = _load_poset(args.file)
    groups = homology.homology(p, max_elements=conf["homology-bound"])
    for k, g in enumerate(groups):
        torsion = ",".join(str(t) for t in g.torsion) or "-"
        print(f"H_{k}: betti={g.betti} torsion={torsion} -> {g.render()}")
    cx = homology.order_complex(p, max_elements=conf["homology-bound"])
    print(f"euler characteristic = {cx.euler_characteristic()}")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="posetaf",
        description="finite T0 spaces, Bratteli diagrams, and the algebras over them",
    )
    top.add_argument("--unicode", action="store_true", help="render with unicode operators")
    top.add_argument(
        "--config",
        action="append",
        metavar="KEY=VAL",
        help="override a bound (closed-bound, autos-bound, ideals-bound, homology-bound)",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p_poset = sub.add_parser("poset", help="inspect a poset file")
    p_poset.add_argument("action", choices=["show", "dot", "closed", "chains", "autos"])
    p_poset.add_argument("file")
    p_poset.set_defaults(func=cmd_poset)

    p_quot = sub.add_parser("quotient", help="quotient a covered sample space")
    p_quot.add_argument("file")
    p_quot.set_defaults(func=cmd_quotient)

    p_af = sub.add_parser("af", help="Bratteli diagrams and their ideals")
    p_af.add_argument(
        "action", choices=["build", "validate", "ideals", "prim", "commutative", "dot"]
    )
    p_af.add_argument("file", help="poset file for build, diagram JSON otherwise")
    p_af.add_argument("--levels", type=int, help="levels to print")
    p_af.add_argument("--dot", action="store_true", help="emit DOT (build only)")
    p_af.add_argument("--json", action="store_true", help="emit diagram JSON (build only)")
    p_af.set_defaults(func=cmd_af)

    p_bl = sub.add_parser("bl", help="the classification construction")
    p_bl.add_argument("action", choices=["construct", "equiv"])
    p_bl.add_argument("file")
    p_bl.add_argument("--defector", help="e.g. 'p1=1,p2=1,q=0' (construct)")
    p_bl.add_argument(
        "--override-51",
        action="store_true",
        help="accept a defector that is zero at a maximal point",
    )
    p_bl.add_argument("--d1", help="first defector (equiv)")
    p_bl.add_argument("--d2", help="second defector (equiv)")
    p_bl.add_argument("--bound", type=int, help="value cap for the move search")
    p_bl.set_defaults(func=cmd_bl)

    p_hom = sub.add_parser("homology", help="order-complex homology of a poset")
    p_hom.add_argument("file")
    p_hom.set_defaults(func=cmd_homology)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bl":
        if args.action == "construct" and not args.defector:
            parser.error("bl construct requires --defector")
        if args.action == "equiv" and not (args.d1 and args.d2):
            parser.error("bl equiv requires --d1 and --d2")
    try:
        return args.func(args)
    except DomainError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
