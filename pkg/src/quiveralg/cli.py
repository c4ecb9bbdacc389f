"""Command-line interface: parse the DSL, run the pipeline, emit JSON.

Every command reads one presentation file (``-`` for stdin) and writes a
single pretty-printed, key-sorted JSON document, so identical invocations
produce byte-identical output.  Exit codes: 0 success, 1 domain errors
(structured ``error`` object), 2 parse errors (with line and column).
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from .quivers import QuiverAlgError
from .dsl import (
    ParseError,
    format_file,
    format_ncpoly,
    format_presentation,
    format_superpotential,
    parse_text,
)


def _read_source(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _emit(report, out_path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _int_vector(text, name):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise QuiverAlgError(
            f"--{name} expects a comma-separated integer vector, "
            f"got {text!r}"
        )


def _require_super(parsed):
    w = parsed.superpotential()
    if w is None:
        raise QuiverAlgError("input file declares no superpotential")
    return w


# -- command implementations ---------------------------------------------------


def cmd_parse(parsed, args):
    quiver = parsed.quiver
    return {
        "nodes": quiver.node_count,
        "arrow_count": len(quiver.arrows),
        "relation_count": len(parsed.relations),
        "superpotential_count": len(parsed.supers),
        "arrows": [
            {
                "name": a.name,
                "source": a.source,
                "target": a.target,
                "degree": a.degree,
            }
            for a in quiver.arrows
        ],
        "relations": [
            {"name": name, "text": format_ncpoly(quiver, poly)}
            for name, poly in parsed.relations
        ],
        "superpotentials": [
            {"name": name, "text": format_superpotential(quiver, w)}
            for name, w in parsed.supers
        ],
        "dsl": format_file(quiver, parsed.relations, parsed.supers),
    }


def cmd_hilbert(parsed, args):
    presentation = parsed.presentation()
    table = presentation.hilbert_table(args.max_deg)
    rows = []
    r = presentation.quiver.node_count
    for d in range(args.max_deg + 1):
        for i in range(r):
            for j in range(r):
                n = table[d][i][j]
                if n:
                    rows.append({
                        "degree": d,
                        "component": [i, j],
                        "dimension": n,
                    })
    return {"max_degree": args.max_deg, "table": rows}


def cmd_complete(parsed, args):
    presentation = parsed.presentation()
    total_deg = args.total_deg
    quiver, w = _completion(presentation, total_deg)
    old = len(presentation.quiver.arrows)
    return {
        "total_degree": total_deg
        if total_deg is not None else presentation.quiver.node_count,
        "new_arrows": [
            {
                "name": a.name,
                "source": a.source,
                "target": a.target,
                "degree": a.degree,
            }
            for a in quiver.arrows[old:]
        ],
        "superpotential": format_superpotential(quiver, w),
        "dsl": format_file(quiver, (), [("W", w)]),
    }


def _completion(presentation, total_deg):
    from .cyclic import cyclic_complete_presentation

    return cyclic_complete_presentation(presentation, total_deg)


def cmd_derive(parsed, args):
    from .cyclic import cyclic_derivative

    quiver = parsed.quiver
    w = _require_super(parsed)
    if args.arrow not in quiver.by_name:
        raise QuiverAlgError(f"unknown arrow {args.arrow!r}")
    poly = cyclic_derivative(quiver, w, args.arrow)
    return {
        "arrow": args.arrow,
        "derivative": format_ncpoly(quiver, poly),
    }


def cmd_ext(parsed, args):
    from .ainf import ext_groups

    presentation = parsed.presentation()
    bimod = ext_groups(presentation, args.max_deg)
    groups = []
    totals = {}
    for (k, d, i, j) in sorted(bimod.slots):
        labels = bimod.labels(k, d, i, j)
        groups.append({
            "k": k,
            "degree": d,
            "component": [i, j],
            "dimension": len(labels),
            "basis": labels,
        })
        totals[str(k)] = totals.get(str(k), 0) + len(labels)
    return {"max_degree": args.max_deg, "groups": groups, "totals": totals}


def cmd_reconstruct(parsed, args):
    from .barmodel import BarModel
    from .ainf import reconstruct, transfer_ainfinity

    presentation = parsed.presentation()
    model = BarModel(presentation, args.max_deg)
    structure = transfer_ainfinity(
        model, max_degree=args.max_deg, max_arity=args.max_arity
    )
    rebuilt = reconstruct(structure)
    match = (
        presentation.hilbert_table(args.max_deg)
        == rebuilt.hilbert_table(args.max_deg)
    )
    return {
        "max_degree": args.max_deg,
        "max_arity": args.max_arity,
        "arrows": len(rebuilt.quiver.arrows),
        "relations": [
            {"name": name, "text": format_ncpoly(rebuilt.quiver, poly)}
            for name, poly in zip(rebuilt.rel_names, rebuilt.relations)
        ],
        "hilbert_match": match,
        "dsl": format_presentation(rebuilt),
    }


def cmd_cycfill(parsed, args):
    from .barmodel import BarModel
    from .ainf import (
        cyclic_complete_ainf,
        superpotential_from_cyclic,
        transfer_ainfinity,
    )

    presentation = parsed.presentation()
    model = BarModel(presentation, args.max_deg)
    structure = transfer_ainfinity(
        model, max_degree=args.max_deg, max_arity=args.max_arity
    )
    cy_dimension = 3
    completed = cyclic_complete_ainf(
        structure, cy_dimension, weight=args.total_deg
    )
    quiver, w = superpotential_from_cyclic(completed)
    stasheff_ok, stasheff_msg = completed.stasheff_check()
    cyclic_ok, cyclic_msg = completed.cyclicity_check()
    dual_ok, dual_msg = completed.dual_vanishing_check()
    return {
        "cy_dimension": cy_dimension,
        "weight": completed.weight,
        "superpotential": format_superpotential(quiver, w),
        "dsl": format_file(quiver, (), [("W", w)]),
        "checks": {
            "stasheff": stasheff_ok,
            "cyclicity": cyclic_ok,
            "dual_vanishing": dual_ok,
            "messages": [
                m for m in (stasheff_msg, cyclic_msg, dual_msg) if m
            ],
        },
        "structure": completed.to_json_dict(),
    }


def _random_diagonal(R, rng, magnitude=2):
    """Random element family node -> m(i, i); empty where none exist."""
    out = {}
    for i in range(R.node_count):
        u = {}
        for m, (_label, a, b) in enumerate(R.basis):
            if a == i and b == i:
                c = rng.randint(-magnitude, magnitude)
                if c:
                    u[m] = Fraction(c)
        if u:
            out[i] = u
    return out


def cmd_mc(parsed, args):
    from .barmodel import BarModel
    from .ainf import transfer_ainfinity
    from .deformation import (
        ArtinAlgebra,
        algebra_map_to_mc,
        apply_gauge_first_order,
        mc_check,
        mc_to_algebra_map,
        tautological_mc,
        unit_conjugate,
    )
    from .reps import child_seed

    presentation = parsed.presentation()
    order = args.total_deg if args.total_deg is not None else 3
    model = BarModel(presentation, args.max_deg)
    structure = transfer_ainfinity(
        model, max_degree=args.max_deg, max_arity=args.max_arity
    )
    target = ArtinAlgebra.truncate(presentation, order)
    base = tautological_mc(structure, model, target)

    instances = [("tautological", base)]
    for k in range(args.samples):
        rng = random.Random(child_seed(args.seed, k))
        t = Fraction(
            rng.choice([1, 2, 3, -1, -2, -3]), rng.choice([1, 2, 3])
        )
        v = _random_diagonal(target, rng)
        a = {}
        for pos, u in base.items():
            e = structure.elements[pos]
            scaled = {m: c * t ** e.d for m, c in u.items()}
            a[pos] = unit_conjugate(
                target, scaled, v.get(e.source, {}), v.get(e.target, {})
            )
        a = {pos: u for pos, u in a.items() if u}
        instances.append((f"sample{k}", a))

    failures = []
    for name, a in instances:
        holds, residual = mc_check(structure, target, a)
        if not holds:
            failures.append({"instance": name, "stage": "maurer-cartan"})
            continue
        mapping, verified, bad = mc_to_algebra_map(structure, target, a)
        if not verified:
            failures.append({
                "instance": name,
                "stage": "relations",
                "relations": [rel for rel, _value in bad],
            })
        if algebra_map_to_mc(structure, mapping) != a:
            failures.append({"instance": name, "stage": "roundtrip"})

    gauge_checked = 0
    gauge_ok = True
    for k in range(3):
        rng = random.Random(child_seed(args.seed, 10_000 + k))
        b = _random_diagonal(target, rng)
        extended, moved = apply_gauge_first_order(
            structure, target, b, base
        )
        holds, _residual = mc_check(structure, extended, moved)
        gauge_checked += 1
        if not holds:
            gauge_ok = False
    return {
        "order": order,
        "instances": len(instances),
        "all_ok": not failures,
        "failures": failures,
        "gauge_directions": gauge_checked,
        "gauge_first_order": gauge_ok,
    }


def cmd_repcheck(parsed, args):
    from .reps import critical_identity_check

    w = _require_super(parsed)
    if not args.dim:
        raise QuiverAlgError("--dim is required for repcheck")
    dims = _int_vector(args.dim, "dim")
    report = critical_identity_check(
        parsed.quiver, w, dims, samples=args.samples, seed=args.seed
    )
    return report


def cmd_stability(parsed, args):
    from .reps import RepPoint, child_seed, theta_stability_ones

    quiver = parsed.quiver
    if not args.theta:
        raise QuiverAlgError("--theta is required for stability")
    theta = _int_vector(args.theta, "theta")
    r = quiver.node_count
    dims = tuple([1] * r)
    if args.dim:
        dims = _int_vector(args.dim, "dim")
    rows = []
    for k in range(args.samples):
        rho = RepPoint.random(quiver, dims, child_seed(args.seed, k))
        verdict = theta_stability_ones(quiver, rho, theta)
        rows.append({
            "sample": k,
            "values": {
                a.name: int(rho.matrices[a.name][0][0])
                for a in quiver.arrows
            },
            "verdict": verdict["verdict"],
            "reason": verdict["reason"],
            "witness": verdict["witness"],
        })
    return {
        "theta": list(theta),
        "samples": rows,
    }


_COMMANDS = {
    "parse": cmd_parse,
    "hilbert": cmd_hilbert,
    "complete": cmd_complete,
    "derive": cmd_derive,
    "ext": cmd_ext,
    "reconstruct": cmd_reconstruct,
    "cycfill": cmd_cycfill,
    "mc": cmd_mc,
    "repcheck": cmd_repcheck,
    "stability": cmd_stability,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quiveralg",
        description="Graded quiver presentations: Ext structures, "
                    "superpotentials, and representation checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "parse": "Parse a presentation file and echo its canonical form.",
        "hilbert": "Degree-wise component dimensions of the quotient.",
        "complete": "Adjoin one arrow per relation and wrap them into a "
                    "superpotential.",
        "derive": "Cyclic derivative of the file's superpotential.",
        "ext": "Ext-group dimensions and basis labels from the bar model.",
        "reconstruct": "Rebuild a presentation from the transferred "
                       "products.",
        "cycfill": "Cyclically complete the transferred structure and "
                   "extract its superpotential.",
        "mc": "Check the Maurer-Cartan / algebra-map correspondence on "
              "a nilpotent truncation.",
        "repcheck": "Critical-locus identity for the superpotential at "
                    "sampled representation points.",
        "stability": "Theta-stability verdicts at dimension vector "
                     "(1, .., 1) on sampled points.",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("file", help="presentation file, or - for stdin")
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--max-deg", type=int, default=6,
                       help="degree window (default 6)")
        p.add_argument("--max-arity", type=int, default=6,
                       help="arity cap for products (default 6)")
        p.add_argument("--total-deg", type=int, default=None,
                       help="completion degree / pairing weight / "
                            "nilpotency order, per command")
        p.add_argument("--samples", type=int, default=20,
                       help="number of seeded samples (default 20)")
        p.add_argument("--seed", type=int, default=0,
                       help="master random seed (default 0)")
        if name == "derive":
            p.add_argument("--arrow", required=True,
                           help="arrow to differentiate by")
        if name in ("repcheck", "stability"):
            p.add_argument("--dim", help="comma-separated dimension vector")
        if name == "stability":
            p.add_argument("--theta", help="comma-separated weight vector")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        parsed = parse_text(_read_source(args.file))
        report = _COMMANDS[args.command](parsed, args)
    except ParseError as err:
        _emit({
            "error": {
                "code": err.code,
                "line": err.line,
                "col": err.col,
                "message": err.message,
            }
        }, None)
        return 2
    except QuiverAlgError as err:
        _emit({"error": {"code": "domain", "message": str(err)}}, None)
        return 1
    except OSError as err:
        _emit({"error": {"code": "io", "message": str(err)}}, None)
        return 1
    _emit(report, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
