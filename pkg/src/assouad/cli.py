"""Command-line surface: descriptors in, JSON reports out.

Commands
  set-dim      dimension estimate for a set descriptor file
  build-tree   construct a cube hierarchy, optionally dump it as text
  verify-tree  construct and exactly audit the structural properties
  synth        build a measure with prescribed dimensions, write its manifest
  measure-dim  dimension estimate for a measure descriptor file
  classify     tail-ratio classification of a discrete measure
  accept       run the acceptance suite

Exit codes: 0 success, 2 domain/precondition errors, 3 precision/calibration
errors, 4 inconclusive classification.  Reports contain no wall-clock data
except under the dedicated "runtimes" key of ``accept``, so identical
invocations produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import acceptance
from .cubes import CubeParams, build_tree, dump_tree, verify_properties
from .errors import (
    AssouadError,
    CalibrationError,
    ConstructionError,
    DomainError,
    InconclusiveError,
    PrecisionError,
    StructureError,
)
from .estimators import (
    classify_tail_ratios,
    measure_dimension,
    set_dimension,
    window_for_measure,
    window_for_set,
)
from .measures import (
    CodingTree,
    DiscreteMeasure,
    ExplicitMasses,
    GeometricMasses,
    HarmonicTailMasses,
    add_atom,
    cantor_measure_pair,
    sum_measures,
    uniform_measure,
)
from .rational import frac, frac_str
from .sets import descriptor_from_json
from .synth import LadderSpec, synthesize_lower_upper, synthesize_upper

EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_INCONCLUSIVE = 4


def _load_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(report, out_path):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def load_measure(data):
    """Measure from its JSON descriptor form."""
    if not isinstance(data, dict) or "kind" not in data:
        raise DomainError("measure JSON must be an object with a 'kind' key")
    kind = data["kind"]
    if kind == "mixture":
        base = load_measure(data["base"])
        out = base
        for atom in data.get("atoms", []):
            out = add_atom(out, frac(atom["point"]), frac(atom.get("mass", 1)))
        return out
    if kind == "discrete":
        desc = descriptor_from_json(data["set"])
        masses = data["masses"]
        name = masses.get("name")
        if name == "geometric":
            profile = GeometricMasses(frac(masses["p"]),
                                      frac(masses["scale"]) if "scale" in masses else None)
        elif name == "harmonic_tail":
            profile = HarmonicTailMasses(frac(masses.get("scale", 1)))
        elif name == "explicit":
            profile = ExplicitMasses([frac(v) for v in masses["values"]])
        else:
            raise DomainError(f"unknown mass profile {name!r}")
        return DiscreteMeasure(desc, profile, at_zero=frac(data.get("at_zero", 0)))
    if kind == "weighted":
        tree_spec = data["tree"]
        if tree_spec.get("kind") == "coding":
            tree = CodingTree(int(tree_spec.get("depth", 12)))
        elif tree_spec.get("kind") == "cubes":
            desc = descriptor_from_json(tree_spec["set"])
            params = CubeParams(
                s=frac(tree_spec["s"]),
                c=frac(tree_spec.get("c", Fraction(3, 8))),
                C=frac(tree_spec.get("C", Fraction(9, 8))),
                max_level=int(tree_spec.get("depth", 8)),
            )
            tree = build_tree(desc, params)
        else:
            raise DomainError("tree kind must be 'coding' or 'cubes'")
        rule = data.get("rule", {"name": "uniform"})
        name = rule.get("name")
        if name == "uniform":
            return uniform_measure(tree)
        if name in ("pair_main", "pair_mirror", "pair_sum"):
            if not isinstance(tree, CodingTree):
                raise DomainError("the skewed pair lives on the coding tree")
            mu, nu = cantor_measure_pair(frac(rule["p"]), tree.depth)
            if name == "pair_main":
                return mu
            if name == "pair_mirror":
                return nu
            return sum_measures(mu, nu)
        raise DomainError(f"unknown weight rule {name!r}")
    raise DomainError(f"unknown measure kind {kind!r}")


def _tree_params(args):
    kwargs = {"s": frac(args.s), "max_level": args.depth}
    if args.c is not None:
        kwargs["c"] = frac(args.c)
    if args.C is not None:
        kwargs["C"] = frac(args.C)
    return CubeParams(**kwargs)


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("ASSOUAD_THREADS")
    return int(env) if env else 1


def _window_args(parser):
    parser.add_argument("--depth", type=int, default=None, help="deepest scale level")
    parser.add_argument("--window-s", type=str, default=None, help="scale grid ratio num/den")
    parser.add_argument("--ratio-floor", type=str, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dump-csv", type=str, default=None, help="write scanned chords as CSV")
    parser.add_argument("--out", type=str, default=None)


def cmd_set_dim(args):
    desc = descriptor_from_json(_load_json(args.set))
    kw = {}
    if args.ratio_floor:
        kw["ratio_floor"] = frac(args.ratio_floor)
    window = window_for_set(
        desc,
        depth=args.depth or 10,
        s=frac(args.window_s) if args.window_s else Fraction(1, 3),
        threads=_threads(args),
        **kw,
    )
    est = set_dimension(desc, args.kind, window, collect_dump=bool(args.dump_csv))
    if args.dump_csv:
        _write_dump(args.dump_csv, args.kind, est.dump_rows)
    report = {"command": "set-dim", "set": desc.to_json(), "estimate": est.report()}
    _emit(report, args.out)
    return 0


def _scale_of(meta):
    for key in ("rho", "r", "R"):
        if key in meta:
            return meta[key]
    return ""


def _write_dump(path, kind, rows):
    """Scanned chords as CSV: the coarse/fine scale pair, the quantity ratio
    across it, and the resulting log-ratio slope."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("kind,x,R,r,quantity,log_ratio_slope\n")
        for key, meta1, meta2, ratio, slope in rows:
            x = meta1.get("x", key)
            handle.write(f"{kind},{x},{_scale_of(meta1)},{_scale_of(meta2)},{ratio},{slope}\n")


def cmd_build_tree(args):
    desc = descriptor_from_json(_load_json(args.set))
    tree = build_tree(desc, _tree_params(args))
    tree.materialize()
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as handle:
            handle.write(dump_tree(tree))
    nodes = sum(1 for _ in tree.walk())
    report = {
        "command": "build-tree",
        "set": desc.to_json(),
        "params": {
            "s": frac_str(tree.params.s),
            "c": frac_str(tree.params.c),
            "C": frac_str(tree.params.C),
            "depth": tree.params.max_level,
        },
        "nodes": nodes,
        "hull_scale": frac_str(tree.scale),
    }
    _emit(report, args.out)
    return 0


def cmd_verify_tree(args):
    desc = descriptor_from_json(_load_json(args.set))
    tree = build_tree(desc, _tree_params(args))
    tree.materialize()
    rep = verify_properties(tree, check_membership=args.membership)
    report = {
        "command": "verify-tree",
        "set": desc.to_json(),
        "passed": rep.passed,
        "nodes_checked": rep.nodes_checked,
        "checks_run": rep.checks_run,
        "failures": [vars(f) for f in rep.failures[:10]],
    }
    _emit(report, args.out)
    return 0 if rep.passed else EXIT_PRECISION


def cmd_synth(args):
    desc = descriptor_from_json(_load_json(args.set))
    tree = build_tree(desc, _tree_params(args))
    eps = frac(args.epsilon) if args.epsilon else None
    if args.D == "inf":
        measure, manifest = synthesize_upper(
            tree,
            math.inf,
            epsilon=eps,
            dim_upper=args.dim_upper,
            ladder_spec=LadderSpec(rungs=args.rungs, min_rung=args.min_rung),
        )
    elif args.d is not None:
        measure, manifest = synthesize_lower_upper(
            tree,
            frac(args.d),
            frac(args.D),
            eps if eps is not None else Fraction(1, 20),
            dim_bounds=(args.dim_lower, args.dim_upper)
            if args.dim_lower is not None and args.dim_upper is not None
            else None,
        )
    else:
        measure, manifest = synthesize_upper(
            tree,
            frac(args.D),
            epsilon=eps,
            dim_upper=args.dim_upper,
            ladder_spec=LadderSpec(rungs=args.rungs, min_rung=args.min_rung),
        )
    report = {"command": "synth", "set": desc.to_json(), "manifest": manifest.to_json()}
    _emit(report, args.out)
    return 0


def cmd_measure_dim(args):
    measure = load_measure(_load_json(args.measure))
    kw = {}
    if args.ratio_floor:
        kw["ratio_floor"] = frac(args.ratio_floor)
    window = window_for_measure(measure, depth=args.depth, threads=_threads(args), **kw)
    est = measure_dimension(measure, args.kind, window, collect_dump=bool(args.dump_csv))
    if args.dump_csv:
        _write_dump(args.dump_csv, args.kind, est.dump_rows)
    report = {"command": "measure-dim", "estimate": est.report()}
    _emit(report, args.out)
    return 0


def cmd_classify(args):
    measure = load_measure(_load_json(args.measure))
    result = classify_tail_ratios(measure, n_min=args.n_min, n_max=args.n_max)
    report = {"command": "classify", "classification": result.report()}
    _emit(report, args.out)
    return 0


def cmd_accept(args):
    selected = None
    if args.criteria:
        selected = [int(tok) for tok in args.criteria.split(",")]
    report = acceptance.run_all(selected=selected, seed=args.seed)
    _emit(report, args.out)
    return 0 if report["all_passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="assouad",
        description="Prescribed-dimension measure synthesis and empirical "
        "Assouad dimension estimation on compact subsets of [0,1]",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("set-dim", help="dimension estimate for a set")
    p.add_argument("--set", required=True, help="set descriptor JSON file")
    p.add_argument("--kind", choices=["upper", "lower", "box"], default="upper")
    _window_args(p)
    p.set_defaults(fn=cmd_set_dim)

    for name, fn in (("build-tree", cmd_build_tree), ("verify-tree", cmd_verify_tree)):
        p = sub.add_parser(name)
        p.add_argument("--set", required=True)
        p.add_argument("--s", required=True, help="subdivision ratio num/den, below 1/3")
        p.add_argument("--c", default=None)
        p.add_argument("--C", default=None)
        p.add_argument("--depth", type=int, default=8)
        p.add_argument("--out", default=None)
        if name == "build-tree":
            p.add_argument("--dump", default=None, help="write the node dump here")
        else:
            p.add_argument(
                "--membership", choices=["spot", "full", "off"], default="spot"
            )
        p.set_defaults(fn=fn)

    p = sub.add_parser("synth", help="measure with prescribed dimensions")
    p.add_argument("--set", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--c", default=None)
    p.add_argument("--C", default=None)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--D", required=True, help="upper target (rational or 'inf')")
    p.add_argument("--d", default=None, help="lower target for the joint scheme")
    p.add_argument("--epsilon", default=None)
    p.add_argument("--dim-upper", type=float, default=None, dest="dim_upper")
    p.add_argument("--dim-lower", type=float, default=None, dest="dim_lower")
    p.add_argument("--rungs", type=int, default=1)
    p.add_argument("--min-rung", type=int, default=6, dest="min_rung")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("measure-dim", help="dimension estimate for a measure")
    p.add_argument("--measure", required=True, help="measure descriptor JSON file")
    p.add_argument("--kind", choices=["upper", "lower"], default="upper")
    _window_args(p)
    p.set_defaults(fn=cmd_measure_dim)

    p = sub.add_parser("classify", help="tail-ratio classification")
    p.add_argument("--measure", required=True)
    p.add_argument("--n-min", type=int, default=1, dest="n_min")
    p.add_argument("--n-max", type=int, default=24, dest="n_max")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--criteria", default=None, help="comma list, e.g. 1,2,9")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_accept)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (PrecisionError, CalibrationError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except InconclusiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except AssouadError as exc:  # pragma: no cover - catch-all for subclasses
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
