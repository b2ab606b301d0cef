"""Command-line interface.

Every subcommand prints one JSON document (``"schema": 1``) on stdout.
Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 analysis error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import hyperspace as hs
from .errors import AnalysisError, DataError, HypothesisViolated, PrefixExhausted
from .hausdorff import hausdorff_distance, hausdorff_distance_oracle
from .ifs import attractor, load_ifs
from .io import lattice_candidates, load_cloud, load_sequence, save_cloud
from .metric import MetricSpec, PointSet

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ANALYSIS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def emit(command, payload, out=None):
    doc = {"schema": SCHEMA, "command": command}
    doc.update(payload)
    text = json.dumps(_clean(doc), indent=2, allow_nan=False)
    (out or sys.stdout).write(text + "\n")


def _metric(args) -> MetricSpec:
    try:
        return MetricSpec.from_name(args.metric)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _point(text):
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated point: {text!r}") from None


def _candidates(args, seq):
    parts = []
    if args.candidates:
        parts.append(load_cloud(args.candidates, seq.dim).points)
    if args.grid:
        parts.append(lattice_candidates(seq.all_points(), args.grid).points)
    if not parts:
        return None
    return PointSet(np.concatenate(parts))


def _trace_rows(rows):
    return [{"n": r.n, "u_limit_to_set": r.u_limit_to_set,
             "u_set_to_limit": r.u_set_to_limit, "rho_h": r.rho_h} for r in rows]


# -- subcommands ---------------------------------------------------------------


def cmd_dist(args):
    metric = _metric(args)
    A, B = load_cloud(args.a), load_cloud(args.b)
    fn = hausdorff_distance_oracle if args.oracle else hausdorff_distance
    bd = fn(A, B, metric)
    emit("dist", {"metric": metric.kind, "oracle": args.oracle, "sizes": [len(A), len(B)],
                  **bd.to_dict()})


def cmd_cauchy(args):
    seq = load_sequence(args.manifest, _metric(args))
    report = hs.is_cauchy(seq, args.epsilon, args.min_margin)
    emit("cauchy", {"n_sets": len(seq), **report.to_dict()})


def cmd_limit(args):
    seq = load_sequence(args.manifest, _metric(args))
    lim = hs.limit_set(seq, args.epsilon, _candidates(args, seq), tail_fraction=args.tail_fraction)
    emit("limit", {"n_sets": len(seq), "limit": lim.to_dict(),
                   "trace": _trace_rows(hs.convergence_trace(seq, lim))})


def _cmd_kuratowski(name, fn):
    def run(args):
        seq = load_sequence(args.manifest, _metric(args))
        pts = fn(seq, args.epsilon, _candidates(args, seq), tail_fraction=args.tail_fraction)
        emit(name, {"n_sets": len(seq), "epsilon": args.epsilon,
                    "n_check": hs.check_count(seq, args.tail_fraction),
                    "count": len(pts), "points": pts.points.tolist()})
    return run


def cmd_lemma(args):
    seq = load_sequence(args.manifest, _metric(args))
    x = args.x
    if x.size != seq.dim:
        raise DataError(f"--x has {x.size} coordinates, sequence dimension is {seq.dim}")
    lim_eps = args.limit_epsilon
    if lim_eps is None:
        lim_eps = hs.tail_resolution(seq, args.tail_fraction)
    lim = hs.limit_set(seq, lim_eps, _candidates(args, seq), tail_fraction=args.tail_fraction)
    verdict = hs.main_lemma_check(seq, x, args.epsilon, args.m, lim, args.tol)
    payload = {"n_sets": len(seq), "verdict": verdict.to_dict(), "limit": lim.to_dict()}
    if args.chain or args.b is not None:
        chain = hs.witness_chain(seq, x, args.epsilon, args.m, args.b or hs.DEFAULT_B)
        payload["chain"] = chain.to_dict()
    emit("lemma", payload)


def cmd_agree(args):
    seq = load_sequence(args.manifest, _metric(args))
    rec = hs.limit_characterization_agreement(seq, args.epsilon, _candidates(args, seq),
                                              tail_fraction=args.tail_fraction)
    emit("agree", {"n_sets": len(seq), **rec.to_dict()})


def cmd_ifs(args):
    metric = _metric(args)
    system = load_ifs(args.system)
    seed = load_cloud(args.seed, system.dim)
    if seed.dim != system.dim:
        raise DataError(f"seed has dimension {seed.dim}, system has {system.dim}")
    if args.budget < len(seed):
        raise UsageError(f"--budget {args.budget} is smaller than the seed ({len(seed)} points)")
    trace = attractor(system, seed, args.iters, args.budget, metric)
    if args.out:
        save_cloud(trace.final, args.out)
    if args.trace:
        cols = list(trace.iterates[0]._fields) if trace.iterates else ["step"]
        lines = [",".join(cols)]
        lines += [",".join(repr(v) for v in row) for row in trace.iterates]
        Path(args.trace).write_text("\n".join(lines) + "\n")
    emit("ifs", {
        "dim": system.dim,
        "contraction": trace.contraction,
        "initial_gap": trace.initial_gap,
        "iters": args.iters,
        "final_size": len(trace.final),
        "steps": trace.rows(),
    })


# -- parser ----------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="hausdorff-hyperspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--metric", default="euclidean", help="euclidean | manhattan | chebyshev")
        return sp

    def seq_cmd(name, help_):
        sp = common(sub.add_parser(name, help=help_))
        sp.add_argument("manifest")
        sp.add_argument("--epsilon", type=_positive, required=True)
        return sp

    def with_candidates(sp):
        sp.add_argument("--grid", type=_positive, help="lattice step for generated candidates")
        sp.add_argument("--candidates", help="CSV of extra candidate points")
        sp.add_argument("--tail-fraction", type=float, default=hs.TAIL_FRACTION)
        return sp

    sp = common(sub.add_parser("dist", help="directed and Hausdorff distances between two clouds"))
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--oracle", action="store_true", help="use the brute-force reference path")
    sp.set_defaults(func=cmd_dist)

    sp = seq_cmd("cauchy", "Cauchy modulus of a set sequence")
    sp.add_argument("--min-margin", type=int, default=hs.MIN_MARGIN)
    sp.set_defaults(func=cmd_cauchy)

    with_candidates(seq_cmd("limit", "limit set and convergence trace")).set_defaults(func=cmd_limit)
    with_candidates(seq_cmd("liminf", "lower limit")).set_defaults(
        func=_cmd_kuratowski("liminf", hs.liminf_set))
    with_candidates(seq_cmd("limsup", "upper limit")).set_defaults(
        func=_cmd_kuratowski("limsup", hs.limsup_set))
    with_candidates(seq_cmd("agree", "compare the three limit characterizations")).set_defaults(
        func=cmd_agree)

    sp = with_candidates(seq_cmd("lemma", "check the neighbourhood bound for a point"))
    sp.add_argument("--x", type=_point, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--b", type=float, help="chain ratio > 1; implies --chain")
    sp.add_argument("--chain", action="store_true", help="also build the witness chain")
    sp.add_argument("--limit-epsilon", type=float,
                    help="resolution of the limit set (default: twice the inspected tail diameter)")
    sp.add_argument("--tol", type=float, default=hs.DEFAULT_TOL)
    sp.set_defaults(func=cmd_lemma)

    sp = common(sub.add_parser("ifs", help="iterate a system towards its attractor"))
    sp.add_argument("system", help="IFS JSON file, or builtin:cantor|sierpinski|fern")
    sp.add_argument("--seed", required=True)
    sp.add_argument("--iters", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--trace")
    sp.set_defaults(func=cmd_ifs)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisViolated, PrefixExhausted) as exc:
        print(f"analysis error (index {exc.index}): {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except AnalysisError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
