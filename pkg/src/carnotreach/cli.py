"""Command-line surface.

Subcommands: endpoint, pqr, member, atlas, simulate-adjoint,
second-order, dice, mc-verify.  Structured output is JSON on stdout,
bulk samples are CSV, meshes are OBJ.  Exit codes: 0 success, 1 domain
error (machine-readable JSON on stderr), 2 usage error.  Runs are fully
determined by flags and seeds; environment variables are not consulted.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import adjoint, attainability, boundary_atlas, probability, second_order, words
from .words import InvariantViolation, PqrPoint


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _triple(text: str) -> tuple[float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise InvariantViolation("triple", f"expected 3 comma-separated numbers, got {text!r}")
    return tuple(parts)


def _cmd_endpoint(args) -> int:
    w = words.word_from_dict(_read_json(args.word))
    g = words.endpoint(w)
    _emit({"x": list(g.x), "y": list(g.y)})
    return 0


def _cmd_pqr(args) -> int:
    w = words.word_from_dict(_read_json(args.word))
    point = words.pqr(w)
    _emit({"p": point.p, "q": point.q, "r": point.r})
    return 0


def _cmd_member(args) -> int:
    target = PqrPoint(args.p, args.q, args.r)
    result = attainability.fit(
        target, max_arcs=args.max_arcs, tol=args.tol, seed=args.seed, n_starts=args.starts
    )
    out = result.to_dict()
    out["max_arcs"] = args.max_arcs
    _emit(out)
    return 0


def _cmd_atlas(args) -> int:
    prober = boundary_atlas.make_prober(
        max_arcs=args.probe_max_arcs, n_starts=args.probe_starts, seed=args.seed
    )
    mesh = boundary_atlas.trim_and_mesh(
        args.resolution, prober, eps=args.eps, threads=args.threads
    )
    with open(args.out_obj, "w") as fh:
        fh.write(boundary_atlas.write_obj(mesh))
    with open(args.out_csv, "w") as fh:
        fh.write(boundary_atlas.strata_csv(args.resolution))
    _emit(
        {
            "vertices": len(mesh.vertices),
            "groups": {k: len(v) for k, v in mesh.groups.items()},
            "samples": len(mesh.samples),
            "prober_failures": len(mesh.failures),
            "obj": args.out_obj,
            "csv": args.out_csv,
        }
    )
    return 0


def _cmd_simulate_adjoint(args) -> int:
    a = adjoint.AdjointCovector.of(_triple(args.h), _triple(args.skew))
    a = adjoint.normalize(a)
    word, report = adjoint.synthesize(a, args.horizon)
    if args.out_csv:
        with open(args.out_csv, "w") as fh:
            fh.write(adjoint.switch_events_csv(a, args.horizon))
    _emit(
        {
            "word": words.word_to_dict(word),
            "regime": report.kind,
            "casimir": report.casimir,
            "K": report.K,
            "singular_letters": list(report.singular_letters),
        }
    )
    return 0


def _cmd_second_order(args) -> int:
    w = words.word_from_dict(_read_json(args.word))
    a = adjoint.AdjointCovector.of(_triple(args.h), _triple(args.skew))
    report = second_order.ag_test(w, a, check_consistency=not args.no_consistency_check)
    _emit(
        {
            "verdict": report.verdict,
            "W_dim": int(report.W_basis.shape[1]),
            "W_basis": report.W_basis.T.tolist(),
            "G_restricted": report.G_restricted.tolist(),
        }
    )
    return 0


def _cmd_dice(args) -> int:
    payload = _read_json(args.dice)
    try:
        dice = [probability.DiscreteDistribution.of(d) for d in payload]
    except TypeError as exc:
        raise InvariantViolation("dice-json", f"expected a list of three [value, mass] lists: {exc}")
    if len(dice) != 3:
        raise InvariantViolation("dice-json", f"expected exactly 3 distributions, got {len(dice)}")
    point = probability.dice_pqr(*dice)
    _emit({"p": point.p, "q": point.q, "r": point.r})
    return 0


def _cmd_mc_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    fit_kwargs = dict(max_arcs=args.max_arcs, tol=args.tol, n_starts=args.starts)

    # identity check: hidden words are recovered by the solver
    n_recovered = 0
    worst_roundtrip = 0.0
    for _ in range(args.n):
        w = words.random_word(int(rng.integers(3, args.max_arcs + 1)), int(rng.integers(2**31)))
        result = attainability.fit(words.pqr(w), seed=int(rng.integers(2**31)), **fit_kwargs)
        if result.status == "attained":
            n_recovered += 1
            worst_roundtrip = max(worst_roundtrip, result.residual)

    # containment check: dice points are attained
    dice_report = probability.random_dice_check(
        args.n, atoms_max=args.atoms_max, seed=args.seed, **fit_kwargs
    )
    if args.out_csv:
        with open(args.out_csv, "w") as fh:
            fh.write(dice_report.to_csv())
    _emit(
        {
            "n": args.n,
            "roundtrip_recovered": n_recovered,
            "roundtrip_worst_residual": worst_roundtrip,
            "dice_attained": dice_report.n_attained,
            "dice_worst_residual": dice_report.worst_residual,
            "dice_failures": dice_report.failures,
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carnotreach",
        description="Attainable set of the positive-control system on the rank-3 step-2 Carnot group.",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads (default sequential)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("endpoint", help="word JSON -> group element JSON")
    p.add_argument("word", help="path to word JSON, or - for stdin")
    p.set_defaults(func=_cmd_endpoint)

    p = sub.add_parser("pqr", help="word JSON -> section coordinates")
    p.add_argument("word", help="path to word JSON, or - for stdin")
    p.set_defaults(func=_cmd_pqr)

    p = sub.add_parser("member", help="is (p, q, r) attainable?")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--max-arcs", type=int, default=attainability.DEFAULT_MAX_ARCS)
    p.add_argument("--tol", type=float, default=attainability.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=attainability.DEFAULT_STARTS)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("atlas", help="trimmed boundary mesh (OBJ) + strata dump (CSV)")
    p.add_argument("--resolution", type=int, default=11)
    p.add_argument("--out-obj", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--probe-max-arcs", type=int, default=6)
    p.add_argument("--probe-starts", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_atlas)

    p = sub.add_parser("simulate-adjoint", help="covector -> synthesized word + switch CSV")
    p.add_argument("--h", required=True, help="h1,h2,h3")
    p.add_argument("--skew", required=True, help="h12,h13,h23")
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--out-csv")
    p.set_defaults(func=_cmd_simulate_adjoint)

    p = sub.add_parser("second-order", help="word + covector -> non-optimality report")
    p.add_argument("--word", required=True, help="path to word JSON, or - for stdin")
    p.add_argument("--h", required=True, help="h1,h2,h3")
    p.add_argument("--skew", required=True, help="h12,h13,h23")
    p.add_argument("--no-consistency-check", action="store_true")
    p.set_defaults(func=_cmd_second_order)

    p = sub.add_parser("dice", help="three distributions JSON -> (p, q, r)")
    p.add_argument("dice", help="path to JSON [[ [value, mass], ... ] x3], or - for stdin")
    p.set_defaults(func=_cmd_dice)

    p = sub.add_parser("mc-verify", help="Monte Carlo containment and identity checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--atoms-max", type=int, default=4)
    p.add_argument("--max-arcs", type=int, default=attainability.DEFAULT_MAX_ARCS)
    p.add_argument("--tol", type=float, default=attainability.DEFAULT_TOL)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--out-csv")
    p.set_defaults(func=_cmd_mc_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        json.dump({"error": exc.name, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
