"""Command-line interface: LP solves, pipelines, oracle, scans, sampling."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, maxent
from .gpath import Alg2Params, run_algorithm2
from .hoogeveen import run_hoogeveen
from .instance import load_instance
from .lpcore import lift_to_circuit, solve_hk_circuit, solve_hk_path
from .params import ANALYSIS, EFFECTIVE, ORACLE_CAP


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="instance document file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma-l", type=float, default=ANALYSIS.sigma_l)
    p.add_argument("--sigma-u", type=float, default=ANALYSIS.sigma_u)
    p.add_argument("--gamma", type=float, default=ANALYSIS.gamma)
    p.add_argument("--eps2-prime", type=float, default=ANALYSIS.eps2_prime)
    p.add_argument("--rho-eff", type=float, default=EFFECTIVE.rho_eff)
    p.add_argument("--delta-eff", type=float, default=EFFECTIVE.delta_eff)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "doc"], default="doc")


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _need_instance(args: argparse.Namespace):
    if not args.instance:
        raise SystemExit("--instance FILE is required for this command")
    return load_instance(args.instance)


def _alg2_params(args: argparse.Namespace) -> Alg2Params:
    return Alg2Params(sigma_l=args.sigma_l, sigma_u=args.sigma_u,
                      gamma=args.gamma, eps2_prime=args.eps2_prime,
                      seed=args.seed)


def cmd_solve_lp(args: argparse.Namespace) -> int:
    inst = _need_instance(args)
    sol = solve_hk_path(inst) if args.variant == "path" else solve_hk_circuit(inst)
    _emit(args, json.dumps(sol.to_document(), indent=1))
    return 0


def cmd_hoogeveen(args: argparse.Namespace) -> int:
    inst = _need_instance(args)
    path, cert = run_hoogeveen(inst)
    doc = {"path": path, "certificate": cert.__dict__}
    _emit(args, json.dumps(doc, indent=1))
    return 0


def cmd_alg2(args: argparse.Namespace) -> int:
    inst = _need_instance(args)
    params = _alg2_params(args)
    path, trace = run_algorithm2(inst, params=params)
    doc = {"path": path, "trace": {
        "case_taken": trace.case_taken, "alpha": trace.alpha,
        "lp_value": trace.lp_value, "tree_cost": trace.tree_cost,
        "tjoin_cost": trace.tjoin_cost, "st_toggled": trace.st_toggled,
        "final_cost": trace.final_cost, "ratio": trace.ratio,
        "graphical": trace.graphical,
        "nearly_integral_count": trace.nearly_integral_count,
        "params": params.__dict__,
    }}
    _emit(args, json.dumps(doc, indent=1))
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = _need_instance(args)
    res = harness.exact_opt(inst, variant=args.variant)
    _emit(args, json.dumps({"opt_cost": res.opt_cost,
                            "opt_path": list(res.opt_path),
                            "variant": res.variant}, indent=1))
    return 0


def cmd_gap_scan(args: argparse.Namespace) -> int:
    ks = list(range(args.k_min, args.k_max + 1))
    rows = harness.gap_scan(args.family, ks, oracle_cap=args.oracle_cap)
    if args.format == "csv":
        _emit(args, harness.rows_to_csv(rows))
    else:
        _emit(args, json.dumps([row.__dict__ for row in rows], indent=1))
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = harness.CorpusConfig.from_json(fh.read())
    rows, violations = harness.run_corpus(config)
    if args.format == "csv":
        _emit(args, harness.rows_to_csv(rows))
    else:
        _emit(args, json.dumps({
            "manifest": config.manifest(),
            "rows": [row.__dict__ for row in rows],
            "violations": violations,
        }, indent=1))
    if violations:
        sys.stderr.write("\n".join(violations) + "\n")
        return 1
    return 0


def cmd_sample_trees(args: argparse.Namespace) -> int:
    inst = _need_instance(args)
    lp = solve_hk_path(inst)
    circuit = lift_to_circuit(lp, inst)
    target = maxent.scaled_circuit_target(circuit)
    model = maxent.fit_lambda(target, inst.n)
    report = maxent.good_edge_report(circuit.x, model, samples=args.samples,
                                     rho_eff=args.rho_eff,
                                     delta_eff=args.delta_eff, seed=args.seed)
    doc = {
        "samples": report.sample_count,
        "seed": report.seed,
        "rho_eff": report.rho_eff,
        "delta_eff": args.delta_eff,
        "rho_paper": ANALYSIS.rho,
        "delta_paper": ANALYSIS.delta,
        "even_probability": {f"{u},{v}": p for (u, v), p in
                             sorted(report.even_probability.items())},
        "good_edges": sorted(list(e) for e in report.good_edges),
        "mass_of_good": report.mass_of_good,
    }
    _emit(args, json.dumps(doc, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsppath",
        description="s-t path TSP laboratory: LP relaxations, Hoogeveen "
                    "pipeline, max-entropy trees, exact oracle")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-lp", help="solve a Held-Karp relaxation")
    p.add_argument("--variant", choices=["path", "circuit"], default="path")
    _add_common(p)
    p.set_defaults(func=cmd_solve_lp)

    p = sub.add_parser("hoogeveen", help="run the tree+matching pipeline")
    _add_common(p)
    p.set_defaults(func=cmd_hoogeveen)

    p = sub.add_parser("alg2", help="run the combined case-dispatch algorithm")
    _add_common(p)
    p.set_defaults(func=cmd_alg2)

    p = sub.add_parser("oracle", help="exact optimum by dynamic programming")
    p.add_argument("--variant", choices=["path", "circuit"], default="path")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gap-scan", help="scan a gap family against the oracle")
    p.add_argument("--family", choices=["circuit_fig1a", "path_fig1b"],
                   required=True)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--oracle-cap", type=int, default=ORACLE_CAP)
    _add_common(p)
    p.set_defaults(func=cmd_gap_scan)

    p = sub.add_parser("corpus", help="run a configured instance corpus")
    p.add_argument("--config", required=True, help="corpus config JSON")
    _add_common(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("sample-trees",
                       help="fit the max-entropy model and report good edges")
    _add_common(p)
    p.set_defaults(func=cmd_sample_trees)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
