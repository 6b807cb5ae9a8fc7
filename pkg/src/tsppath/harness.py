"""Exact oracle, experiment driver, gap scans, and report plumbing."""
from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .combinat import walk_cost
from .gpath import Alg2Params, GPathError, run_algorithm2
from .hoogeveen import CertificateViolation, run_hoogeveen
from .instance import (GapFamilySpec, Instance, gen_gap_family,
                       gen_random_euclidean, gen_random_graphical,
                       to_document)
from .lpcore import LPError, solve_hk_circuit, solve_hk_path
from .params import ORACLE_CAP


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    opt_cost: float
    opt_path: tuple[int, ...]
    variant: str  # path | circuit


def exact_opt(inst: Instance, variant: str = "path",
              n_cap: int = ORACLE_CAP) -> OracleResult:
    """Exact optimum by bitmask dynamic programming; hard size cap.

    Path variant answers the minimum Hamiltonian s-t path; circuit variant
    the minimum Hamiltonian circuit (reported starting at vertex 0).
    """
    n_cap = min(n_cap, ORACLE_CAP)  # configurable downward only
    if inst.n > n_cap:
        raise OracleError(f"oracle capped at n={n_cap}, got n={inst.n}")
    cost = np.ascontiguousarray(inst.cost, dtype=float)
    if variant == "path":
        value, path = kernels.held_karp_path(cost, inst.s, inst.t)
    elif variant == "circuit":
        value, path = kernels.held_karp_circuit(cost)
    else:
        raise OracleError(f"unknown variant {variant!r}")
    return OracleResult(opt_cost=float(value), opt_path=tuple(path),
                        variant=variant)


def exhaustive_opt(inst: Instance, variant: str = "path") -> OracleResult:
    """Permutation-search reference oracle, for self-tests only (n <= 10)."""
    if inst.n > 10:
        raise OracleError("exhaustive search capped at n=10")
    if variant == "path":
        internal = inst.internal_vertices()
        best, best_order = float("inf"), None
        for perm in itertools.permutations(internal):
            order = [inst.s, *perm, inst.t]
            c = walk_cost(order, inst)
            if c < best:
                best, best_order = c, order
        return OracleResult(best, tuple(best_order), "path")
    rest = list(range(1, inst.n))
    best, best_order = float("inf"), None
    for perm in itertools.permutations(rest):
        order = [0, *perm, 0]
        c = walk_cost(order, inst)
        if c < best:
            best, best_order = c, order[:-1]
    return OracleResult(best, tuple(best_order), "circuit")


@dataclass
class ReportRow:
    instance_id: str
    n: int
    family: str
    lp_path: float | None = None
    lp_circuit: float | None = None
    opt: float | None = None
    hoogeveen_ratio: float | None = None
    alg2_case: str | None = None
    alg2_ratio: float | None = None
    seed: int | None = None
    params: str = ""
    error: str = ""


CSV_COLUMNS = ["instance_id", "n", "family", "lp_path", "lp_circuit", "opt",
               "hoogeveen_ratio", "alg2_case", "alg2_ratio", "seed", "params",
               "error"]


def instance_id(inst: Instance) -> str:
    blob = json.dumps(to_document(inst), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = asdict(row)
        for key, val in rec.items():
            if isinstance(val, float):
                rec[key] = f"{val:.12g}"
            elif val is None:
                rec[key] = ""
        writer.writerow(rec)
    return buf.getvalue()


def gap_scan(family: str, ks: list[int],
             oracle_cap: int = ORACLE_CAP) -> list[ReportRow]:
    """LP and exact values for one gap family across sizes; one row per k."""
    rows: list[ReportRow] = []
    for k in ks:
        inst = gen_gap_family(GapFamilySpec(family, k))
        row = ReportRow(instance_id=instance_id(inst), n=inst.n,
                        family=f"{family}[k={k}]", seed=None)
        lp_path = solve_hk_path(inst)
        lp_circuit = solve_hk_circuit(inst)
        row.lp_path = lp_path.value
        row.lp_circuit = lp_circuit.value
        if inst.n <= min(oracle_cap, ORACLE_CAP):
            variant = "circuit" if family == "circuit_fig1a" else "path"
            opt = exact_opt(inst, variant=variant)
            row.opt = opt.opt_cost
            base = lp_circuit.value if variant == "circuit" else lp_path.value
            row.alg2_ratio = None
            row.hoogeveen_ratio = None
            row.params = f"gap_ratio={opt.opt_cost / base:.12g}"
        rows.append(row)
    return rows


def scan_ratios(rows: list[ReportRow]) -> list[float]:
    """The opt/lp ratios recorded by gap_scan, in scan order."""
    out = []
    for row in rows:
        if row.params.startswith("gap_ratio="):
            out.append(float(row.params.split("=", 1)[1]))
    return out


@dataclass
class CorpusConfig:
    """Declarative corpus: generator specs plus shared parameters."""

    generators: list[dict] = field(default_factory=list)
    alg2: dict = field(default_factory=dict)
    oracle_cap: int = ORACLE_CAP
    workers: int = 4

    @staticmethod
    def from_json(text: str) -> "CorpusConfig":
        doc = json.loads(text)
        return CorpusConfig(generators=doc.get("generators", []),
                            alg2=doc.get("alg2", {}),
                            oracle_cap=doc.get("oracle_cap", ORACLE_CAP),
                            workers=doc.get("workers", 4))

    def manifest(self) -> dict:
        return {"generators": self.generators, "alg2": self.alg2,
                "oracle_cap": self.oracle_cap}


def _materialize(gen: dict) -> list[Instance]:
    kind = gen["kind"]
    if kind == "random_graphical":
        count = gen.get("count", 1)
        base_seed = gen.get("seed", 0)
        return [gen_random_graphical(gen["n"], gen.get("p", 0.35),
                                     base_seed + i)
                for i in range(count)]
    if kind == "random_euclidean":
        count = gen.get("count", 1)
        base_seed = gen.get("seed", 0)
        return [gen_random_euclidean(gen["n"], base_seed + i)
                for i in range(count)]
    if kind == "gap_family":
        return [gen_gap_family(GapFamilySpec(gen["family"], k))
                for k in gen["ks"]]
    raise ValueError(f"unknown generator kind {kind!r}")


def _evaluate_row(inst: Instance, config: CorpusConfig) -> tuple[ReportRow, list[str]]:
    row = ReportRow(instance_id=instance_id(inst), n=inst.n,
                    family=inst.label or "adhoc")
    violations: list[str] = []
    try:
        lp = solve_hk_path(inst)
        row.lp_path = lp.value
        row.lp_circuit = solve_hk_circuit(inst).value
        _, cert = run_hoogeveen(inst, lp=lp)
        row.hoogeveen_ratio = cert.ratio
        params = Alg2Params(**config.alg2) if config.alg2 else Alg2Params()
        row.seed = params.seed
        row.params = json.dumps(config.alg2, sort_keys=True)
        _, trace = run_algorithm2(inst, params=params, lp=lp)
        row.alg2_case = trace.case_taken
        row.alg2_ratio = trace.ratio
        if inst.n <= min(config.oracle_cap, ORACLE_CAP):
            opt = exact_opt(inst)
            row.opt = opt.opt_cost
            scale = max(1.0, abs(lp.value))
            if not (lp.value <= opt.opt_cost + 1e-7 * scale):
                violations.append(f"{row.instance_id}: lp > opt")
            if not (opt.opt_cost <= cert.alg_cost + 1e-7 * scale):
                violations.append(f"{row.instance_id}: opt > hoogeveen cost")
    except (CertificateViolation, GPathError, LPError, OracleError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        violations.append(f"{row.instance_id}: {type(exc).__name__}")
    return row, violations


def run_corpus(config: CorpusConfig) -> tuple[list[ReportRow], list[str]]:
    """Evaluate every configured instance; deterministic, order-preserving.

    Rows are computed concurrently but merged in configuration order, and
    every sub-module error lands in its row instead of killing the batch.
    """
    instances: list[Instance] = []
    for gen in config.generators:
        instances.extend(_materialize(gen))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda i: _evaluate_row(i, config), instances))
    else:
        results = [_evaluate_row(inst, config) for inst in instances]
    rows = [r for r, _ in results]
    violations = [v for _, vs in results for v in vs]
    return rows, violations
