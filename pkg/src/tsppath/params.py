"""Default constants and solver configuration.

The analysis constants are kept verbatim as defaults; the Monte Carlo
machinery cannot resolve thresholds like rho ~ 1e-24, so experiments use
the separate effective values and record both.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AnalysisConstants:
    """Constants of the structure analysis, configuration-overridable."""

    eps1: float = 1.875e-12
    eps2: float = 5e-2
    gamma: float = 1e-7
    delta: float = 6.25e-16
    rho: float = 1.5e-24
    eps2_prime: float = 6e-2
    nu: float = 0.2
    k: int = 2
    sigma_l: float = 7.8e-52
    sigma_u: float = 3.9e-52
    c_a1: float = 4e-2
    c_a2: float = 3.9e-52
    epsilon: float = 3.9e-52


ANALYSIS = AnalysisConstants()


@dataclass(frozen=True)
class EffectiveParams:
    """Monte-Carlo-resolvable stand-ins for rho and delta."""

    rho_eff: float = 0.05
    delta_eff: float = 0.1


EFFECTIVE = EffectiveParams()


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and caps for the LP cutting-plane solver."""

    constraint_tol: float = 1e-7
    objective_tol: float = 1e-7
    cuts_per_round: int = 3
    round_cap_factor: int = 10  # round cap = factor * n^2
    pivot_tol: float = 1e-10
    degeneracy_window: int = 40  # stalled pivots before switching to Bland's rule


DEFAULT_SOLVER = SolverConfig()

MATCHING_CAP = 24  # hard cap on |T| for the subset-DP matching
ORACLE_CAP = 20  # hard cap on n for the exact Hamiltonian-path oracle
CUT_ENUM_CAP = 20  # hard cap on n for exhaustive bipartition enumeration
TJOIN_DUAL_CAP = 22  # hard cap on n for the T-join dual feasibility check
