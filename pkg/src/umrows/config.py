"""Budget and tolerance knobs.

Every brute-force verification bound and every escalate-and-verify loop in
the package reads its cap from a `Budgets` value so that runs are
reproducible and certificates can record the bounds they were checked at.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budgets:
    # lambda-degree bound for exhaustive membership/closure verifications
    degree_bound: int = 12
    # cap on the k-escalation when building admissible configurations
    admissible_k_cap: int = 64
    # cap on tau-weight escalation rounds in the alignment step
    weight_rounds: int = 24
    # Groebner caps
    gb_max_basis: int = 2000
    gb_max_pairs: int = 200000
    gb_max_degree: int = 120
    # polynomial-ring reducer caps
    reduce_beam_width: int = 10
    reduce_beam_depth: int = 4
    reduce_retries: int = 12
    # congruence-lifting depth for Karoubi factorisations
    karoubi_depth: int = 400
    # generic escalation cap (ansatz sizes, enumeration windows)
    escalation_cap: int = 40
    # complexity search is exponential in |Hilb|; refuse beyond this
    complexity_hilb_cap: int = 12
    # hard cap on lattice points enumerated in one sweep
    enumeration_cap: int = 2_000_000

    def with_degree(self, bound: int) -> "Budgets":
        return replace(self, degree_bound=bound)


def default_budgets() -> Budgets:
    """Default budget profile; UMROWS_DEGREE_BOUND overrides the degree bound."""
    env = os.environ.get("UMROWS_DEGREE_BOUND")
    b = Budgets()
    if env:
        b = b.with_degree(int(env))
    return b
