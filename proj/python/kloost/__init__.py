"""Local generalized Kloosterman sums on GL(N+1) over Q_p."""

from ._kloost import (
    ArithmeticRangeError,
    BudgetExceeded,
    WeylElement,
    c_constant,
    classical_kloosterman,
    diagram_dot,
    evaluate_sum,
    hyper_kloosterman,
    index_set,
    inversion_identity_check,
    kloosterman_set_size,
    moduli_assignments,
    oracle_sum,
    scaling_identity_check,
    thm_bounds,
    trivial_bound,
    weil_bound,
)

__all__ = [
    "ArithmeticRangeError",
    "BudgetExceeded",
    "WeylElement",
    "c_constant",
    "classical_kloosterman",
    "diagram_dot",
    "evaluate_sum",
    "hyper_kloosterman",
    "index_set",
    "inversion_identity_check",
    "kloosterman_set_size",
    "moduli_assignments",
    "oracle_sum",
    "scaling_identity_check",
    "thm_bounds",
    "trivial_bound",
    "weil_bound",
]
