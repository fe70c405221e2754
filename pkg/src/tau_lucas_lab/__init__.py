"""Ramanujan tau, Lucas pairs and primitive divisors, heights and radical bounds."""

__version__ = "0.1.0"

from .arith import (
    FactorBudget,
    Factorization,
    OmegaBound,
    divisors,
    factorize,
    is_prime,
    omega,
    p_adic_valuation,
    primorial,
    radical,
)
from .errors import TauLabError
from .lucas import (
    LucasPair,
    certified_omega_lower_bound,
    lucas_u,
    normalize_pair,
    primitive_part,
    verify_certificate,
)
from .quadratic import (
    QuadraticNumber,
    QuadraticPair,
    frey_bound_tau,
    gamma_value,
    height_of_normalized_root,
    height_quadratic,
    log_norm_difference,
    norm_lemma_ratio,
)
from .tau import HeckeEigenData, TauTable, build_tau_table, load_table, store_table, tau

__all__ = [
    "FactorBudget",
    "Factorization",
    "HeckeEigenData",
    "LucasPair",
    "OmegaBound",
    "QuadraticNumber",
    "QuadraticPair",
    "TauLabError",
    "TauTable",
    "build_tau_table",
    "certified_omega_lower_bound",
    "divisors",
    "factorize",
    "frey_bound_tau",
    "gamma_value",
    "height_of_normalized_root",
    "height_quadratic",
    "is_prime",
    "load_table",
    "log_norm_difference",
    "lucas_u",
    "norm_lemma_ratio",
    "normalize_pair",
    "omega",
    "p_adic_valuation",
    "primitive_part",
    "primorial",
    "radical",
    "store_table",
    "tau",
    "verify_certificate",
]
