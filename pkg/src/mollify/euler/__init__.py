"""Exact local-factor algebra: polynomials, Hecke recursions and identity checks."""

from .local import (AT_Q, RAMIFIED, SPLIT, PrimeClass, hecke_lambda_power, k_local,
                    l_one, l_tilde, l_zero, nu_g, phi_local, prime_class, rankin_local,
                    s_rational, s_series, sym2_local)
from .poly import Poly, RationalFunction
from .verify import (VerificationReport, q_local_defect, verify_aaa, verify_all,
                     verify_bbb, verify_local_unit)

__all__ = [
    "Poly", "RationalFunction", "PrimeClass", "SPLIT", "RAMIFIED", "AT_Q", "prime_class",
    "hecke_lambda_power", "s_series", "s_rational", "nu_g", "phi_local", "k_local",
    "l_zero", "l_one", "l_tilde", "rankin_local", "sym2_local",
    "VerificationReport", "verify_aaa", "verify_bbb", "verify_local_unit",
    "q_local_defect", "verify_all",
]
