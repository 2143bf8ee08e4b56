"""
mersenne-divisibility - decide and certify divisibility of generalized Mersenne numbers.

M_d(a^k) divides M_d(a^m) exactly when k | m and gcd(m/k, d) = 1. This package
decides the question by the criterion and by big-integer and polynomial
oracles, produces checkable certificates, and exposes the number-theoretic
tools behind the argument (orders, valuations, primitive prime divisors).
"""

__version__ = "0.1.0"
__description__ = "Divisibility criterion, oracles and certificates for generalized Mersenne numbers"

from .models import DivInstance, Certificate, Factorization, ZsigmondyResult, SweepRecord
from .mersenne import divides_criterion, divides_oracle, explain, certificate_verify
from .number_theory import Factorizer, multiplicative_order, zsigmondy_witness
from .polyring import IntPoly, poly_criterion, poly_exact_div
from .sweep import SweepConfig, run_sweep
from .reporter import Reporter
from .config import Configuration

__all__ = [
    "DivInstance",
    "Certificate",
    "Factorization",
    "ZsigmondyResult",
    "SweepRecord",
    "divides_criterion",
    "divides_oracle",
    "explain",
    "certificate_verify",
    "Factorizer",
    "multiplicative_order",
    "zsigmondy_witness",
    "IntPoly",
    "poly_criterion",
    "poly_exact_div",
    "SweepConfig",
    "run_sweep",
    "Reporter",
    "Configuration",
]
