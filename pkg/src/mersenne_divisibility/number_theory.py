"""
Integer number-theory toolkit.

Multiplicative orders, p-adic valuations and the lifting-the-exponent formulas,
factorization (trial division followed by a seeded Pollard-Brent splitter),
cyclotomic values, primitive prime divisors, and the cofactor-residue and
valuation-imbalance reports behind the non-divisibility arguments.
"""

import logging
import random
from dataclasses import dataclass
from math import gcd, lcm
from typing import Dict, Optional, Tuple

from sympy import divisors, isprime, perfect_power, primerange

from .config import (
    DEFAULT_MAX_BITS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TRIAL_BOUND,
    FactorSettings,
)
from .exceptions import (
    GuardExceededError,
    InvalidInstanceError,
    PreconditionError,
    UnfactoredCofactorError,
)
from .models import (
    CofactorReport,
    Factorization,
    ImbalanceCase,
    ImbalanceReport,
    ZsigmondyException,
    ZsigmondyResult,
)


logger = logging.getLogger(__name__)


def ensure_bits(required_bits: int, max_bits: int, what: str = "value") -> None:
    """Raise GuardExceededError when ``required_bits`` exceeds ``max_bits``."""
    if required_bits > max_bits:
        raise GuardExceededError(required_bits, max_bits, what)


def ceil_log2(x: int) -> int:
    """⌈log₂ x⌉ for x >= 1, the per-exponent bit count of the size guards."""
    return (x - 1).bit_length()


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def valuation(p: int, n: int) -> int:
    """Largest e with p^e | n."""
    if p < 2:
        raise PreconditionError(f"valuation needs a prime p >= 2, got {p}")
    if n < 1:
        raise PreconditionError(f"valuation needs n >= 1, got {n}")
    if p == 2:
        return (n & -n).bit_length() - 1
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass
class _Effort:
    """Iteration budget shared by all splitting attempts of one factorization."""
    remaining: int
    limit: int

    def spend(self, steps: int, cofactor: int) -> None:
        self.remaining -= steps
        if self.remaining < 0:
            raise UnfactoredCofactorError(cofactor, self.limit)


class Factorizer:
    """Complete prime factorization with a bounded, reproducible effort."""

    def __init__(
        self,
        trial_bound: int = DEFAULT_TRIAL_BOUND,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        seed: int = 0,
        max_bits: int = DEFAULT_MAX_BITS,
    ):
        """Initialize the factorizer."""
        if trial_bound < 2:
            raise InvalidInstanceError("trial_bound must be >= 2")
        self.trial_bound = trial_bound
        self.max_iterations = max_iterations
        self.seed = seed
        self.max_bits = max_bits

    def factorize(self, n: int) -> Factorization:
        """Factor ``n >= 1`` completely."""
        if n < 1:
            raise PreconditionError(f"factorize needs n >= 1, got {n}")
        ensure_bits(n.bit_length(), self.max_bits, what="factorization input")

        found: Dict[int, int] = {}
        remaining = self._trial_divide(n, found)
        if remaining > 1:
            # A fresh generator per call keeps results independent of call history.
            rng = random.Random(self.seed)
            effort = _Effort(self.max_iterations, self.max_iterations)
            self._split(remaining, found, rng, effort)

        return Factorization.from_mapping(found)

    def _trial_divide(self, n: int, found: Dict[int, int]) -> int:
        for p in primerange(2, self.trial_bound + 1):
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                found[p] = e
        return n

    def _split(self, n: int, found: Dict[int, int], rng: random.Random, effort: _Effort) -> None:
        stack = [n]
        while stack:
            c = stack.pop()
            if c == 1:
                continue
            if isprime(c):
                found[c] = found.get(c, 0) + 1
                continue
            power = perfect_power(c)
            if power:
                base, exponent = power
                stack.extend([base] * exponent)
                continue
            f = self._brent(c, rng, effort)
            logger.debug(f"split {c.bit_length()}-bit cofactor into {f} * ...")
            stack.extend([f, c // f])

    def _brent(self, n: int, rng: random.Random, effort: _Effort) -> int:
        """Return a nontrivial factor of the odd composite ``n``."""
        if n % 2 == 0:
            return 2
        batch = 128
        while True:
            y = rng.randrange(1, n)
            c = rng.randrange(1, n)
            g = r = q = 1
            x = ys = y
            while g == 1:
                x = y
                for _ in range(r):
                    y = (y * y + c) % n
                effort.spend(r, n)
                k = 0
                while k < r and g == 1:
                    ys = y
                    steps = min(batch, r - k)
                    for _ in range(steps):
                        y = (y * y + c) % n
                        q = q * abs(x - y) % n
                    effort.spend(steps, n)
                    g = gcd(q, n)
                    k += batch
                r *= 2
            if g == n:
                # Batched product overshot; replay one step at a time.
                g = 1
                while g == 1:
                    ys = (ys * ys + c) % n
                    g = gcd(abs(x - ys), n)
                    effort.spend(1, n)
            if 1 < g < n:
                return g
            logger.debug("rho cycle closed without a factor, reseeding")


def create_default_factorizer(
    settings: Optional[FactorSettings] = None,
    max_bits: int = DEFAULT_MAX_BITS,
) -> Factorizer:
    """Create a factorizer from configuration settings."""
    settings = settings or FactorSettings()
    return Factorizer(
        trial_bound=settings.trial_bound,
        max_iterations=settings.max_iterations,
        seed=settings.seed,
        max_bits=max_bits,
    )


def factorize(n: int, factorizer: Optional[Factorizer] = None) -> Factorization:
    """Factor ``n`` with the given (or a default) factorizer."""
    return (factorizer or Factorizer()).factorize(n)


def carmichael_lambda(n: int, factorizer: Optional[Factorizer] = None) -> int:
    """Exponent of the unit group modulo ``n``."""
    if n < 1:
        raise PreconditionError(f"carmichael_lambda needs n >= 1, got {n}")
    result = 1
    for p, e in factorize(n, factorizer):
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        result = lcm(result, part)
    return result


def multiplicative_order(
    a: int,
    modulus: int,
    multiple: Optional[int] = None,
    factorizer: Optional[Factorizer] = None,
) -> int:
    """Least g >= 1 with a^g ≡ 1 (mod modulus).

    The search descends from ``multiple``, a known multiple of the order
    (for Mersenne moduli M_d(a^k) pass kd); without it the Carmichael
    exponent of the modulus is used.
    """
    if modulus < 2:
        raise PreconditionError(f"modulus must be >= 2, got {modulus}")
    if gcd(a, modulus) != 1:
        raise PreconditionError(f"{a} and {modulus} are not coprime")

    a %= modulus
    if a == 1:
        return 1

    if multiple is None:
        multiple = carmichael_lambda(modulus, factorizer)
    elif multiple < 1 or pow(a, multiple, modulus) != 1:
        raise PreconditionError(f"{multiple} is not a multiple of the order of {a} mod {modulus}")

    order = multiple
    for p, e in factorize(multiple, factorizer):
        for _ in range(e):
            if pow(a, order // p, modulus) != 1:
                break
            order //= p
    return order


def lte_nu_odd(p: int, x: int, n: int) -> int:
    """ν_p(x^n - 1) = ν_p(x - 1) + ν_p(n) for an odd prime p dividing x - 1."""
    if p < 3 or not isprime(p):
        raise PreconditionError(f"p must be an odd prime, got {p}")
    if x < 2 or (x - 1) % p != 0:
        raise PreconditionError(f"p={p} must divide x - 1 = {x - 1}")
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    return valuation(p, x - 1) + valuation(p, n)


def lte_nu_two(x: int, n: int) -> int:
    """ν_2(x^n - 1) = ν_2(x^2 - 1) - 1 + ν_2(n) for odd x and even n."""
    if x < 3 or x % 2 == 0:
        raise PreconditionError(f"x must be odd and >= 3, got {x}")
    if n < 2 or n % 2 != 0:
        raise PreconditionError(f"n must be even and >= 2, got {n}")
    return valuation(2, x * x - 1) - 1 + valuation(2, n)


def cyclotomic_value(n: int, a: int, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Φ_n(a), by exact division of a^n - 1 by the lower cyclotomic values."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if a < 2:
        raise PreconditionError(f"a must be >= 2, got {a}")
    ensure_bits(n * ceil_log2(a), max_bits, what=f"{a}^{n} - 1")

    values: Dict[int, int] = {}
    for e in divisors(n):
        value = a ** e - 1
        for f in divisors(e)[:-1]:
            value, rest = divmod(value, values[f])
            if rest:
                raise ArithmeticError(f"inexact cyclotomic division at n={e}, a={a}")
        values[e] = value
    return values[n]


def zsigmondy_exception(a: int, n: int) -> Optional[ZsigmondyException]:
    """The classical exception covering (a, n), if any."""
    if a == 2 and n == 1:
        return ZsigmondyException.N_EQUALS_1_BASE_2
    if n == 2 and is_power_of_two(a + 1):
        return ZsigmondyException.N_EQUALS_2_BASE_PLUS_ONE_POWER_OF_TWO
    if a == 2 and n == 6:
        return ZsigmondyException.BASE_2_N_6
    return None


def zsigmondy_witness(
    a: int,
    n: int,
    factorizer: Optional[Factorizer] = None,
    max_bits: int = DEFAULT_MAX_BITS,
) -> ZsigmondyResult:
    """Smallest prime p | a^n - 1 whose multiplicative order of a is exactly n."""
    if a < 2 or n < 1:
        raise PreconditionError(f"need a >= 2 and n >= 1, got a={a}, n={n}")

    reason = zsigmondy_exception(a, n)
    if reason is not None:
        return ZsigmondyResult(a=a, n=n, reason=reason)

    # Primitive primes of a^n - 1 all divide Φ_n(a).
    value = cyclotomic_value(n, a, max_bits=max_bits)
    factorizer = factorizer or Factorizer(max_bits=max_bits)
    for p in factorize(value, factorizer).primes():
        if multiplicative_order(a, p, multiple=n, factorizer=factorizer) == n:
            logger.debug(f"primitive prime of {a}^{n} - 1: {p}")
            return ZsigmondyResult(a=a, n=n, prime=p)

    raise ArithmeticError(f"no primitive prime divisor of {a}^{n} - 1 found")


def cofactor_residues(
    b: int, n: int, d: int, max_bits: int = DEFAULT_MAX_BITS
) -> CofactorReport:
    """Residues of (b^{nd}-1)/(b^n-1) and (b^{nd}-1)/(b^d-1) modulo (b^g-1)/(b-1), g = gcd(n, d)."""
    if b < 2 or n < 1 or d < 2:
        raise PreconditionError(f"need b >= 2, n >= 1, d >= 2, got {(b, n, d)}")
    ensure_bits(n * d * ceil_log2(b), max_bits, what=f"{b}^{n * d} - 1")

    M = (b ** gcd(n, d) - 1) // (b - 1)
    top = b ** (n * d) - 1
    return CofactorReport(
        b=b,
        n=n,
        d=d,
        M=M,
        r_num_over_n=(top // (b ** n - 1)) % M,
        r_num_over_d=(top // (b ** d - 1)) % M,
    )


def valuation_imbalance(
    b: int,
    n: int,
    d: int,
    factorizer: Optional[Factorizer] = None,
    max_bits: int = DEFAULT_MAX_BITS,
) -> ImbalanceReport:
    """Compare ν_p of (b^{nd}-1)(b-1) and (b^n-1)(b^d-1) for a prime p chosen from gcd(n, d)."""
    if b < 2 or n < 1 or d < 1:
        raise PreconditionError(f"need b >= 2 and positive n, d, got {(b, n, d)}")
    common = gcd(n, d)
    if common <= 1:
        raise PreconditionError(f"n={n} and d={d} are coprime")
    ensure_bits((n * d + 1) * ceil_log2(b), max_bits, what=f"{b}^{n * d} - 1")

    q = factorize(common, factorizer).primes()[0]
    if q >= 3:
        witness = zsigmondy_witness(b, q, factorizer, max_bits)
        if witness.prime is None:
            raise ArithmeticError(f"{b}^{q} - 1 has no primitive prime divisor")
        p = witness.prime
        if p == q or p == 2:
            raise ArithmeticError(f"primitive prime {p} of {b}^{q} - 1 must differ from q and 2")
        case = ImbalanceCase.ODD_COMMON_PRIME
    elif not is_power_of_two(b + 1):
        p = next(r for r in factorize(b + 1, factorizer).primes() if r != 2)
        case = ImbalanceCase.TWO_WITH_ODD_PRIME
    else:
        p = 2
        case = ImbalanceCase.TWO_MERSENNE_BASE

    nu_num = valuation(p, (b ** (n * d) - 1) * (b - 1))
    nu_den = valuation(p, (b ** n - 1) * (b ** d - 1))
    predicted_num, predicted_den = _predicted_valuations(b, n, d, q, p)
    logger.debug(f"imbalance b={b} n={n} d={d}: q={q} p={p} num={nu_num} den={nu_den}")

    return ImbalanceReport(
        q=q,
        p=p,
        nu_num=nu_num,
        nu_den=nu_den,
        case=case,
        predicted_nu_num=predicted_num,
        predicted_nu_den=predicted_den,
    )


def _predicted_valuations(b: int, n: int, d: int, q: int, p: int) -> Tuple[int, int]:
    """Lifting-the-exponent values of ν_p for numerator and denominator."""
    if p == 2:
        numerator = lte_nu_two(b, n * d) + valuation(2, b - 1)
        denominator = lte_nu_two(b, n) + lte_nu_two(b, d)
        return numerator, denominator
    # b has order q modulo p, so c = b^q ≡ 1 and p ∤ b - 1.
    c = b ** q
    numerator = lte_nu_odd(p, c, n * d // q)
    denominator = lte_nu_odd(p, c, n // q) + lte_nu_odd(p, c, d // q)
    return numerator, denominator


def partial_quotient_divides(
    a: int, m: int, k: int, d: int, max_bits: int = DEFAULT_MAX_BITS
) -> bool:
    """Whether (a^{kd} - 1) divides (a^{md} - 1)(a^k - 1)."""
    if a < 2 or m < 1 or k < 1 or d < 2:
        raise PreconditionError(f"invalid arguments {(a, m, k, d)}")
    ensure_bits((max(m, k) * d + k) * ceil_log2(a), max_bits, what="partial quotient")
    return ((a ** (m * d) - 1) * (a ** k - 1)) % (a ** (k * d) - 1) == 0

