"""
Exact dense polynomial arithmetic over the integers.

Houses M_d(x^s), x^n - 1 and cyclotomic polynomials, exact and monic division,
a primitive-remainder-sequence gcd, repeated-root extraction, the polynomial
form of the divisibility criterion and the symbolic residue congruence
M_d(x^n) ≡ l·M_{d1}(x^l) (mod M_d(x)).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd
from typing import List, Optional, Tuple

from sympy import divisors

from .config import DEFAULT_MAX_DEGREE
from .exceptions import BudgetExceededError, InvalidInstanceError, PreconditionError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients in ascending degree order."""
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(self.coeffs)
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @classmethod
    def of(cls, *coeffs: int) -> "IntPoly":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> "IntPoly":
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def x_power_minus_one(cls, n: int) -> "IntPoly":
        """x^n - 1."""
        if n < 1:
            raise InvalidInstanceError(f"n must be >= 1, got {n}")
        return cls((-1,) + (0,) * (n - 1) + (1,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __add__(self, other: "IntPoly") -> "IntPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly()
        result = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    result[i + j] += x * y
        return IntPoly(tuple(result))

    def scale(self, factor: int) -> "IntPoly":
        return IntPoly(tuple(factor * c for c in self.coeffs))

    def evaluate(self, x: int) -> int:
        """Value at the integer ``x`` (Horner)."""
        value = 0
        for c in reversed(self.coeffs):
            value = value * x + c
        return value

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose_power(self, k: int) -> "IntPoly":
        """f(x^k)."""
        if k < 1:
            raise InvalidInstanceError(f"k must be >= 1, got {k}")
        if self.is_zero():
            return self
        result = [0] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            result[i * k] = c
        return IntPoly(tuple(result))

    def content(self) -> int:
        """Gcd of the coefficients, signed like the leading coefficient."""
        if self.is_zero():
            return 0
        g = reduce(gcd, self.coeffs)
        return g if self.leading > 0 else -g

    def primitive_part(self) -> "IntPoly":
        """Self divided by its content: primitive with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        return IntPoly(tuple(x // c for x in self.coeffs))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms: List[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            magnitude = abs(c)
            if i == 0:
                body = str(magnitude)
            else:
                power = "x" if i == 1 else f"x^{i}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms)


def poly_mersenne(d: int, stride: int) -> IntPoly:
    """Σ_{j<d} x^{stride·j}."""
    if d < 1 or stride < 1:
        raise InvalidInstanceError(f"need d >= 1 and stride >= 1, got d={d}, stride={stride}")
    coeffs = [0] * ((d - 1) * stride + 1)
    for j in range(d):
        coeffs[j * stride] = 1
    return IntPoly(tuple(coeffs))


def _divmod(f: IntPoly, g: IntPoly) -> Optional[Tuple[IntPoly, IntPoly]]:
    """Long division over Z; None when a leading coefficient does not divide."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    remainder = list(f.coeffs)
    divisor = g.coeffs
    lead = g.leading
    shift_count = len(remainder) - len(divisor) + 1
    if shift_count <= 0:
        return IntPoly(), f
    quotient = [0] * shift_count
    for shift in range(shift_count - 1, -1, -1):
        top = remainder[shift + len(divisor) - 1]
        if top == 0:
            continue
        factor, rest = divmod(top, lead)
        if rest:
            return None
        quotient[shift] = factor
        for i, c in enumerate(divisor):
            remainder[shift + i] -= factor * c
    return IntPoly(tuple(quotient)), IntPoly(tuple(remainder))


def poly_exact_div(f: IntPoly, g: IntPoly) -> Optional[IntPoly]:
    """h with f = g·h over Z, or None if g does not divide f."""
    result = _divmod(f, g)
    if result is None:
        return None
    quotient, remainder = result
    return quotient if remainder.is_zero() else None


def poly_mod(f: IntPoly, g: IntPoly) -> IntPoly:
    """Remainder of f modulo the monic polynomial g."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if not g.is_monic():
        raise PreconditionError(f"modulus must be monic, got leading coefficient {g.leading}")
    result = _divmod(f, g)
    assert result is not None
    return result[1]


def poly_criterion(m: int, k: int, d: int) -> bool:
    """Whether M_d(x^k) divides M_d(x^m) in Z[x]: k | m and gcd(m/k, d) = 1."""
    if m < 1 or k < 1 or d < 2:
        raise InvalidInstanceError(f"need m, k >= 1 and d >= 2, got {(m, k, d)}")
    if m % k:
        return False
    return gcd(m // k, d) == 1


def eq1_congruence_check(n: int, d: int) -> Tuple[IntPoly, IntPoly]:
    """Both sides of M_d(x^n) ≡ l·M_{d1}(x^l) reduced modulo M_d(x)."""
    if n < 1 or d < 2:
        raise InvalidInstanceError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    l = gcd(n, d)
    modulus = poly_mersenne(d, 1)
    lhs = poly_mod(poly_mersenne(d, n), modulus)
    rhs = poly_mod(poly_mersenne(d // l, l).scale(l), modulus)
    return lhs, rhs


def _check_degree(degree: int, max_degree: int) -> None:
    if degree > max_degree:
        raise BudgetExceededError(degree, max_degree)


@lru_cache(maxsize=512)
def _cyclotomic(n: int) -> IntPoly:
    result = IntPoly.x_power_minus_one(n)
    for e in divisors(n)[:-1]:
        quotient = poly_exact_div(result, _cyclotomic(e))
        assert quotient is not None
        result = quotient
    logger.debug(f"built cyclotomic polynomial of order {n}")
    return result


def cyclotomic_poly(n: int, max_degree: int = DEFAULT_MAX_DEGREE) -> IntPoly:
    """Φ_n, by exact division of x^n - 1 by the lower cyclotomic polynomials."""
    if n < 1:
        raise InvalidInstanceError(f"n must be >= 1, got {n}")
    _check_degree(n, max_degree)
    return _cyclotomic(n)


def root_of_unity_divisibility(
    m: int, k: int, d: int, max_degree: int = DEFAULT_MAX_DEGREE
) -> bool:
    """Whether the primitive kd-th roots of unity are roots of x^{md} - 1.

    Equivalently Φ_{kd} | x^{md} - 1, which holds iff kd | md.
    """
    if m < 1 or k < 1 or d < 1:
        raise InvalidInstanceError(f"need positive m, k, d, got {(m, k, d)}")
    _check_degree(max(m, k) * d, max_degree)
    return poly_mod(IntPoly.x_power_minus_one(m * d), cyclotomic_poly(k * d, max_degree)).is_zero()


def _pseudo_remainder(f: IntPoly, g: IntPoly) -> IntPoly:
    remainder = f
    lead = g.leading
    while not remainder.is_zero() and remainder.degree >= g.degree:
        shift = remainder.degree - g.degree
        remainder = remainder.scale(lead) - (g * IntPoly.monomial(shift, remainder.leading))
    return remainder


def poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Gcd in Z[x]: primitive-part remainder sequence, positive leading coefficient."""
    if f.is_zero():
        return -g if g.leading < 0 else g
    if g.is_zero():
        return -f if f.leading < 0 else f

    content = gcd(f.content(), g.content())
    a, b = f.primitive_part(), g.primitive_part()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        a, b = b, _pseudo_remainder(a, b).primitive_part()
    return a.primitive_part().scale(content)


def multiple_root_witness(f: IntPoly) -> Optional[IntPoly]:
    """The repeated part of f with every factor x - 1 removed, or None if nothing remains."""
    if f.is_zero():
        raise PreconditionError("multiple_root_witness needs a nonzero polynomial")
    repeated = poly_gcd(f, f.derivative()).primitive_part()
    x_minus_one = IntPoly.of(-1, 1)
    while repeated.degree >= 1 and repeated.evaluate(1) == 0:
        stripped = poly_exact_div(repeated, x_minus_one)
        assert stripped is not None
        repeated = stripped
    if repeated.degree < 1:
        return None
    return repeated.primitive_part()


def substitution_divisibility(f: IntPoly, g: IntPoly, k: int) -> Tuple[bool, bool]:
    """(g | f, g(x^k) | f(x^k)) in Z[x]; the two always agree."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if not g.is_monic():
        raise PreconditionError("g must be monic")
    direct = poly_exact_div(f, g) is not None
    substituted = poly_exact_div(f.compose_power(k), g.compose_power(k)) is not None
    return direct, substituted


def poly_cross_divisibility(m: int, k: int, d: int, max_degree: int = DEFAULT_MAX_DEGREE) -> bool:
    """Whether (x^m - 1)(x^{kd} - 1) divides (x^{md} - 1)(x^k - 1) in Z[x]."""
    if m < 1 or k < 1 or d < 2:
        raise InvalidInstanceError(f"need m, k >= 1 and d >= 2, got {(m, k, d)}")
    _check_degree(m * d + k, max_degree)
    numerator = IntPoly.x_power_minus_one(m * d) * IntPoly.x_power_minus_one(k)
    denominator = IntPoly.x_power_minus_one(m) * IntPoly.x_power_minus_one(k * d)
    return poly_exact_div(numerator, denominator) is not None


def mersenne_quotient(m: int, k: int, d: int, max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[IntPoly]:
    """M_d(x^m) / M_d(x^k) when exact in Z[x], otherwise None."""
    if m < 1 or k < 1 or d < 2:
        raise InvalidInstanceError(f"need m, k >= 1 and d >= 2, got {(m, k, d)}")
    _check_degree(max(m, k) * (d - 1), max_degree)
    return poly_exact_div(poly_mersenne(d, m), poly_mersenne(d, k))

