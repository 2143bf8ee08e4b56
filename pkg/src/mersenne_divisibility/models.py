"""
Data models for mersenne-divisibility.

This module defines the value types shared by the arithmetic modules and the
command-line harness: divisibility instances, certificates, factorizations,
Zsigmondy results, the cofactor and valuation reports, and sweep records.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Any, ClassVar, Dict, Iterator, List, Optional, Tuple, Type

from .exceptions import GuardExceededError, InvalidInstanceError, PreconditionError


@dataclass(frozen=True)
class DivInstance:
    """One divisibility question: does M_d(a^m) divide by M_d(a^k)?"""
    a: int
    m: int
    k: int
    d: int

    def __post_init__(self) -> None:
        """Validate the instance against the domain minima."""
        for name, value, minimum in (
            ("a", self.a, 2),
            ("m", self.m, 1),
            ("k", self.k, 1),
            ("d", self.d, 2),
        ):
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidInstanceError(f"{name} must be an integer, got {value!r}")
            if value < minimum:
                raise InvalidInstanceError(f"{name} must be >= {minimum}, got {value}")

    def bit_size(self) -> int:
        """Bits of the larger of M_d(a^m), M_d(a^k) as bounded by stride·d·⌈log₂ a⌉."""
        return max(self.m, self.k) * self.d * (self.a - 1).bit_length()

    def check_guard(self, max_bits: int) -> None:
        """Raise GuardExceededError if evaluating the instance is too large."""
        required = self.bit_size()
        if required > max_bits:
            raise GuardExceededError(required, max_bits, what=f"instance {self.as_tuple()}")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.m, self.k, self.d)

    def reduce(self) -> "ReducedInstance":
        """Build the reduced tuple (b, n, l, n1, d1); requires k | m."""
        if self.m % self.k != 0:
            raise PreconditionError(f"k={self.k} does not divide m={self.m}")
        b = self.a ** self.k
        n = self.m // self.k
        l = gcd(n, self.d)
        return ReducedInstance(b=b, n=n, l=l, n1=n // l, d1=self.d // l)

    def to_dict(self) -> Dict[str, int]:
        """Convert to dictionary for serialization."""
        return {"a": self.a, "m": self.m, "k": self.k, "d": self.d}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DivInstance":
        """Create DivInstance from dictionary."""
        return cls(a=int(data["a"]), m=int(data["m"]), k=int(data["k"]), d=int(data["d"]))


@dataclass(frozen=True)
class ReducedInstance:
    """Derived tuple b = a^k, n = m/k, l = gcd(n, d), n1 = n/l, d1 = d/l."""
    b: int
    n: int
    l: int
    n1: int
    d1: int

    def __post_init__(self) -> None:
        if self.b < 2 or self.n < 1 or self.l < 1:
            raise InvalidInstanceError(f"invalid reduced instance {self}")
        if self.n1 * self.l != self.n or gcd(self.n1, self.d1) != 1:
            raise InvalidInstanceError(f"inconsistent reduced instance {self}")

    @property
    def d(self) -> int:
        return self.d1 * self.l


class CertificateKind(Enum):
    """Kinds of evidence produced by ``explain``."""
    DIVIDES = "divides"
    ORDER_WITNESS = "order-witness"
    RESIDUE_WITNESS = "residue-witness"
    RAW_REMAINDER = "raw-remainder"


@dataclass(frozen=True)
class Certificate:
    """Base class of all certificates."""
    kind: ClassVar[CertificateKind]

    @property
    def divides(self) -> bool:
        return self.kind is CertificateKind.DIVIDES

    def describe(self) -> str:
        raise NotImplementedError("Subclasses must implement describe method")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        data: Dict[str, Any] = {"kind": self.kind.value}
        data.update(self.__dict__)
        return data


@dataclass(frozen=True)
class DividesCertificate(Certificate):
    """Q · M_d(a^k) = M_d(a^m)."""
    quotient: int
    kind: ClassVar[CertificateKind] = CertificateKind.DIVIDES

    def describe(self) -> str:
        return f"Q={_short_int(self.quotient)}"


@dataclass(frozen=True)
class OrderWitnessCertificate(Certificate):
    """A prime p of multiplicative order kd dividing M_d(a^k) but not M_d(a^m)."""
    prime: int
    order: int
    kind: ClassVar[CertificateKind] = CertificateKind.ORDER_WITNESS

    def describe(self) -> str:
        return f"order-witness p={self.prime} ord={self.order}"


@dataclass(frozen=True)
class ResidueWitnessCertificate(Certificate):
    """M_d(b^n) mod M_d(b) equals the nonzero residue l·M_{d1}(b^l)."""
    l: int
    residue: int
    modulus: int
    kind: ClassVar[CertificateKind] = CertificateKind.RESIDUE_WITNESS

    def describe(self) -> str:
        return (
            f"residue-witness l={self.l} r={_short_int(self.residue)} "
            f"mod {_short_int(self.modulus)}"
        )


@dataclass(frozen=True)
class RawRemainderCertificate(Certificate):
    """M_d(a^m) mod M_d(a^k) equals the nonzero remainder r."""
    remainder: int
    modulus: int
    kind: ClassVar[CertificateKind] = CertificateKind.RAW_REMAINDER

    def describe(self) -> str:
        return f"raw-remainder r={_short_int(self.remainder)} mod {_short_int(self.modulus)}"


_CERTIFICATE_TYPES: Dict[str, Type[Certificate]] = {
    CertificateKind.DIVIDES.value: DividesCertificate,
    CertificateKind.ORDER_WITNESS.value: OrderWitnessCertificate,
    CertificateKind.RESIDUE_WITNESS.value: ResidueWitnessCertificate,
    CertificateKind.RAW_REMAINDER.value: RawRemainderCertificate,
}


def certificate_from_dict(data: Dict[str, Any]) -> Certificate:
    """Create a certificate from its dictionary form."""
    fields = dict(data)
    kind = fields.pop("kind", None)
    if kind not in _CERTIFICATE_TYPES:
        raise ValueError(f"Unknown certificate kind: {kind!r}")
    return _CERTIFICATE_TYPES[kind](**{key: int(value) for key, value in fields.items()})


def _short_int(value: int, max_bits: int = 4096) -> str:
    if value.bit_length() > max_bits:
        return f"<{value.bit_length()}-bit integer>"
    return str(value)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (p, e) pairs sorted ascending by p."""
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("Factorization primes must be distinct and ascending")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("Factorization exponents must be positive")

    @classmethod
    def from_mapping(cls, mapping: Dict[int, int]) -> "Factorization":
        return cls(tuple(sorted((p, e) for p, e in mapping.items() if e > 0)))

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        """Product of p^e."""
        result = 1
        for p, e in self.factors:
            result *= p ** e
        return result

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)


class ZsigmondyException(Enum):
    """The classical pairs (a, n) for which a^n - 1 has no primitive prime divisor."""
    N_EQUALS_1_BASE_2 = "base-2 n=1"
    N_EQUALS_2_BASE_PLUS_ONE_POWER_OF_TWO = "a+1 power of two"
    BASE_2_N_6 = "base-2 n=6"


@dataclass(frozen=True)
class ZsigmondyResult:
    """Either a primitive prime divisor of a^n - 1 or the exception that rules it out."""
    a: int
    n: int
    prime: Optional[int] = None
    reason: Optional[ZsigmondyException] = None

    def __post_init__(self) -> None:
        if (self.prime is None) == (self.reason is None):
            raise ValueError("ZsigmondyResult needs exactly one of prime or reason")

    @property
    def is_witness(self) -> bool:
        return self.prime is not None

    def describe(self) -> str:
        if self.prime is not None:
            return f"p={self.prime} ord={self.n}"
        assert self.reason is not None
        return f"exceptional: {self.reason.value}"


@dataclass(frozen=True)
class CofactorReport:
    """Residues of the two cofactors of b^{nd} - 1 modulo M = (b^g - 1)/(b - 1)."""
    b: int
    n: int
    d: int
    M: int
    r_num_over_n: int
    r_num_over_d: int

    def congruences_hold(self) -> bool:
        """r_num_over_n ≡ d and r_num_over_d ≡ n modulo M."""
        return self.r_num_over_n == self.d % self.M and self.r_num_over_d == self.n % self.M

    def describe(self) -> str:
        return f"M={_short_int(self.M)} r1={self.r_num_over_n} r2={self.r_num_over_d}"


class ImbalanceCase(Enum):
    """Which branch selected the comparison prime."""
    ODD_COMMON_PRIME = "q>=3, primitive prime of b^q-1"
    TWO_WITH_ODD_PRIME = "q=2, odd prime of b+1"
    TWO_MERSENNE_BASE = "q=2, b+1 power of two"


@dataclass(frozen=True)
class ImbalanceReport:
    """p-adic valuations of numerator and denominator of (b^{nd}-1)(b-1)/((b^n-1)(b^d-1))."""
    q: int
    p: int
    nu_num: int
    nu_den: int
    case: ImbalanceCase
    predicted_nu_num: Optional[int] = None
    predicted_nu_den: Optional[int] = None

    @property
    def is_imbalanced(self) -> bool:
        return self.nu_den > self.nu_num

    def describe(self) -> str:
        return f"q={self.q} p={self.p} num={self.nu_num} den={self.nu_den}"


SWEEP_FIELDS: Tuple[str, ...] = (
    "a", "m", "k", "d", "criterion", "oracle", "poly", "elapsed_micros",
)


@dataclass(frozen=True)
class SweepRecord:
    """Verdicts for one grid point."""
    a: int
    m: int
    k: int
    d: int
    criterion: bool
    oracle: bool
    poly: Optional[bool] = None
    elapsed_micros: int = 0

    def is_consistent(self) -> bool:
        """criterion = oracle, and poly = criterion when present."""
        return self.criterion == self.oracle and (
            self.poly is None or self.poly == self.criterion
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to an ordered dictionary (field order is part of the output schema)."""
        return {name: getattr(self, name) for name in SWEEP_FIELDS}


@dataclass
class PartitionResult:
    """Records and guard-skipped points of one leading-coordinate partition."""
    a: int
    records: List[SweepRecord] = field(default_factory=list)
    skipped: List[Tuple[int, int, int, int]] = field(default_factory=list)


@dataclass
class SweepSummary:
    """Summary of a sweep."""
    total: int = 0
    divides: int = 0
    non_divides: int = 0
    skipped: int = 0
    mismatches: int = 0
    duration: Optional[float] = None

    def add_record(self, record: SweepRecord) -> None:
        """Add a record to the summary."""
        self.total += 1
        if record.oracle:
            self.divides += 1
        else:
            self.non_divides += 1
        if not record.is_consistent():
            self.mismatches += 1

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "total": self.total,
            "divides": self.divides,
            "non_divides": self.non_divides,
            "skipped": self.skipped,
            "mismatches": self.mismatches,
            "duration": self.duration,
        }
