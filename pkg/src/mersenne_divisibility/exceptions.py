"""
Error hierarchy for mersenne-divisibility.

Every error raised on purpose by the library derives from ``MersenneError`` so
the command-line front end can map it onto an exit code.
"""

from typing import Any, Optional, Tuple


class MersenneError(Exception):
    """Base class for all library errors."""


class InvalidInstanceError(MersenneError, ValueError):
    """A domain value (base, stride, length, ...) is outside its range."""


class PreconditionError(MersenneError, ValueError):
    """An operation was called with inputs violating its precondition."""


class GuardExceededError(MersenneError):
    """The bit-size guard would be exceeded by an evaluation."""

    def __init__(self, required_bits: int, max_bits: int, what: str = "value"):
        self.required_bits = required_bits
        self.max_bits = max_bits
        self.what = what
        super().__init__(
            f"{what} needs about {required_bits} bits, above the guard of {max_bits} bits"
        )

    def __reduce__(self) -> Tuple[Any, ...]:
        return (type(self), (self.required_bits, self.max_bits, self.what))


class BudgetExceededError(MersenneError):
    """A polynomial degree budget would be exceeded."""

    def __init__(self, degree: int, max_degree: int):
        self.degree = degree
        self.max_degree = max_degree
        super().__init__(f"degree {degree} exceeds the budget of {max_degree}")

    def __reduce__(self) -> Tuple[Any, ...]:
        return (type(self), (self.degree, self.max_degree))


class UnfactoredCofactorError(MersenneError):
    """The randomized splitter ran out of effort on a composite cofactor."""

    def __init__(self, cofactor: int, iterations: Optional[int] = None):
        self.cofactor = cofactor
        self.iterations = iterations
        super().__init__(
            f"could not split a {cofactor.bit_length()}-bit composite cofactor"
            + (f" within {iterations} iterations" if iterations is not None else "")
        )

    def __reduce__(self) -> Tuple[Any, ...]:
        return (type(self), (self.cofactor, self.iterations))
