"""Exact arithmetic in a prime field Z/pZ.

All boundary-matrix coefficients are canonical residues in [0, p).  The
matrix code works on plain ints through a :class:`PrimeField`, which keeps
the hot loops free of wrapper objects; :class:`FieldElement` is the value
type for code that prefers operator syntax.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError, ValidationError

# Witnesses making Miller-Rabin deterministic for every n < 3.3 * 10^24,
# far beyond the supported p < 2^31.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_PRIME = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 2**31."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime modulus p, 2 <= p < 2**31.

    Rejecting a composite modulus here is deliberate: a bad p would
    otherwise only surface much later, as a failed inversion deep inside a
    reduction.
    """

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not (2 <= self.p <= MAX_PRIME):
            raise ValidationError(f"field modulus must be an integer in [2, 2**31): got {self.p!r}")
        if not is_prime(self.p):
            raise ValidationError(f"field modulus must be prime: {self.p} is composite")

    def normalize(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        """Multiplicative inverse by Fermat exponentiation."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def __str__(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class FieldElement:
    """A canonical residue paired with its field.

    Mixing elements of different fields is a caller bug and raises
    :class:`UsageError` rather than silently coercing.
    """

    value: int
    field: PrimeField

    def __post_init__(self):
        if not (0 <= self.value < self.field.p):
            object.__setattr__(self, "value", self.value % self.field.p)

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise UsageError(f"mixed-field operands: {self.field} vs {other.field}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.mul(self.value, self.field.inv(other.value)), self.field)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"
