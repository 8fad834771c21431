"""Exact integer, rational and residue arithmetic.

Rationals are :class:`fractions.Fraction`, which already keeps values in lowest
terms with a positive denominator. Residues get a small immutable wrapper so
that mixing moduli is caught instead of silently producing garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

from .errors import NotAUnit, RingMismatch

Rational = Fraction


@dataclass(frozen=True, slots=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    @classmethod
    def of(cls, x, modulus: int) -> "Residue":
        """Reduce an int, Fraction or Residue into Z/modulus."""
        if isinstance(x, Residue):
            _same_modulus(x.modulus, modulus)
            return x
        if isinstance(x, Fraction):
            if gcd(x.denominator, modulus) != 1:
                raise NotAUnit(x.denominator, modulus)
            return cls(x.numerator * pow(x.denominator, -1, modulus) % modulus, modulus)
        return cls(int(x) % modulus, modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            _same_modulus(self.modulus, other.modulus)
            return other.value
        return Residue.of(other, self.modulus).value

    def __add__(self, other):
        return Residue((self.value + self._coerce(other)) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue((self.value - self._coerce(other)) % self.modulus, self.modulus)

    def __rsub__(self, other):
        return Residue((self._coerce(other) - self.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value % self.modulus, self.modulus)

    def __int__(self):
        return self.value

    def __str__(self):
        return f"{self.value} mod {self.modulus}"


def _same_modulus(m1: int, m2: int) -> None:
    if m1 != m2:
        raise RingMismatch(f"moduli differ: {m1} vs {m2}")


def mod_inverse(a: Residue) -> Residue:
    if gcd(a.value, a.modulus) != 1:
        raise NotAUnit(a.value, a.modulus)
    return Residue(pow(a.value, -1, a.modulus), a.modulus)


def _check_positive(n: int) -> None:
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization, primes ascending; ``()`` for 1."""
    _check_positive(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n)
    return len(f) == 1 and f[0][1] == 1


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, is_p in enumerate(sieve) if is_p]


def sigma(n: int) -> int:
    """Sum of the positive divisors of ``n``."""
    _check_positive(n)
    return prod((p ** (e + 1) - 1) // (p - 1) for p, e in factorize(n))


def ord_p(n: int, p: int) -> int:
    _check_positive(n)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def prime_to_part(n: int, primes) -> int:
    """``n`` with every factor of a prime in ``primes`` removed."""
    _check_positive(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def reduce_rational(x, r: int) -> int:
    """Image of an integer or rational in Z/r as an int in [0, r)."""
    return Residue.of(Fraction(x), r).value


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
