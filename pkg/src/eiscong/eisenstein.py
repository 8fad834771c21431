"""Weight-2 Eisenstein eigenseries on Gamma_0(N), N square-free.

The series is built by level raising from ``e(q) = 1/24 + sum sigma(n) q^n``:
at each prime p | N we apply either ``g - p g(q^p)`` (U_p-eigenvalue 1) or
``g - g(q^p)`` (U_p-eigenvalue p). :func:`eis_coeff` is a closed form for the
same coefficients that never touches a series, used as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from .errors import InvalidDeltaChoice
from .exactnum import is_squarefree, ord_p, prime_factors, prime_to_part, sigma
from .qseries import QExpansion, dilate, sub

E_CONSTANT = Fraction(1, 24)


@dataclass(frozen=True)
class DeltaChoice:
    """Prescribed U_p-eigenvalue ``delta[p]`` in {1, p} for every prime p | level."""

    level: int
    delta: dict[int, int] = field(hash=False)

    def __post_init__(self):
        N = self.level
        if N < 1 or not is_squarefree(N):
            raise InvalidDeltaChoice(f"level {N} is not a square-free positive integer")
        primes = prime_factors(N)
        delta = {int(p): int(v) for p, v in self.delta.items()}
        if set(delta) != set(primes):
            raise InvalidDeltaChoice(
                f"delta must be given exactly at the primes {list(primes)} dividing {N}, "
                f"got {sorted(delta)}"
            )
        for p, v in delta.items():
            if v not in (1, p):
                raise InvalidDeltaChoice(f"delta_{p} = {v} is neither 1 nor {p}")
        if all(v != 1 for v in delta.values()):
            raise InvalidDeltaChoice("at least one prime needs delta_p = 1")
        object.__setattr__(self, "delta", dict(sorted(delta.items())))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(self.delta)

    @classmethod
    def all_for_level(cls, N: int) -> list["DeltaChoice"]:
        """Every valid choice at level N, in a fixed order."""
        primes = prime_factors(N)
        out = []
        for mask in range(2 ** len(primes)):
            delta = {p: (p if mask >> i & 1 else 1) for i, p in enumerate(primes)}
            if all(v != 1 for v in delta.values()):
                continue
            out.append(cls(N, delta))
        return out

    def label(self) -> str:
        return ",".join(f"{p}={v}" for p, v in self.delta.items())


def e_series(prec: int) -> QExpansion:
    if prec < 0:
        raise ValueError("precision must be non-negative")
    return QExpansion((E_CONSTANT,) + tuple(sigma(n) for n in range(1, prec + 1)))


def raise_keep_one(g: QExpansion, p: int) -> QExpansion:
    """``g(q) - p g(q^p)``; sets the U_p-eigenvalue to 1."""
    return sub(g, QExpansion(tuple(p * c for c in dilate(g, p).coeffs), g.modulus))


def raise_keep_p(g: QExpansion, p: int) -> QExpansion:
    """``g(q) - g(q^p)``; sets the U_p-eigenvalue to p and kills the constant term."""
    return sub(g, dilate(g, p))


def build_eisenstein(dc: DeltaChoice, prec: int, order=None) -> QExpansion:
    """Level-raise e(q) prime by prime; ``order`` overrides the ascending default."""
    primes = dc.primes if order is None else tuple(order)
    if sorted(primes) != list(dc.primes):
        raise ValueError(f"order {primes} is not a permutation of {dc.primes}")
    g = e_series(prec)
    for p in primes:
        g = raise_keep_one(g, p) if dc.delta[p] == 1 else raise_keep_p(g, p)
    return g


def eis_coeff(dc: DeltaChoice, n: int) -> Fraction:
    """Closed-form n-th coefficient of ``build_eisenstein(dc, ...)``."""
    if n < 0:
        raise ValueError("index must be non-negative")
    if n == 0:
        if any(v != 1 for v in dc.delta.values()):
            return Fraction(0)
        return E_CONSTANT * prod(1 - p for p in dc.primes)
    n0 = prime_to_part(n, dc.primes)
    big = prod(p ** ord_p(n, p) for p, v in dc.delta.items() if v != 1)
    return Fraction(sigma(n0) * big)


def claim_formula_coeff(M: int, s: int, n: int) -> int:
    """Literal coefficient expression ``sigma(n/(n,M)) * prod_{p | M/s} p^ord_p(n)``.

    Kept only for comparison with the eigenform coefficients; it disagrees with
    them at indices divisible by ``p^2`` for some prime ``p | M``.
    """
    return sigma(n // gcd(n, M)) * prod(p ** ord_p(n, p) for p in prime_factors(M) if p != s)


def parse_delta(text: str, level: int) -> DeltaChoice:
    """Parse ``"2=2,13=1"`` into a DeltaChoice at ``level``."""
    delta = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            p, v = (int(x) for x in item.split("="))
        except ValueError:
            raise InvalidDeltaChoice(f"bad delta entry {item!r}; expected p=v") from None
        if p in delta:
            raise InvalidDeltaChoice(f"delta given twice for {p}")
        delta[p] = v
    return DeltaChoice(level, delta)
